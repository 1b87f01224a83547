"""Dense symmetric linear algebra used throughout the package.

Matrices are plain ``float64`` numpy arrays. Anything accepting a
"symmetric matrix" runs it through :func:`as_symmetric` first, which
symmetrizes and rejects non-finite entries.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import InvalidInputError, NumericalError


def as_symmetric(a) -> np.ndarray:
    """Return ``(a + a.T) / 2`` as a float64 array; exactly symmetric."""
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise InvalidInputError(f"expected a square matrix, got shape {a.shape}")
    if a.shape[0] == 0:
        raise InvalidInputError("matrix dimension must be positive")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return 0.5 * (a + a.T)


def _check(a) -> np.ndarray:
    a = np.asarray(a, dtype=np.float64)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        raise InvalidInputError(f"expected a non-empty square matrix, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise InvalidInputError("matrix has non-finite entries")
    return a


def spectral_norm(a) -> float:
    """Largest absolute eigenvalue of a symmetric matrix."""
    a = _check(a)
    w = np.linalg.eigvalsh(a)
    return float(max(abs(w[0]), abs(w[-1])))


def spectral_norms(stack: np.ndarray) -> np.ndarray:
    """Spectral norms of a ``(k, d, d)`` stack of symmetric matrices."""
    w = np.linalg.eigvalsh(stack)
    return np.maximum(np.abs(w[..., 0]), np.abs(w[..., -1]))


def frobenius_norm(a) -> float:
    a = _check(a)
    return float(np.sqrt(np.sum(a * a)))


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues sorted descending; column ``j`` of ``eigenvectors`` pairs with ``eigenvalues[j]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        q = self.eigenvectors
        return (q * self.eigenvalues) @ q.T


def _canonical_signs(q: np.ndarray) -> np.ndarray:
    # first entry with magnitude above noise made positive
    q = q.copy()
    for j in range(q.shape[1]):
        col = q[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-12)
        if nz.size and col[nz[0]] < 0:
            q[:, j] = -col
    return q


def symmetric_eigen(a) -> EigenDecomposition:
    """Deterministic eigendecomposition of a symmetric matrix.

    Ties in eigenvalue are ordered by the lexicographic order of the
    sign-normalized eigenvectors.
    """
    a = _check(a)
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(
            "symmetric eigensolver did not converge",
            {"dim": a.shape[0], "lapack": str(exc)},
        ) from exc
    q = _canonical_signs(q)
    # lexsort: last key is primary
    keys = tuple(q[i] for i in range(q.shape[0] - 1, -1, -1)) + (-w,)
    order = np.lexsort(keys)
    return EigenDecomposition(eigenvalues=w[order], eigenvectors=q[:, order])


def project_spectral_ball(a: np.ndarray, t: float) -> np.ndarray:
    """Frobenius-nearest matrix with spectral norm at most ``t`` (``t >= 0``).

    Skips the reconstruction when ``a`` is already inside the ball.
    """
    w, q = np.linalg.eigh(a)
    if w[0] >= -t and w[-1] <= t:
        return a
    wc = np.clip(w, -t, t)
    out = (q * wc) @ q.T
    return 0.5 * (out + out.T)


def clip_eigenvalues(a, t: float) -> np.ndarray:
    """Clamp every eigenvalue of ``a`` into ``[-t, t]``."""
    if not t > 0:
        raise InvalidInputError(f"clip threshold must be positive, got {t}")
    a = as_symmetric(a)
    try:
        w, q = np.linalg.eigh(a)
    except np.linalg.LinAlgError as exc:
        raise NumericalError("eigensolver failed while clipping", {"lapack": str(exc)}) from exc
    if w[0] >= -t and w[-1] <= t:
        return a
    out = (q * np.clip(w, -t, t)) @ q.T
    return 0.5 * (out + out.T)


@dataclass(frozen=True)
class SubspaceBasis:
    """Orthonormal basis (columns of ``basis``) of a subspace of R^n.

    ``constraints`` holds the vectors the subspace is orthogonal to, one per
    row. ``delta_sq`` is set only when the subspace came from an eigenvalue
    threshold.
    """

    ambient_dim: int
    basis: np.ndarray
    constraints: np.ndarray = field(repr=False)
    constraint_count: int = 0
    delta_sq: float | None = None

    @property
    def dim(self) -> int:
        return self.basis.shape[1]

    def project(self, y: np.ndarray) -> np.ndarray:
        return self.basis @ (self.basis.T @ y)


def full_space(n: int) -> SubspaceBasis:
    return SubspaceBasis(n, np.eye(n), np.zeros((0, n)), 0)


def orthonormal_complement_basis(constraints, n: int | None = None) -> SubspaceBasis:
    """Orthonormal basis of the orthogonal complement of ``span(constraints)``.

    Rank is decided with a singular value cutoff of ``1e-10 * s_max``.
    """
    c = np.asarray(constraints, dtype=np.float64)
    if c.size == 0:
        if n is None:
            if c.ndim == 2 and c.shape[1] > 0:
                n = c.shape[1]
            else:
                raise InvalidInputError("ambient dimension unknown for empty constraint list")
        return full_space(n)
    c = np.atleast_2d(c)
    if n is not None and c.shape[1] != n:
        raise InvalidInputError(f"constraints have length {c.shape[1]}, expected {n}")
    n = c.shape[1]
    _, s, vt = np.linalg.svd(c, full_matrices=True)
    rank = int(np.sum(s > 1e-10 * s[0])) if s.size and s[0] > 0 else 0
    basis = _canonical_signs(vt[rank:].T)
    return SubspaceBasis(n, basis, c, rank)

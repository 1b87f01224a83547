"""Coefficient-space subspace that removes the large covariance directions.

If u_j is a unit Gram eigenvector with eigenvalue lam_j, the matching
covariance eigenvector is vec(V_j) with V_j = lam_j^{-1/2} sum_i (u_j)_i A_i,
and Tr(A_i V_j) = sqrt(lam_j) (u_j)_i. So the constraint
sum_i y_i Tr(A_i V_j) = 0 is just <y, u_j> = 0, and H is spanned by the
remaining Gram eigenvectors.
"""

from __future__ import annotations

import math

import numpy as np

from .concentration import GramMatrix, sum_of_squares
from .errors import InvalidInputError
from .instance import Instance
from .linalg import SubspaceBasis, spectral_norm

BOUNDARY_TOL = 1e-10


def bad_subspace(gram: GramMatrix, delta_sq: float) -> SubspaceBasis:
    """Subspace orthogonal to every Gram eigenvector with eigenvalue > ``delta_sq``.

    Eigenvalues within 1e-10 of the threshold count as not exceeding it.
    No cap is placed on the number of excluded directions.
    """
    if not delta_sq > 0:
        raise InvalidInputError(f"delta_sq must be positive, got {delta_sq}")
    w = gram.eigen.eigenvalues
    q = gram.eigen.eigenvectors
    k = int(np.sum(w > delta_sq + BOUNDARY_TOL))
    return SubspaceBasis(
        ambient_dim=gram.n,
        basis=q[:, k:],
        constraints=q[:, :k].T,
        constraint_count=k,
        delta_sq=float(delta_sq),
    )


def covariance_directions(inst: Instance, gram: GramMatrix, k: int) -> np.ndarray:
    """The matrices V_1..V_k (unit Frobenius norm) of the top-k covariance eigenvectors."""
    w = gram.eigen.eigenvalues[:k]
    q = gram.eigen.eigenvectors[:, :k]
    if np.any(w <= 0):
        raise InvalidInputError("requested covariance directions with zero eigenvalue")
    v = np.tensordot(q.T, inst.matrices, axes=1)
    return v / np.sqrt(w)[:, None, None]


def restricted_series(inst: Instance, basis: SubspaceBasis) -> np.ndarray:
    """B_j = sum_i (b_j)_i A_i for each basis vector b_j; shape ``(m, d, d)``."""
    if basis.ambient_dim != inst.n:
        raise InvalidInputError(f"basis lives in R^{basis.ambient_dim}, instance has n={inst.n}")
    return np.tensordot(basis.basis.T, inst.matrices, axes=1)


def restricted_v_param(inst: Instance, basis: SubspaceBasis) -> float:
    """v(Y) for Y = sum_j h_j B_j, from the Gram matrix of the B_j."""
    if basis.dim == 0:
        return 0.0
    b = restricted_series(inst, basis).reshape(basis.dim, -1)
    g = b @ b.T
    return math.sqrt(max(0.0, spectral_norm(0.5 * (g + g.T))))


def restricted_sigma_param(inst: Instance, basis: SubspaceBasis) -> float:
    if basis.dim == 0:
        return 0.0
    return math.sqrt(spectral_norm(sum_of_squares(restricted_series(inst, basis))))

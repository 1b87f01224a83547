"""Instances (lists of symmetric matrices), generators and the JSON file format.

File layout::

    {"n": 2, "d": 3, "label": "...", "seed": 7 | null,
     "matrices": [[row-major d*d floats], ...]}

Both triangles are stored; asymmetry above 1e-12 is rejected on read.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import (
    AsymmetricMatrixError,
    DimensionMismatchError,
    InvalidInputError,
    MalformedFileError,
    NonFiniteValueError,
)
from .linalg import spectral_norms

ASYMMETRY_TOL = 1e-12
UNIT_NORM_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class Instance:
    """``n`` symmetric ``d x d`` matrices stored as one read-only ``(n, d, d)`` array."""

    matrices: np.ndarray
    label: str = ""
    seed: int | None = None

    def __post_init__(self):
        m = np.array(self.matrices, dtype=np.float64)
        if m.ndim != 3 or m.shape[1] != m.shape[2]:
            raise InvalidInputError(f"matrices must have shape (n, d, d), got {m.shape}")
        if m.shape[0] < 1 or m.shape[1] < 1:
            raise InvalidInputError("need n >= 1 and d >= 1")
        if not np.all(np.isfinite(m)):
            raise InvalidInputError("matrices contain non-finite entries")
        m = 0.5 * (m + m.transpose(0, 2, 1))
        m.setflags(write=False)
        object.__setattr__(self, "matrices", m)

    @property
    def n(self) -> int:
        return self.matrices.shape[0]

    @property
    def d(self) -> int:
        return self.matrices.shape[1]

    @property
    def flat(self) -> np.ndarray:
        """``(n, d*d)`` view; row ``i`` is vec(A_i)."""
        return self.matrices.reshape(self.n, -1)

    def signed_sum(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        return np.tensordot(x, self.matrices, axes=1)

    def discrepancy(self, x) -> float:
        from .linalg import spectral_norm

        return spectral_norm(self.signed_sum(x))

    def operator_norms(self) -> np.ndarray:
        return spectral_norms(self.matrices)

    def check_unit_norm(self, tol: float = UNIT_NORM_TOL) -> None:
        norms = self.operator_norms()
        bad = np.flatnonzero(norms > 1 + tol)
        if bad.size:
            i = int(bad[0])
            raise InvalidInputError(
                f"matrix {i} has operator norm {norms[i]:.6g} > 1 "
                f"({bad.size} of {self.n} matrices violate the unit-norm bound)"
            )

    def subset(self, idx) -> "Instance":
        return Instance(self.matrices[np.asarray(idx, dtype=int)], self.label, self.seed)

    def scaled(self, factor: float) -> "Instance":
        return Instance(factor * self.matrices, self.label, self.seed)

    def is_zero(self) -> bool:
        return not np.any(self.matrices)


def check_signs(x) -> np.ndarray:
    """Validate a sign vector and return it as an int8 array."""
    x = np.asarray(x)
    if x.ndim != 1 or not np.all((x == 1) | (x == -1)):
        raise InvalidInputError("sign vector entries must be exactly +1 or -1")
    return x.astype(np.int8)


# -- generators --------------------------------------------------------------


def generate_diagonal_spencer(n: int, d: int, seed: int) -> Instance:
    if n < 1 or d < 1:
        raise InvalidInputError("need n, d >= 1")
    rng = np.random.default_rng(seed)
    diags = rng.choice(np.array([-1.0, 1.0]), size=(n, d))
    mats = np.zeros((n, d, d))
    idx = np.arange(d)
    mats[:, idx, idx] = diags
    return Instance(mats, f"diagonal-spencer(n={n},d={d})", seed)


def generate_lower_bound(n: int) -> Instance:
    """A_1 = e1 e1^T and A_i = (e1 + ei)(e1 + ei)^T / 2 for i >= 2; d = n.

    Every signed sum has a first column of norm at least sqrt(n - 1) / 2.
    """
    if n < 2:
        raise InvalidInputError("lower-bound family needs n >= 2")
    mats = np.zeros((n, n, n))
    mats[0, 0, 0] = 1.0
    for i in range(1, n):
        v = np.zeros(n)
        v[0] = v[i] = 1.0
        mats[i] = 0.5 * np.outer(v, v)
    return Instance(mats, f"lower-bound(n={n})", None)


def generate_low_rank_random(n: int, d: int, r: int, seed: int) -> Instance:
    """Each A_i = sum_k s_k u_k u_k^T with random orthonormal u_k and signs s_k."""
    if n < 1 or d < 1:
        raise InvalidInputError("need n, d >= 1")
    if not 1 <= r <= d:
        raise InvalidInputError(f"rank must satisfy 1 <= r <= d, got r={r}, d={d}")
    rng = np.random.default_rng(seed)
    mats = np.empty((n, d, d))
    for i in range(n):
        u, _ = np.linalg.qr(rng.standard_normal((d, r)))
        s = rng.choice(np.array([-1.0, 1.0]), size=r)
        a = (u * s) @ u.T
        a = 0.5 * (a + a.T)
        w = np.linalg.eigvalsh(a)
        mats[i] = a / max(abs(w[0]), abs(w[-1]))
    return Instance(mats, f"low-rank(n={n},d={d},r={r})", seed)


def generate_block_diagonal(n: int, d: int, h: int, seed: int) -> Instance:
    """Block-diagonal matrices with ``d // h`` Gaussian symmetric blocks of size ``h``."""
    if n < 1 or d < 1 or h < 1:
        raise InvalidInputError("need n, d, h >= 1")
    if d % h:
        raise InvalidInputError(f"block size {h} does not divide d={d}")
    rng = np.random.default_rng(seed)
    mats = np.zeros((n, d, d))
    for i in range(n):
        for b in range(d // h):
            g = rng.standard_normal((h, h))
            blk = 0.5 * (g + g.T)
            w = np.linalg.eigvalsh(blk)
            nrm = max(abs(w[0]), abs(w[-1]))
            if nrm > 0:
                blk = blk / nrm
            sl = slice(b * h, (b + 1) * h)
            mats[i, sl, sl] = blk
    return Instance(mats, f"block-diagonal(n={n},d={d},h={h})", seed)


def default_low_rank(n: int) -> int:
    """Rank n / ceil(ln^3 n), floored at 1 (the polylog-rank regime)."""
    if n < 3:
        return 1
    return max(1, n // math.ceil(math.log(n) ** 3))


# -- file format -------------------------------------------------------------


def _fmt(v: float) -> str:
    return format(float(v), ".17g")


def dumps_instance(inst: Instance) -> str:
    rows = ",\n    ".join("[" + ",".join(_fmt(v) for v in a.ravel()) + "]" for a in inst.matrices)
    head = {"n": inst.n, "d": inst.d, "label": inst.label, "seed": inst.seed}
    parts = [f"  {json.dumps(k)}: {json.dumps(v)}" for k, v in head.items()]
    parts.append(f'  "matrices": [\n    {rows}\n  ]')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps_instance(inst))


def loads_instance(text: str, source: str = "<string>") -> Instance:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedFileError(f"invalid JSON: {exc.msg}", f"{source}:{exc.lineno}:{exc.colno}") from exc
    if not isinstance(doc, dict):
        raise MalformedFileError("top-level value must be an object", source)
    for key in ("n", "d", "matrices"):
        if key not in doc:
            raise MalformedFileError(f"missing field {key!r}", source)
    n, d = doc["n"], doc["d"]
    if not (isinstance(n, int) and isinstance(d, int)) or n < 1 or d < 1:
        raise MalformedFileError("n and d must be positive integers", source)
    mats = doc["matrices"]
    if not isinstance(mats, list):
        raise MalformedFileError("'matrices' must be a list", source)
    if len(mats) != n:
        raise DimensionMismatchError(f"header says n={n} but {len(mats)} matrices given", source)
    seed = doc.get("seed")
    if seed is not None and not isinstance(seed, int):
        raise MalformedFileError("seed must be an integer or null", source)

    out = np.empty((n, d, d))
    for k, entries in enumerate(mats):
        loc = f"matrix {k}"
        if not isinstance(entries, list):
            raise MalformedFileError("matrix must be a flat list of numbers", loc)
        if len(entries) != d * d:
            raise DimensionMismatchError(
                f"expected {d * d} entries for d={d}, found {len(entries)}", loc
            )
        try:
            a = np.array(entries, dtype=np.float64).reshape(d, d)
        except (TypeError, ValueError) as exc:
            raise MalformedFileError("non-numeric entry", loc) from exc
        bad = np.argwhere(~np.isfinite(a))
        if bad.size:
            i, j = bad[0]
            raise NonFiniteValueError(f"non-finite value {a[i, j]}", f"{loc}, row {i}, column {j}")
        gap = np.abs(a - a.T)
        if gap.max() > ASYMMETRY_TOL:
            i, j = np.unravel_index(int(np.argmax(gap)), gap.shape)
            raise AsymmetricMatrixError(
                f"entries ({i},{j})={a[i, j]!r} and ({j},{i})={a[j, i]!r} differ by {gap[i, j]:.3g}",
                f"{loc}, row {i}, column {j}",
            )
        out[k] = a
    return Instance(out, str(doc.get("label", "")), seed)


def read_instance(path) -> Instance:
    path = Path(path)
    return loads_instance(path.read_text(), str(path))

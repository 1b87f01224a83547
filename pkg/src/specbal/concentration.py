"""Concentration parameters of the Gaussian series X = sum_i g_i A_i.

The d^2 x d^2 entry covariance sum_i vec(A_i) vec(A_i)^T is never formed.
It shares its nonzero spectrum with the n x n Gram matrix
G_ij = Tr(A_i A_j), which is what everything here works with.
All logarithms are natural.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np

from .errors import InvalidInputError
from .instance import Instance
from .linalg import EigenDecomposition, spectral_norm, symmetric_eigen

DEFAULT_BBVH_CONSTANT = 4.0


@dataclass(frozen=True)
class ConcentrationParams:
    sigma: float
    v: float
    frobenius_budget: float
    f: float
    n: int
    d: int

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass(frozen=True)
class GramMatrix:
    matrix: np.ndarray
    eigen: EigenDecomposition

    @property
    def n(self) -> int:
        return self.matrix.shape[0]


def gram_matrix(inst: Instance) -> GramMatrix:
    flat = inst.flat
    g = flat @ flat.T
    g = 0.5 * (g + g.T)
    return GramMatrix(g, symmetric_eigen(g))


def sigma_param(inst: Instance) -> float:
    """sqrt(||sum_i A_i^2||_op)."""
    return math.sqrt(spectral_norm(sum_of_squares(inst.matrices)))


def sum_of_squares(mats: np.ndarray) -> np.ndarray:
    """sum_i A_i^2 for a symmetric stack, as one (n d x d)^T (n d x d) product."""
    r = mats.reshape(-1, mats.shape[-1])
    m = r.T @ r
    return 0.5 * (m + m.T)


def v_param(inst: Instance, gram: GramMatrix | None = None) -> float:
    gram = gram or gram_matrix(inst)
    return math.sqrt(max(0.0, float(gram.eigen.eigenvalues[0])))


def frobenius_budget(inst: Instance) -> float:
    return float(np.sum(inst.matrices**2))


def concentration_params(inst: Instance, gram: GramMatrix | None = None) -> ConcentrationParams:
    budget = frobenius_budget(inst)
    return ConcentrationParams(
        sigma=sigma_param(inst),
        v=v_param(inst, gram),
        frobenius_budget=budget,
        f=math.sqrt(budget / inst.n),
        n=inst.n,
        d=inst.d,
    )


def bbvh_bound(params: ConcentrationParams, C: float = DEFAULT_BBVH_CONSTANT) -> float:
    """C * (sigma + (ln d)^{3/4} * sqrt(sigma * v)).

    The constant ``C`` is an empirical working value; no proven constant is
    known.
    """
    if params.d < 2:
        raise InvalidInputError("bound needs d >= 2 (log d must be positive)")
    if not C > 0:
        raise InvalidInputError("C must be positive")
    s, v = params.sigma, params.v
    return C * (s + math.log(params.d) ** 0.75 * math.sqrt(s * v))


def chernoff_bound(params: ConcentrationParams) -> float:
    """Matrix Gaussian/Rademacher tail bound: sigma * sqrt(2 ln(2d))."""
    if params.d < 2:
        raise InvalidInputError("bound needs d >= 2")
    return params.sigma * math.sqrt(2.0 * math.log(2.0 * params.d))


def explicit_covariance(inst: Instance) -> np.ndarray:
    """The full d^2 x d^2 entry covariance. Oracle use only; O(d^4) memory."""
    flat = inst.flat
    return flat.T @ flat

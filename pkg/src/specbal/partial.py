"""Partial coloring by Gaussian sampling and Euclidean projection.

One round: restrict to the subspace H that drops the large covariance
directions, draw a standard Gaussian y on H, and project x0 + s*y onto

    {x : x - x0 in H,  ||sum_i (x_i - x0_i) A_i||_op <= t,  x in [-1, 1]^n}.

Coordinates that land on the cube boundary are frozen at +-1.
"""

from __future__ import annotations

import logging
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from .concentration import ConcentrationParams, GramMatrix, gram_matrix
from .errors import ConvergenceError, InvalidInputError, PartialColoringFailure
from .instance import Instance
from .linalg import SubspaceBasis, project_spectral_ball, spectral_norm
from .subspace import bad_subspace

log = logging.getLogger(__name__)

THEORETICAL_EPSILON = 1.0 / 60000
NORM_SLACK = 1e-4


def theoretical_delta(epsilon: float) -> float:
    return 1.5 * epsilon * math.log2(1.0 / epsilon)


@dataclass
class ProjectionConfig:
    max_iterations: int = 2000
    primal_tol: float = 1e-6
    penalty: float = 1.0
    adaptive_penalty: bool = True

    def __post_init__(self):
        if self.max_iterations < 1 or not self.primal_tol > 0 or not self.penalty > 0:
            raise InvalidInputError("projection settings must be positive")


@dataclass
class PartialColoringConfig:
    """Round parameters.

    Practical defaults: epsilon=0.25, delta=0.375, c_bound=2. With
    ``theoretical=True`` delta is forced to 1.5 * epsilon * log2(1/epsilon).
    """

    epsilon: float = 0.25
    delta: float = 0.375
    c_bound: float = 2.0
    max_restarts: int = 10
    projection: ProjectionConfig = field(default_factory=ProjectionConfig)
    freeze_tol: float = 1e-7
    step_scale: float = 1.0
    theoretical: bool = False

    def __post_init__(self):
        if isinstance(self.projection, dict):
            self.projection = ProjectionConfig(**self.projection)
        if not 0 < self.epsilon < 1:
            raise InvalidInputError(f"epsilon must lie in (0, 1), got {self.epsilon}")
        if self.theoretical:
            self.delta = theoretical_delta(self.epsilon)
        if not 0 < self.delta < 1:
            raise InvalidInputError(f"delta must lie in (0, 1), got {self.delta}")
        if not self.c_bound > 0 or self.max_restarts < 1:
            raise InvalidInputError("c_bound must be positive and max_restarts >= 1")
        if not 0 < self.freeze_tol < 1e-2 or not self.step_scale > 0:
            raise InvalidInputError("freeze_tol must lie in (0, 1e-2) and step_scale be positive")

    @classmethod
    def theoretical_mode(cls, epsilon: float = THEORETICAL_EPSILON, **kwargs) -> "PartialColoringConfig":
        return cls(epsilon=epsilon, theoretical=True, **kwargs)

    @property
    def accept_fraction(self) -> float:
        return self.epsilon / 2

    def to_dict(self) -> dict:
        return asdict(self)


@dataclass
class PartialColoringResult:
    x: np.ndarray
    frozen: np.ndarray
    achieved_norm: float
    restarts_used: int
    subspace_dim: int
    t: float
    c_bound: float
    converged: bool = True
    iterations: int = 0


def coloring_radius(sigma: float, f: float, d: int, c: float) -> float:
    """c * (sigma + (ln d)^{3/4} * sqrt(sigma * f))."""
    return c * (sigma + math.log(d) ** 0.75 * math.sqrt(sigma * f))


@dataclass
class _Operator:
    # everything in coordinates z of H, x = x0 + P z
    P: np.ndarray
    FP: np.ndarray  # rows: vec(B_j), B_j = sum_i P_ij A_i
    evecs: np.ndarray
    evals: np.ndarray  # spectrum of P^T G P
    d: int


def _operator(inst: Instance, basis: SubspaceBasis, gram: GramMatrix | None) -> _Operator:
    P = basis.basis
    FP = P.T @ inst.flat
    if gram is not None:
        S = P.T @ gram.matrix @ P
    else:
        S = FP @ FP.T
    w, v = np.linalg.eigh(0.5 * (S + S.T))
    return _Operator(P, FP, v, np.maximum(w, 0.0), inst.d)


def project_to_body(
    inst: Instance,
    g,
    x0,
    t: float,
    basis: SubspaceBasis,
    cfg: ProjectionConfig | None = None,
    gram: GramMatrix | None = None,
    _op: _Operator | None = None,
) -> np.ndarray:
    """Euclidean projection of ``g`` onto the feasible body around ``x0``.

    Three-block ADMM: z (coordinates in H), a cube copy u and a matrix copy
    W = alpha * sum_i (Pz)_i A_i kept in the spectral ball of radius alpha*t.
    The z-step is a diagonal solve in the eigenbasis of P^T G P; alpha
    normalizes that operator to unit norm. The penalty is rebalanced by a
    factor 2 whenever primal and dual residuals drift apart by 10x.

    Raises ConvergenceError (with the last iterate in ``.x``) if the
    residuals are not below ``primal_tol`` within ``max_iterations``.
    """
    return _project(inst, g, x0, t, basis, cfg, gram, _op)[0]


def _project(inst, g, x0, t, basis, cfg=None, gram=None, _op=None):
    cfg = cfg or ProjectionConfig()
    g = np.asarray(g, dtype=np.float64)
    x0 = np.asarray(x0, dtype=np.float64)
    n = inst.n
    if g.shape != (n,) or x0.shape != (n,):
        raise InvalidInputError("g and x0 must have length n")
    if t < 0:
        raise InvalidInputError("spectral radius t must be nonnegative")
    if basis.ambient_dim != n:
        raise InvalidInputError("basis does not live in R^n")
    if basis.dim == 0:
        return x0.copy(), 0

    op = _op or _operator(inst, basis, gram)
    P, FP, V, s, d = op.P, op.FP, op.evecs, op.evals, op.d
    smax = float(s[-1]) if s.size else 0.0
    spectral = smax > 0
    alpha = 1.0 / math.sqrt(smax) if spectral else 0.0
    radius = alpha * t
    # stop at a tenth of the tolerance so the returned point is within it
    tol = 0.1 * cfg.primal_tol
    spec_scale = max(1.0, t)

    c = P.T @ (g - x0)
    z = c.copy()
    y = x0 + P @ z
    u = np.clip(y, -1.0, 1.0)
    lam = np.zeros(n)
    if spectral:
        Lz = alpha * (z @ FP)
        W = project_spectral_ball(Lz.reshape(d, d), radius).ravel()
    else:
        Lz = W = np.zeros(1)
    Lam = np.zeros_like(W)
    rho = cfg.penalty

    primal = dual = np.inf
    for it in range(1, cfg.max_iterations + 1):
        rhs = c + rho * (P.T @ (u - lam - x0))
        if spectral:
            rhs = rhs + rho * alpha * (FP @ (W - Lam))
        z = V @ ((V.T @ rhs) / (1.0 + rho + rho * alpha**2 * s))
        y = x0 + P @ z

        u_new = np.clip(y + lam, -1.0, 1.0)
        r1 = y - u_new
        back = P.T @ (u_new - u)
        if spectral:
            Lz = alpha * (z @ FP)
            W_new = project_spectral_ball((Lz + Lam).reshape(d, d), radius).ravel()
            r2 = Lz - W_new
            back = back + alpha * (FP @ (W_new - W))
            W = W_new
        else:
            r2 = np.zeros(1)
        u = u_new
        lam += r1
        Lam += r2

        r1n = float(np.linalg.norm(r1))
        r2n = float(np.linalg.norm(r2))
        primal = math.hypot(r1n, r2n)
        dual = rho * float(np.linalg.norm(back))
        violation = max(r1n, (r2n / alpha) / spec_scale if spectral else 0.0)
        if violation <= tol and dual <= tol:
            break
        if cfg.adaptive_penalty:
            if primal > 10 * dual:
                rho *= 2.0
                lam /= 2.0
                Lam /= 2.0
            elif dual > 10 * primal:
                rho /= 2.0
                lam *= 2.0
                Lam *= 2.0
    else:
        raise ConvergenceError(
            "projection did not reach tolerance",
            {"iterations": cfg.max_iterations, "primal": primal, "dual": dual, "penalty": rho},
            x=np.clip(y, -1.0, 1.0),
        )
    return np.clip(y, -1.0, 1.0), it


def partial_color(
    inst: Instance,
    x0,
    params: ConcentrationParams,
    cfg: PartialColoringConfig | None = None,
    rng: np.random.Generator | None = None,
    gram: GramMatrix | None = None,
    antithetic: bool = False,
) -> PartialColoringResult:
    """Find x in [-1,1]^n with at least epsilon*n/2 coordinates at +-1 and
    ||sum (x_i - x0_i) A_i||_op <= t, t = c_bound * (sigma + (ln d)^{3/4} sqrt(sigma f)).

    Restarts use independent child generators spawned from ``rng``; the
    first success in restart order is returned. After half the restarts
    fail, c_bound is doubled. ``antithetic`` negates every Gaussian draw.
    """
    cfg = cfg or PartialColoringConfig()
    if rng is None:
        raise InvalidInputError("partial_color needs an explicit random generator")
    n = inst.n
    x0 = np.asarray(x0, dtype=np.float64)
    if x0.shape != (n,):
        raise InvalidInputError("x0 must have length n")
    if np.any(np.abs(x0) >= 1):
        raise InvalidInputError("x0 must lie in the open cube (-1, 1)^n")

    gram = gram or gram_matrix(inst)
    delta_sq = params.f**2 / cfg.delta
    if delta_sq > 0:
        basis = bad_subspace(gram, delta_sq)
    else:
        from .linalg import full_space

        basis = full_space(n)
    op = _operator(inst, basis, gram) if basis.dim else None

    need = max(1, math.ceil(cfg.accept_fraction * n))
    children = rng.spawn(cfg.max_restarts)
    c = cfg.c_bound
    best_frac = 0.0
    for r, child in enumerate(children):
        if r and r == cfg.max_restarts // 2:
            c *= 2.0
        t = coloring_radius(params.sigma, params.f, params.d, c)
        if basis.dim == 0:
            break
        h = child.standard_normal(basis.dim)
        if antithetic:
            h = -h
        g = x0 + cfg.step_scale * (basis.basis @ h)
        converged = True
        try:
            x, iters = _project(inst, g, x0, t, basis, cfg.projection, _op=op)
        except ConvergenceError as exc:
            log.warning("restart %d: %s %s", r, exc, exc.diagnostics)
            x, converged, iters = exc.x, False, cfg.projection.max_iterations
        x = np.clip(x, -1.0, 1.0)
        hit = np.abs(x) >= 1.0 - cfg.freeze_tol
        x[hit] = np.sign(x[hit])
        achieved = spectral_norm(inst.signed_sum(x - x0))
        nfrozen = int(hit.sum())
        best_frac = max(best_frac, nfrozen / n)
        log.debug("restart %d: frozen %d/%d, norm %.4g (t=%.4g)", r, nfrozen, n, achieved, t)
        if nfrozen >= need and achieved <= t * (1 + NORM_SLACK):
            return PartialColoringResult(
                x=x,
                frozen=np.flatnonzero(hit),
                achieved_norm=achieved,
                restarts_used=r + 1,
                subspace_dim=basis.dim,
                t=t,
                c_bound=c,
                converged=converged,
                iterations=iters,
            )
    raise PartialColoringFailure(
        f"no restart froze {need} of {n} coordinates within the spectral bound "
        f"(best fraction {best_frac:.3f})",
        best_fraction=best_frac,
        restarts=cfg.max_restarts,
    )

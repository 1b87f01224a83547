"""Full colorings: dimension truncation, repeated partial coloring, exact endgame."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field

import numpy as np

from .baselines import enumerate_min
from .concentration import (
    DEFAULT_BBVH_CONSTANT,
    ConcentrationParams,
    bbvh_bound,
    chernoff_bound,
    concentration_params,
    gram_matrix,
    sum_of_squares,
)
from .errors import InvalidInputError, PartialColoringFailure
from .instance import Instance, check_signs
from .linalg import spectral_norm, symmetric_eigen
from .partial import PartialColoringConfig, partial_color

log = logging.getLogger(__name__)

DEFAULT_ENDGAME = 12


@dataclass(frozen=True)
class TruncationInfo:
    truncated: bool
    original_d: int
    kept_d: int
    f: float
    # columns: eigenbasis of sum_i A_i^2, descending; None when not truncated
    rotation: np.ndarray | None = field(default=None, repr=False)
    tail_diagonal: float = 0.0

    @property
    def bound(self) -> float:
        """Max change in any coloring's discrepancy caused by the truncation."""
        return 2.0 * self.f if self.truncated else 0.0


def truncate_dimension(inst: Instance):
    """Keep the top-left n^2 x n^2 block after rotating into the eigenbasis of
    M = sum_i A_i^2 (diagonal descending). Returns ``(instance, info)``.

    When d <= n^2 the instance is passed through unchanged.
    """
    n, d = inst.n, inst.d
    f = math.sqrt(float(np.sum(inst.matrices**2)) / n)
    keep = n * n
    if d <= keep:
        return inst, TruncationInfo(False, d, d, f)
    eig = symmetric_eigen(sum_of_squares(inst.matrices))
    q = eig.eigenvectors
    rotated = np.einsum("ai,kab,bj->kij", q, inst.matrices, q, optimize=True)
    out = Instance(rotated[:, :keep, :keep], inst.label + f" [truncated to d={keep}]", inst.seed)
    info = TruncationInfo(True, d, keep, f, q, float(eig.eigenvalues[keep - 1]))
    return out, info


def endgame_exhaustive(inst: Instance, x_partial, active, threshold: int = DEFAULT_ENDGAME, threads: int = 1):
    """Complete ``x_partial`` on ``active`` coordinates by exhaustive search.

    Inactive coordinates must already be +-1. Returns the full sign vector
    minimizing the discrepancy; ties go to the lexicographically smallest
    pattern on the active coordinates (+1 first).
    """
    x = np.asarray(x_partial, dtype=np.float64).copy()
    active = np.asarray(sorted(int(i) for i in active), dtype=int)
    if active.size > threshold:
        raise InvalidInputError(f"{active.size} active coordinates exceed endgame threshold {threshold}")
    fixed = np.ones(inst.n, dtype=bool)
    fixed[active] = False
    if not np.all(np.abs(x[fixed]) == 1):
        raise InvalidInputError("inactive coordinates must be exactly +-1")
    base = np.tensordot(x[fixed], inst.matrices[fixed], axes=1)
    best, _ = enumerate_min(inst.matrices[active], base=base, threads=threads)
    x[active] = best
    return check_signs(x)


@dataclass
class RoundRecord:
    round: int
    n_active: int
    sigma: float
    f: float
    t: float
    c_bound: float
    achieved_norm: float
    restarts: int
    frozen: int
    subspace_dim: int
    converged: bool


@dataclass
class ColoringState:
    x: np.ndarray
    round: int = 0
    ledger: list = field(default_factory=list)

    @property
    def active(self) -> np.ndarray:
        return np.flatnonzero(np.abs(self.x) < 1)


@dataclass
class SolveReport:
    signs: np.ndarray
    discrepancy: float
    rounds: int
    ledger: list
    truncated: bool
    truncation_bound: float
    endgame_size: int
    endgame_norm: float
    params: ConcentrationParams
    chernoff: float | None
    bbvh: float | None
    bbvh_constant: float = DEFAULT_BBVH_CONSTANT

    @property
    def ledger_bound(self) -> float:
        """Triangle-inequality bound on the discrepancy from the round ledger."""
        return sum(r.achieved_norm for r in self.ledger) + self.endgame_norm + self.truncation_bound

    def shrink_factors(self) -> list:
        sizes = [r.n_active for r in self.ledger] + [self.endgame_size]
        return [b / a for a, b in zip(sizes, sizes[1:]) if a]


class SolveFailure(PartialColoringFailure):
    def __init__(self, cause: PartialColoringFailure, state: ColoringState):
        super().__init__(str(cause), cause.best_fraction, cause.restarts)
        self.state = state


def _reference_bounds(params: ConcentrationParams):
    if params.d < 2:
        return None, None
    return chernoff_bound(params), bbvh_bound(params)


def solve(
    inst: Instance,
    cfg: PartialColoringConfig | None = None,
    endgame_threshold: int = DEFAULT_ENDGAME,
    rng: np.random.Generator | None = None,
    threads: int = 1,
) -> SolveReport:
    """Full +-1 coloring by recursive partial coloring plus an exact endgame.

    Each round recomputes sigma (capped at sqrt(n_t)) and f on the active
    matrices, partially colors them starting from the current fractional
    point, and freezes the coordinates that reached +-1. Once at most
    ``endgame_threshold`` coordinates remain they are set by exhaustive
    search. On an unrecoverable round a SolveFailure carrying the partial
    state is raised.
    """
    cfg = cfg or PartialColoringConfig()
    if rng is None:
        raise InvalidInputError("solve needs an explicit random generator")
    if endgame_threshold < 0:
        raise InvalidInputError("endgame threshold must be nonnegative")
    inst.check_unit_norm()
    params0 = concentration_params(inst)
    chern, bbvh = _reference_bounds(params0)
    n = inst.n

    if inst.is_zero():
        return SolveReport(np.ones(n, dtype=np.int8), 0.0, 0, [], False, 0.0, 0, 0.0, params0, chern, bbvh)

    work, trunc = truncate_dimension(inst)
    state = ColoringState(np.zeros(n))
    while state.active.size > endgame_threshold:
        act = state.active
        sub = work.subset(act)
        gram = gram_matrix(sub)
        p = concentration_params(sub, gram)
        if p.sigma > math.sqrt(act.size):
            p = ConcentrationParams(math.sqrt(act.size), p.v, p.frobenius_budget, p.f, p.n, p.d)
        try:
            res = partial_color(sub, state.x[act], p, cfg, rng, gram=gram)
        except PartialColoringFailure as exc:
            raise SolveFailure(exc, state) from exc
        state.x[act] = res.x
        state.round += 1
        rec = RoundRecord(
            round=state.round,
            n_active=int(act.size),
            sigma=p.sigma,
            f=p.f,
            t=res.t,
            c_bound=res.c_bound,
            achieved_norm=res.achieved_norm,
            restarts=res.restarts_used,
            frozen=int(act.size - state.active.size),
            subspace_dim=res.subspace_dim,
            converged=res.converged,
        )
        state.ledger.append(rec)
        log.info("round %d: %d -> %d active, norm %.4g / t %.4g", rec.round, rec.n_active,
                 state.active.size, rec.achieved_norm, rec.t)

    act = state.active
    before = state.x.copy()
    signs = endgame_exhaustive(work, state.x, act, endgame_threshold, threads)
    endgame_norm = spectral_norm(work.signed_sum(signs - before)) if act.size else 0.0
    disc = inst.discrepancy(signs)
    return SolveReport(
        signs=signs,
        discrepancy=disc,
        rounds=state.round,
        ledger=state.ledger,
        truncated=trunc.truncated,
        truncation_bound=trunc.bound,
        endgame_size=int(act.size),
        endgame_norm=endgame_norm,
        params=params0,
        chernoff=chern,
        bbvh=bbvh,
    )

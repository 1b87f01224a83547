"""JSON serialization of solve reports."""

from __future__ import annotations

import hashlib
import json
from dataclasses import asdict

import numpy as np

from .full import SolveFailure, SolveReport
from .instance import Instance, dumps_instance
from .partial import PartialColoringConfig


def instance_digest(inst: Instance) -> str:
    """SHA-256 of the canonical JSON form, so a report names the exact input."""
    return hashlib.sha256(dumps_instance(inst).encode()).hexdigest()


def _header(inst: Instance, cfg: PartialColoringConfig, endgame: int, seed: int, version: str) -> dict:
    return {
        "version": version,
        "seed": int(seed),
        "instance": {"label": inst.label, "n": inst.n, "d": inst.d, "sha256": instance_digest(inst)},
        "config": {**cfg.to_dict(), "endgame_threshold": int(endgame)},
    }


def report_dict(rep: SolveReport, inst, cfg, endgame, seed, version) -> dict:
    out = _header(inst, cfg, endgame, seed, version)
    out.update(
        status="ok",
        signs=[int(s) for s in rep.signs],
        discrepancy=float(rep.discrepancy),
        normalized=float(rep.discrepancy / np.sqrt(inst.n)) if inst.n else 0.0,
        rounds=rep.rounds,
        ledger=[asdict(r) for r in rep.ledger],
        ledger_bound=float(rep.ledger_bound),
        truncated=rep.truncated,
        truncation_bound=float(rep.truncation_bound),
        endgame_size=rep.endgame_size,
        endgame_norm=float(rep.endgame_norm),
        params=rep.params.to_dict(),
        bounds={"chernoff": rep.chernoff, "bbvh": rep.bbvh, "bbvh_constant": rep.bbvh_constant},
    )
    return out


def failure_dict(exc: SolveFailure, inst, cfg, endgame, seed, version) -> dict:
    """Best-effort record of a run that stopped mid-way.

    The fractional point is rounded coordinatewise to signs so the entry still
    carries a usable (if unguaranteed) coloring.
    """
    x = exc.state.x
    rounded = np.where(x >= 0, 1, -1)
    out = _header(inst, cfg, endgame, seed, version)
    out.update(
        status="failed",
        error=str(exc),
        best_fraction=float(exc.best_fraction),
        restarts=int(exc.restarts),
        rounds=exc.state.round,
        ledger=[asdict(r) for r in exc.state.ledger],
        active=int(exc.state.active.size),
        fractional=[float(v) for v in x],
        rounded_signs=[int(s) for s in rounded],
        rounded_discrepancy=float(inst.discrepancy(rounded)),
    )
    return out


def _plain(v):
    if isinstance(v, np.generic):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    raise TypeError(f"cannot serialize {type(v).__name__}")


def dumps_report(d: dict) -> str:
    return json.dumps(d, indent=2, sort_keys=True, allow_nan=False, default=_plain) + "\n"

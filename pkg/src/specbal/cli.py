"""Command line: gen, solve, bench, verify.

Exit codes: 0 success, 1 verification failure, 2 usage or I/O error,
3 solver failure.
"""

from __future__ import annotations

import argparse
import csv
import logging
import math
import os
import secrets
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .baselines import BRUTE_FORCE_CAP, brute_force_min, random_coloring_stats
from .concentration import (
    DEFAULT_BBVH_CONSTANT,
    bbvh_bound,
    chernoff_bound,
    concentration_params,
    explicit_covariance,
    gram_matrix,
)
from .errors import InvalidInputError, ParseError, SpecbalError
from .full import DEFAULT_ENDGAME, SolveFailure, solve
from .instance import (
    default_low_rank,
    generate_block_diagonal,
    generate_diagonal_spencer,
    generate_low_rank_random,
    generate_lower_bound,
    read_instance,
    write_instance,
)
from .linalg import spectral_norm
from .partial import PartialColoringConfig, coloring_radius, project_to_body
from .report import dumps_report, failure_dict, report_dict
from .subspace import bad_subspace, restricted_v_param

FAMILIES = ("diagonal-spencer", "lower-bound", "low-rank", "block-diagonal")
CSV_HEADER = ("method", "discrepancy", "normalized", "runtime_ms", "seed")

EXIT_OK, EXIT_VERIFY, EXIT_USAGE, EXIT_SOLVER = 0, 1, 2, 3

log = logging.getLogger("specbal")


class UsageError(Exception):
    pass


def _resolve_seed(seed):
    if seed is None:
        seed = secrets.randbits(32)
        print(f"seed={seed}", file=sys.stderr)
    return seed


def _config(args) -> PartialColoringConfig:
    kw = {}
    if args.c_bound is not None:
        kw["c_bound"] = args.c_bound
    if args.max_restarts is not None:
        kw["max_restarts"] = args.max_restarts
    if args.theoretical:
        if args.epsilon is not None:
            kw["epsilon"] = args.epsilon
        return PartialColoringConfig.theoretical_mode(**kw)
    if args.epsilon is not None:
        kw["epsilon"] = args.epsilon
    return PartialColoringConfig(**kw)


def _generate(args):
    family = args.family_pos or args.family
    if family is None:
        raise UsageError("a family is required (positional or --family)")
    if family not in FAMILIES:
        raise UsageError(f"unknown family {family!r}; choose from {', '.join(FAMILIES)}")
    if args.n is None:
        raise UsageError("--n is required")
    n = args.n
    d = args.d if args.d is not None else n
    if family == "lower-bound":
        if args.d is not None and args.d != n:
            raise UsageError("lower-bound instances have d = n")
        return generate_lower_bound(n), None
    seed = _resolve_seed(args.seed)
    if family == "diagonal-spencer":
        return generate_diagonal_spencer(n, d, seed), seed
    if family == "low-rank":
        r = args.r if args.r is not None else default_low_rank(n)
        return generate_low_rank_random(n, d, r, seed), seed
    if args.h is None:
        raise UsageError("block-diagonal needs --h")
    return generate_block_diagonal(n, d, args.h, seed), seed


def cmd_gen(args) -> int:
    inst, _ = _generate(args)
    p = concentration_params(inst)
    if args.out:
        write_instance(inst, args.out)
    for key in ("n", "d", "sigma", "v", "f"):
        print(f"{key}={getattr(p, key)!r}")
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = read_instance(args.instance)
    seed = _resolve_seed(args.seed)
    cfg = _config(args)
    endgame = args.endgame if args.endgame is not None else DEFAULT_ENDGAME
    try:
        rep = solve(inst, cfg, endgame, np.random.default_rng(seed), args.threads)
    except SolveFailure as exc:
        doc, code = failure_dict(exc, inst, cfg, endgame, seed, __version__), EXIT_SOLVER
        print(f"solver failed: {exc}", file=sys.stderr)
    else:
        doc, code = report_dict(rep, inst, cfg, endgame, seed, __version__), EXIT_OK
        print(f"discrepancy={rep.discrepancy!r} rounds={rep.rounds} endgame={rep.endgame_size}")
    text = dumps_report(doc)
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    return code


def _timed(fn):
    start = time.perf_counter()
    value = fn()
    return value, (time.perf_counter() - start) * 1000.0


def bench_rows(inst, samples: int, seed: int, cfg=None, endgame=DEFAULT_ENDGAME, threads=1):
    """Rows of (method, discrepancy, normalized, runtime_ms, seed)."""
    root = math.sqrt(inst.n)
    rows = []

    def add(method, value, ms):
        if isinstance(value, str):
            rows.append((method, value, value, f"{ms:.3f}", seed))
        else:
            rows.append((method, repr(float(value)), repr(float(value) / root), f"{ms:.3f}", seed))

    rep, ms = _timed(lambda: solve(inst, cfg, endgame, np.random.default_rng(seed), threads))
    add("solver", rep.discrepancy, ms)
    (mean, se), ms = _timed(
        lambda: random_coloring_stats(inst, samples, np.random.default_rng([seed, 1]), threads)
    )
    add("random", mean, ms)
    add("random_stderr", se, 0.0)
    if inst.n <= BRUTE_FORCE_CAP:
        (_, best), ms = _timed(lambda: brute_force_min(inst, threads))
        add("brute-force", best, ms)
    else:
        add("brute-force", f"skipped (n>{BRUTE_FORCE_CAP})", 0.0)
    params, ms = _timed(lambda: concentration_params(inst))
    if inst.d < 2:
        add("chernoff_bound", "undefined (d<2)", ms)
        add("bbvh_bound", "undefined (d<2)", ms)
    else:
        add("chernoff_bound", chernoff_bound(params), ms)
        add("bbvh_bound", bbvh_bound(params, DEFAULT_BBVH_CONSTANT), ms)
    return rows


def cmd_bench(args) -> int:
    inst = read_instance(args.instance)
    seed = _resolve_seed(args.seed)
    endgame = args.endgame if args.endgame is not None else DEFAULT_ENDGAME
    rows = bench_rows(inst, args.samples, seed, _config(args), endgame, args.threads)
    fh = open(args.out, "w", newline="") if args.out else sys.stdout
    try:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(CSV_HEADER)
        w.writerows(rows)
    finally:
        if args.out:
            fh.close()
    return EXIT_OK


def verify_checks(inst, seed: int, delta: float = 0.375):
    """Invariant checks as (name, passed, residual, detail) tuples."""
    checks = []
    over = float(np.max(inst.operator_norms(), initial=0.0)) - 1.0
    checks.append(("unit-norm", over <= 1e-8, max(over, 0.0), "max ||A_i|| - 1"))
    asym = float(np.max(np.abs(inst.matrices - inst.matrices.transpose(0, 2, 1)), initial=0.0))
    checks.append(("symmetry", asym <= 1e-12, asym, "max |A - A^T|"))

    gram = gram_matrix(inst)
    if inst.d <= 8:
        cov = np.linalg.eigvalsh(explicit_covariance(inst))[::-1]
        size = max(inst.n, cov.size)
        lam, ref = np.zeros(size), np.zeros(size)
        lam[: inst.n] = gram.eigen.eigenvalues
        ref[: cov.size] = cov
        gap = float(np.max(np.abs(lam - ref)))
        checks.append(("gram-covariance", gap <= 1e-8, gap, "max eigenvalue gap"))
    else:
        checks.append(("gram-covariance", True, 0.0, "skipped (d>8)"))

    p = concentration_params(inst, gram)
    delta_sq = p.f**2 / delta
    basis = bad_subspace(gram, delta_sq)
    excess = restricted_v_param(inst, basis) - math.sqrt(delta_sq)
    checks.append(("v-contraction", excess <= 1e-8 * max(1.0, math.sqrt(delta_sq)),
                   max(excess, 0.0), f"dim H = {basis.dim} of {inst.n}"))

    if inst.is_zero():
        checks.append(("projection-feasibility", True, 0.0, "zero instance"))
        return checks
    rng = np.random.default_rng(seed)
    t = coloring_radius(p.sigma, p.f, inst.d, PartialColoringConfig().c_bound)
    x0 = np.zeros(inst.n)
    g = basis.project(rng.standard_normal(inst.n)) * 2.0
    x = project_to_body(inst, g, x0, t, basis, gram=gram)
    cube = float(np.max(np.abs(x)) - 1.0)
    norm = spectral_norm(inst.signed_sum(x - x0)) / t - 1.0
    sub = float(np.max(np.abs(basis.constraints @ (x - x0)), initial=0.0))
    res = max(cube, norm, sub, 0.0)
    checks.append(("projection-feasibility", res <= 1e-5, res, "max(cube, norm/t - 1, subspace)"))
    return checks


def cmd_verify(args) -> int:
    inst = read_instance(args.instance)
    seed = _resolve_seed(args.seed)
    ok = True
    for name, passed, residual, detail in verify_checks(inst, seed):
        ok &= bool(passed)
        print(f"{'PASS' if passed else 'FAIL'} {name} residual={residual:.3e} ({detail})")
    return EXIT_OK if ok else EXIT_VERIFY


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="specbal", description=__doc__.splitlines()[0])
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--seed", type=int)
        p.add_argument("--out")
        p.add_argument("--threads", type=int, default=1)

    def solver_flags(p):
        p.add_argument("--epsilon", type=float)
        p.add_argument("--c-bound", type=float)
        p.add_argument("--max-restarts", type=int)
        p.add_argument("--endgame", type=int)
        p.add_argument("--theoretical", action="store_true")

    gen = sub.add_parser("gen", help="generate an instance file")
    gen.add_argument("family_pos", nargs="?", metavar="family")
    gen.add_argument("--family")
    for flag in ("--n", "--d", "--r", "--h"):
        gen.add_argument(flag, type=int)
    common(gen)
    gen.set_defaults(func=cmd_gen)

    sol = sub.add_parser("solve", help="compute a signing and write a JSON report")
    sol.add_argument("instance")
    common(sol)
    solver_flags(sol)
    sol.set_defaults(func=cmd_solve)

    ben = sub.add_parser("bench", help="CSV comparison against baselines and bounds")
    ben.add_argument("instance")
    ben.add_argument("--samples", type=int, default=200)
    common(ben)
    solver_flags(ben)
    ben.set_defaults(func=cmd_bench)

    ver = sub.add_parser("verify", help="check structural invariants")
    ver.add_argument("instance")
    common(ver)
    ver.set_defaults(func=cmd_verify)
    return top


def main(argv=None) -> int:
    level = os.environ.get("SPECBAL_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(relativeCreated)d %(name)s %(message)s")
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "threads", 1) < 1:
        parser.error("--threads must be at least 1")
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (OSError, ParseError, InvalidInputError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SpecbalError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    sys.exit(main())

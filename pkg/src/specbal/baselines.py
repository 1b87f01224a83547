"""Reference points: random colorings, Gaussian Monte Carlo, exhaustive search."""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .errors import InvalidInputError
from .instance import Instance
from .linalg import spectral_norms

BRUTE_FORCE_CAP = 24
_TIE_RTOL = 1e-12
# matrices materialized per batched eigensolve
_BATCH_ENTRIES = 1 << 21


def _norms_of_sums(coeffs: np.ndarray, mats: np.ndarray, base: np.ndarray | None = None) -> np.ndarray:
    sums = np.tensordot(coeffs, mats, axes=1)
    if base is not None:
        sums += base
    return spectral_norms(sums)


def _batches(total: int, d: int):
    step = max(1, _BATCH_ENTRIES // (d * d))
    return [(lo, min(total, lo + step)) for lo in range(0, total, step)]


def sign_patterns(k: int, lo: int = 0, hi: int | None = None) -> np.ndarray:
    """Rows ``lo..hi-1`` of the 2^k patterns in lexicographic order, +1 before -1."""
    hi = (1 << k) if hi is None else hi
    idx = np.arange(lo, hi, dtype=np.int64)
    shifts = np.arange(k - 1, -1, -1, dtype=np.int64)
    bits = (idx[:, None] >> shifts) & 1
    return 1.0 - 2.0 * bits


def enumerate_min(mats: np.ndarray, base: np.ndarray | None = None, threads: int = 1):
    """Minimize ||base + sum_j s_j M_j||_op over all sign patterns s.

    Returns ``(signs, value)``. Ties (relative 1e-12) go to the
    lexicographically smallest pattern; the reduction does not depend on
    ``threads``.
    """
    k, d = mats.shape[0], mats.shape[1]
    if k == 0:
        value = float(spectral_norms(base[None])[0]) if base is not None else 0.0
        return np.zeros(0, dtype=np.int8), value

    def work(span):
        lo, hi = span
        vals = _norms_of_sums(sign_patterns(k, lo, hi), mats, base)
        vmin = float(vals.min())
        first = int(np.flatnonzero(vals <= vmin + _TIE_RTOL * max(1.0, vmin))[0])
        return vmin, lo + first

    spans = _batches(1 << k, d)
    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(threads) as pool:
            results = list(pool.map(work, spans))
    else:
        results = [work(s) for s in spans]
    gmin = min(v for v, _ in results)
    idx = next(i for v, i in results if v <= gmin + _TIE_RTOL * max(1.0, gmin))
    best = sign_patterns(k, idx, idx + 1)[0]
    value = float(_norms_of_sums(best[None], mats, base)[0])
    return best.astype(np.int8), value


def brute_force_min(inst: Instance, threads: int = 1):
    """Exact minimum discrepancy over all sign vectors, with x_1 fixed to +1."""
    if inst.n > BRUTE_FORCE_CAP:
        raise InvalidInputError(f"brute force refused for n={inst.n} > {BRUTE_FORCE_CAP}")
    mats = inst.matrices
    rest, value = enumerate_min(mats[1:], base=mats[0].copy(), threads=threads)
    return np.concatenate([[1], rest]).astype(np.int8), value


def random_coloring(inst: Instance, rng: np.random.Generator):
    x = rng.choice(np.array([-1, 1], dtype=np.int8), size=inst.n)
    return x, inst.discrepancy(x)


def _mean_stderr(values: np.ndarray):
    m = float(values.mean())
    if values.size < 2:
        return m, 0.0
    return m, float(values.std(ddof=1) / math.sqrt(values.size))


def _sample_norms(inst: Instance, coeffs: np.ndarray, threads: int) -> np.ndarray:
    spans = _batches(coeffs.shape[0], inst.d)

    def work(span):
        lo, hi = span
        return _norms_of_sums(coeffs[lo:hi], inst.matrices)

    if threads > 1 and len(spans) > 1:
        with ThreadPoolExecutor(threads) as pool:
            parts = list(pool.map(work, spans))
    else:
        parts = [work(s) for s in spans]
    return np.concatenate(parts)


def random_coloring_stats(inst: Instance, samples: int, rng: np.random.Generator, threads: int = 1):
    """Mean and standard error of the discrepancy of uniform random signs."""
    if samples < 1:
        raise InvalidInputError("need at least one sample")
    coeffs = rng.choice(np.array([-1.0, 1.0]), size=(samples, inst.n))
    return _mean_stderr(_sample_norms(inst, coeffs, threads))


def monte_carlo_gaussian_norm(inst: Instance, samples: int, rng: np.random.Generator, threads: int = 1):
    """Mean and standard error of ||sum_i g_i A_i||_op over i.i.d. standard Gaussian g."""
    if samples < 1:
        raise InvalidInputError("need at least one sample")
    coeffs = rng.standard_normal((samples, inst.n))
    return _mean_stderr(_sample_norms(inst, coeffs, threads))

"""Counter-based random streams.

Every random edge decision in the package is a pure function of
``(seed, edge_index)``: the variate for edge ``k`` is the ``k``-th output of a
SplitMix64 generator started at ``seed``.  Sampling ``G(n, p)`` keeps the
edges whose variate is below ``p``, so two samples drawn from the same seed at
``p < p'`` are nested.  Per-trial seeds are derived from
``(master_seed, trial_index)`` alone, which makes Monte Carlo results
independent of how trials are scheduled.
"""
from __future__ import annotations

import numba
import numpy as np

MASK64 = (1 << 64) - 1
GAMMA = 0x9E3779B97F4A7C15
_M1 = 0xBF58476D1CE4E5B9
_M2 = 0x94D049BB133111EB
_INV53 = 1.0 / (1 << 53)

#: Above this many vertices the per-edge stream is too long to walk, and
#: ``G(n, p)`` is drawn by geometric skipping instead (not coupled across p).
COUPLED_MAX_N = 4096


def splitmix64(x: int) -> int:
    """One SplitMix64 finalisation of ``x + GAMMA`` (pure Python reference)."""
    z = (x + GAMMA) & MASK64
    z = ((z ^ (z >> 30)) * _M1) & MASK64
    z = ((z ^ (z >> 27)) * _M2) & MASK64
    return z ^ (z >> 31)


def trial_seed(master_seed: int, trial: int) -> int:
    """Seed of trial ``trial`` under ``master_seed``."""
    return splitmix64((splitmix64(master_seed & MASK64) ^ (trial & MASK64)) & MASK64)


def uniform_ref(seed: int, k: int) -> float:
    """Variate ``k`` of the stream started at ``seed``, in ``[0, 1)``."""
    return (splitmix64((seed + k * GAMMA) & MASK64) >> 11) * _INV53


def uniforms(seed: int, count: int, start: int = 0) -> np.ndarray:
    """Vectorised ``[uniform_ref(seed, k) for k in range(start, start + count)]``."""
    k = np.arange(start, start + count, dtype=np.uint64)
    with np.errstate(over="ignore"):
        z = np.uint64(seed & MASK64) + k * np.uint64(GAMMA) + np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV53


def uniforms_batch(seeds: np.ndarray, count: int) -> np.ndarray:
    """Matrix of variates: row ``i`` is the first ``count`` variates of ``seeds[i]``."""
    k = np.arange(count, dtype=np.uint64)
    s = np.asarray(seeds, dtype=np.uint64)[:, None]
    with np.errstate(over="ignore"):
        z = s + k[None, :] * np.uint64(GAMMA) + np.uint64(GAMMA)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(_M1)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(_M2)
        z = z ^ (z >> np.uint64(31))
    return (z >> np.uint64(11)).astype(np.float64) * _INV53


def trial_seeds(master_seed: int, start: int, stop: int) -> np.ndarray:
    return np.array([trial_seed(master_seed, i) for i in range(start, stop)], dtype=np.uint64)


@numba.njit(cache=True)
def _keep_mask(total, p, seed):
    # variate k is below p  <=>  its top 53 bits are below ceil(p * 2^53)
    thresh = np.uint64(np.ceil(p * 9007199254740992.0))
    out = np.empty(total, np.bool_)
    state = np.uint64(seed)
    for k in range(total):
        z = state + np.uint64(k + 1) * np.uint64(0x9E3779B97F4A7C15)
        z = (z ^ (z >> np.uint64(30))) * np.uint64(0xBF58476D1CE4E5B9)
        z = (z ^ (z >> np.uint64(27))) * np.uint64(0x94D049BB133111EB)
        z = z ^ (z >> np.uint64(31))
        out[k] = (z >> np.uint64(11)) < thresh
    return out


def _coupled_edges(n: int, p: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    total = n * (n - 1) // 2
    idx = np.flatnonzero(_keep_mask(total, p, np.uint64(seed)))
    return edge_index_to_pair(n, idx)


def edge_index_to_pair(n: int, idx: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Map lexicographic edge indices of K_n to endpoint arrays."""
    idx = np.asarray(idx, dtype=np.int64)
    rows = np.arange(n, dtype=np.int64)
    offsets = rows * (2 * n - rows - 1) // 2
    u = np.searchsorted(offsets, idx, side="right") - 1
    v = idx - offsets[u] + u + 1
    return u, v


def _skip_edges(n: int, p: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    total = n * (n - 1) // 2
    if p <= 0.0 or total == 0:
        return np.empty(0, np.int64), np.empty(0, np.int64)
    if p >= 1.0:
        return edge_index_to_pair(n, np.arange(total, dtype=np.int64))
    rng = np.random.Generator(np.random.PCG64(seed))
    chunk = max(1024, int(total * p * 1.1) + 64)
    picks = []
    pos = -1
    while True:
        gaps = rng.geometric(p, size=chunk)
        idx = pos + np.cumsum(gaps)
        if idx[-1] >= total:
            picks.append(idx[idx < total])
            break
        picks.append(idx)
        pos = int(idx[-1])
    return edge_index_to_pair(n, np.concatenate(picks))


def sample_edges(n: int, p: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Edge endpoint arrays ``(us, vs)`` of ``G(n, p)`` for the given seed.

    Sorted lexicographically, ``us < vs``.  The sampler is chosen by ``n``
    only: the coupled per-edge stream up to ``COUPLED_MAX_N`` vertices,
    geometric skipping above.
    """
    if n <= COUPLED_MAX_N:
        return _coupled_edges(n, float(p), seed & MASK64)
    return _skip_edges(n, float(p), seed & MASK64)

"""Seeded Monte Carlo estimates of percolation probabilities and p_c.

Trial ``i`` under master seed ``s`` always draws its graph from the stream
``rng.trial_seed(s, i)``, and results are reduced by counting, so every
estimate is a function of its arguments only, whatever the worker count.
For n <= rng.COUPLED_MAX_N the samples at different p share per-edge
variates, so each trial's indicator is monotone in p.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import comb

import numpy as np

from . import rng
from .engine import percolates_edges
from .errors import DomainError, GraphBootError
from .patterns import PatternGraph

ALPHA = 0.05


@dataclass(frozen=True)
class ProbEstimate:
    successes: int
    trials: int
    point: float
    ci_low: float
    ci_high: float
    warning: str | None = None
    limit: float | None = None

    def to_dict(self) -> dict:
        out = {
            "successes": self.successes,
            "trials": self.trials,
            "point": self.point,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
        }
        if self.warning is not None:
            out["warning"] = self.warning
        if self.limit is not None:
            out["limit"] = self.limit
        return out


def wilson(successes: int, trials: int, **extra) -> ProbEstimate:
    """Point estimate with its Wilson 95% interval."""
    from statsmodels.stats.proportion import proportion_confint

    lo, hi = proportion_confint(successes, trials, alpha=ALPHA, method="wilson")
    point = successes / trials
    lo = min(max(0.0, float(lo)), point)
    hi = max(min(1.0, float(hi)), point)
    return ProbEstimate(successes, trials, point, lo, hi, **extra)


def _pattern_key(pattern):
    """Clique order when the pattern is complete, else the pattern itself (both picklable)."""
    if isinstance(pattern, PatternGraph):
        return pattern.clique_order or pattern
    return int(pattern)


def _count(n, key, p, master_seed, start, stop) -> int:
    hits = 0
    for i in range(start, stop):
        us, vs = rng.sample_edges(n, p, rng.trial_seed(master_seed, i))
        hits += percolates_edges(n, us, vs, key)
    return hits


def _count_parallel(n, key, p, trials, master_seed, threads) -> int:
    if threads <= 1 or trials < 2:
        return _count(n, key, p, master_seed, 0, trials)
    cuts = np.linspace(0, trials, min(threads, trials) + 1).astype(int).tolist()
    with ProcessPoolExecutor(max_workers=threads) as ex:
        futs = [ex.submit(_count, n, key, p, master_seed, a, b) for a, b in zip(cuts, cuts[1:])]
        return sum(f.result() for f in futs)


def _check_p(p):
    if not 0.0 <= p <= 1.0 or math.isnan(p):
        raise DomainError(f"p={p} outside [0, 1]")


def percolation_probability(n: int, pattern, p: float, trials: int, master_seed: int,
                            threads: int = 1) -> ProbEstimate:
    """Fraction of ``trials`` samples of G(n, p) that percolate under ``pattern``."""
    _check_p(p)
    if trials < 1:
        raise DomainError("trials must be positive")
    if n < 1:
        raise DomainError("n must be positive")
    key = _pattern_key(pattern)
    hits = _count_parallel(n, key, float(p), trials, master_seed, threads)
    return wilson(hits, trials)


@dataclass
class PcEstimate:
    n: int
    pattern: str
    p_low: float
    p_high: float
    point: float
    trials_per_eval: int
    master_seed: int
    evaluations: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "pattern": self.pattern,
            "p_c_estimate": self.point,
            "p_low": self.p_low,
            "p_high": self.p_high,
            "trials_per_eval": self.trials_per_eval,
            "master_seed": self.master_seed,
            "evaluations": [{"p": p, **est.to_dict()} for p, est in self.evaluations],
        }


def estimate_pc(n: int, pattern, trials_per_eval: int, rel_tol: float, master_seed: int,
                threads: int = 1) -> PcEstimate:
    """Bisection for the p at which the estimated percolation probability crosses 1/2.

    A geometric phase from p = 1/n brackets the crossing, then the bracket is
    halved until (hi - lo) / hi < rel_tol.  Each step compares the point
    estimate with 1/2.  The reported interval also covers every evaluated p
    whose Wilson interval contains 1/2.
    """
    if trials_per_eval < 100:
        raise DomainError("trials_per_eval must be at least 100")
    if rel_tol < 0.01:
        raise DomainError("rel_tol must be at least 0.01")
    if n < 2:
        raise DomainError("n must be at least 2")
    evals = []

    def est(p):
        e = percolation_probability(n, pattern, p, trials_per_eval, master_seed, threads)
        evals.append((p, e))
        return e.point >= 0.5

    p = 1.0 / n
    if est(p):
        hi = p
        lo = 0.0
        while p > 1e-12:
            p /= 2
            if not est(p):
                lo = p
                break
            hi = p
    else:
        lo = p
        while True:
            p = min(1.0, 2 * p)
            if est(p):
                hi = p
                break
            if p >= 1.0:
                raise GraphBootError("estimated percolation probability stays below 1/2 at p = 1")
            lo = p
    while (hi - lo) / hi >= rel_tol:
        mid = (lo + hi) / 2
        if est(mid):
            hi = mid
        else:
            lo = mid
    point = (lo + hi) / 2
    straddle = [q for q, e in evals if e.ci_low <= 0.5 <= e.ci_high]
    p_low = min([lo] + straddle)
    p_high = max([hi] + straddle)
    name = pattern.name if isinstance(pattern, PatternGraph) else f"K{int(pattern)}"
    return PcEstimate(n, name, p_low, p_high, point, trials_per_eval, master_seed, evals)


def sweep(n_list, p_grid, pattern, trials: int, master_seed: int, threads: int = 1) -> list[dict]:
    """One record per (n, p), n outer, in the order given."""
    if not n_list or not p_grid:
        raise DomainError("n_list and p_grid must be nonempty")
    out = []
    for n in n_list:
        for p in p_grid:
            e = percolation_probability(n, pattern, p, trials, master_seed, threads)
            out.append({
                "n": n, "p": p, "trials": e.trials, "successes": e.successes,
                "point": e.point, "ci_low": e.ci_low, "ci_high": e.ci_high,
                "master_seed": master_seed,
            })
    return out


SWEEP_FIELDS = ("n", "p", "trials", "successes", "point", "ci_low", "ci_high", "master_seed")


def _spanned_count(l, p, seeds) -> int:
    pairs = [(a, b) for a in range(l) for b in range(a + 1, l)]
    us = np.array([a for a, _ in pairs], dtype=np.int64)
    vs = np.array([b for _, b in pairs], dtype=np.int64)
    keep = rng.uniforms_batch(seeds, len(pairs)) < p
    packed = np.packbits(keep, axis=1)
    uniq, counts = np.unique(packed, axis=0, return_counts=True)
    hits = 0
    for row, c in zip(uniq, counts):
        mask = np.unpackbits(row)[: len(pairs)].astype(bool)
        if percolates_edges(l, us[mask], vs[mask], 4):
            hits += int(c)
    return hits


def estimate_spanning_prob(l: int, p: float, trials: int, master_seed: int,
                           threads: int = 1) -> ProbEstimate:
    """P(l, p): probability that G(l, p) has K_4-closure K_l."""
    if not 3 <= l <= 64:
        raise DomainError("l must lie in 3..64")
    _check_p(p)
    if trials < 1:
        raise DomainError("trials must be positive")
    chunk = max(1, min(trials, 2_000_000 // comb(l, 2)))
    tasks = []
    for a in range(0, trials, chunk):
        tasks.append((l, float(p), rng.trial_seeds(master_seed, a, min(trials, a + chunk))))
    if threads > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            hits = sum(ex.map(_spanned_count, *zip(*tasks)))
    else:
        hits = sum(_spanned_count(*t) for t in tasks)
    warning = None
    if p * l * l > 1:
        warning = "p*l^2 > 1: the bounds on P(l, p) are not guaranteed here"
    return wilson(hits, trials, warning=warning)


def er_limit_check(n: int, c: float, trials: int, master_seed: int, threads: int = 1) -> ProbEstimate:
    """K_3 percolation (connectivity) probability at p = (ln n + c)/n, with the limit exp(-exp(-c))."""
    if n < 2:
        raise DomainError("n must be at least 2")
    p = (math.log(n) + c) / n
    if not 0.0 <= p <= 1.0:
        raise DomainError(f"p=(ln n + c)/n = {p} outside [0, 1]")
    e = percolation_probability(n, 3, p, trials, master_seed, threads)
    return ProbEstimate(e.successes, e.trials, e.point, e.ci_low, e.ci_high,
                        limit=math.exp(-math.exp(-c)))

"""Markov mixing laboratory for the t-local Clifford chain on Pauli symbols.

States are length-n strings over {0,1,2,3} (0 = identity letter), excluding
the all-zero string.  One step picks t distinct positions; if the letters
there are all zero nothing happens, otherwise they are replaced by a uniform
nonzero t-tuple.  Exact evolution is available while 4^n - 1 <= 4096.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, product

import numpy as np
import scipy.sparse as sp


@dataclass(frozen=True)
class ChainConfig:
    n: int
    t: int

    def __post_init__(self):
        if not 1 <= self.t <= self.n:
            raise ValueError("need 1 <= t <= n")

    @property
    def size(self) -> int:
        return 4**self.n - 1


@dataclass
class ChainDist:
    """Exact probability vector or empirical histogram over nonzero symbols."""

    probs: np.ndarray
    samples: int | None = None  # None for exact distributions

    def validate(self) -> None:
        if abs(float(self.probs.sum()) - 1.0) > 1e-12:
            raise ValueError("probabilities do not sum to 1")


def state_to_index(state) -> int:
    """Base-4 packing minus one (the all-zero string is excluded)."""
    idx = 0
    for i, s in enumerate(state):
        idx += int(s) * 4**i
    if idx == 0:
        raise ValueError("all-zero symbol is not a chain state")
    return idx - 1


def index_to_state(n: int, idx: int):
    val = idx + 1
    return tuple((val // 4**i) % 4 for i in range(n))


def weight_class_start(n: int, w: int):
    """Canonical starting symbol of weight w (letter 1 on the first w slots)."""
    if not 1 <= w <= n:
        raise ValueError("weight must be in 1..n")
    return tuple(1 if i < w else 0 for i in range(n))


def chain_step(state, cfg: ChainConfig, rng: np.random.Generator):
    """One transition of the chain; never produces the all-zero symbol."""
    state = tuple(int(s) for s in state)
    if not any(state):
        raise ValueError("all-zero symbol is not a chain state")
    pos = rng.choice(cfg.n, size=cfg.t, replace=False)
    if all(state[int(i)] == 0 for i in pos):
        return state
    draw = int(rng.integers(1, 4**cfg.t))
    out = list(state)
    for j, i in enumerate(sorted(int(q) for q in pos)):
        out[i] = (draw // 4**j) % 4
    return tuple(out)


def exact_transition(cfg: ChainConfig) -> sp.csr_matrix:
    """Row-stochastic transition matrix over the 4^n - 1 nonzero symbols
    (CSR sparse; the uniform vector is stationary)."""
    if cfg.size > 4096:
        raise ValueError("exact mode limited to 4^n - 1 <= 4096")
    n, t = cfg.n, cfg.t
    subsets = list(combinations(range(n), t))
    tuples = [tt for tt in product(range(4), repeat=t) if any(tt)]
    p_subset = 1.0 / len(subsets)
    p_tuple = p_subset / len(tuples)
    rows, cols, vals = [], [], []
    for idx in range(cfg.size):
        state = index_to_state(n, idx)
        acc = {}
        for sub in subsets:
            if all(state[i] == 0 for i in sub):
                acc[idx] = acc.get(idx, 0.0) + p_subset
                continue
            for tt in tuples:
                out = list(state)
                for j, i in enumerate(sub):
                    out[i] = tt[j]
                jdx = state_to_index(out)
                acc[jdx] = acc.get(jdx, 0.0) + p_tuple
        for jdx, v in acc.items():
            rows.append(idx)
            cols.append(jdx)
            vals.append(v)
    q = sp.csr_matrix((vals, (rows, cols)), shape=(cfg.size, cfg.size))
    return q


def tv_from_uniform(probs: np.ndarray) -> float:
    return 0.5 * float(np.abs(probs - 1.0 / probs.size).sum())


def tv_curve_exact(cfg: ChainConfig, start, max_steps: int = 10_000, stop_at=None):
    """TV-to-uniform after each step from ``start`` (index 0 = one step);
    stops early once TV <= stop_at when given.  Uses the exact chain."""
    q = exact_transition(cfg).transpose().tocsr()
    v = np.zeros(cfg.size)
    v[state_to_index(start)] = 1.0
    curve = [tv_from_uniform(v)]
    for _ in range(max_steps):
        v = q @ v
        curve.append(tv_from_uniform(v))
        if stop_at is not None and curve[-1] <= stop_at:
            break
    return curve


def _hitting_time(curve, eps: float):
    for d, tv in enumerate(curve):
        if tv <= eps:
            return d
    return None


def mixing_times(cfg: ChainConfig, eps: float, starts=None, method: str = "exact",
                 rng: np.random.Generator | None = None, trials: int = 100_000,
                 max_steps: int = 10_000):
    """Per-start hitting times of TV <= eps plus the optimistic (min) and
    pessimistic (max) mixing times.

    Exact mode computes TV curves with the transition matrix; by the letter
    relabeling and qubit permutation symmetry the curve depends only on the
    start's weight class, and the default start set is one representative per
    weight.  Monte Carlo mode reports plug-in TV hitting times.
    """
    if not 0 < eps < 1:
        raise ValueError("eps must be in (0, 1)")
    if starts is None:
        starts = [weight_class_start(cfg.n, w) for w in range(1, cfg.n + 1)]
    per_start = {}
    for s in starts:
        if method == "exact":
            curve = tv_curve_exact(cfg, s, max_steps=max_steps, stop_at=eps)
            hit = _hitting_time(curve, eps)
        elif method == "montecarlo":
            if rng is None:
                raise ValueError("montecarlo mode requires an rng")
            curve = tv_curve_montecarlo(cfg, s, max_steps, trials, rng)["tv"]
            hit = _hitting_time(curve, eps)
        else:
            raise ValueError(f"unknown method {method!r}")
        if hit is None:
            raise RuntimeError(f"start {s} did not mix within {max_steps} steps")
        per_start[tuple(s)] = hit
    times = list(per_start.values())
    return per_start, min(times), max(times)


def scrambling_gap(cfg: ChainConfig, eps: float) -> float:
    """TV level eta reached by the worst-mixed weight class at the moment the
    best-mixed class first hits eps (so tau*(eta) = tau_*(eps)).

    When every class has already passed eps at that moment the implicit
    definition is degenerate and eta = eps (never below it).
    """
    curves = {
        w: tv_curve_exact(cfg, weight_class_start(cfg.n, w), stop_at=eps)
        for w in range(1, cfg.n + 1)
    }
    d_star = min(_hitting_time(c, eps) for c in curves.values())
    # Every curve ran at least d_star steps before stopping at its own hit.
    return max(max(c[d_star] for c in curves.values()), eps)


def tv_curve_montecarlo(cfg: ChainConfig, start, steps: int, trials: int,
                        rng: np.random.Generator, bootstrap: int = 200,
                        alpha: float = 0.05):
    """Plug-in TV estimates with bootstrap confidence bands.

    Returns {"tv": [...], "ci_low": [...], "ci_high": [...]} indexed by step
    count, aligned with tv_curve_exact (index 0 = the initial point mass).
    """
    size = cfg.size
    states = np.empty((trials, cfg.n), dtype=np.int64)
    states[:] = [int(s) for s in start]
    tv0 = 1.0 - 1.0 / size  # point mass at the start
    tv, lo, hi = [tv0], [tv0], [tv0]
    for _ in range(steps):
        pos = np.array([rng.choice(cfg.n, size=cfg.t, replace=False) for _ in range(trials)])
        rowidx = np.arange(trials)[:, None]
        chosen = states[rowidx, pos]
        live = chosen.any(axis=1)
        draws = rng.integers(1, 4**cfg.t, size=trials)
        for j in range(cfg.t):
            digit = (draws // 4**j) % 4
            col = pos[:, j]
            upd = np.where(live, digit, chosen[:, j])
            states[rowidx[:, 0], col] = upd
        idx = np.zeros(trials, dtype=np.int64)
        for i in range(cfg.n):
            idx += states[:, i] * 4**i
        idx -= 1
        hist = np.bincount(idx, minlength=size)
        emp = hist / trials
        tv.append(tv_from_uniform(emp))
        boots = []
        for _ in range(bootstrap):
            re = rng.multinomial(trials, emp) / trials
            boots.append(tv_from_uniform(re))
        boots = np.sort(boots)
        lo.append(float(boots[int((alpha / 2) * bootstrap)]))
        hi.append(float(boots[min(bootstrap - 1, int((1 - alpha / 2) * bootstrap))]))
    return {"tv": tv, "ci_low": lo, "ci_high": hi}


def coupon_lower(n: int, t: int, eps: float) -> float:
    """Analytic draw-count threshold (n/t - 1) log(1/eps) below which the
    miss probability of a fixed coupon exceeds eps."""
    if not n > t:
        raise ValueError("need n > t")
    if not 0 < eps <= 1:
        raise ValueError("eps must be in (0, 1]")
    return (n / t - 1.0) * math.log(1.0 / eps)


def coupon_miss_probability(n: int, t: int, m: int) -> float:
    """Exact probability that a fixed coupon is absent from m draws of t
    distinct coupons each: (1 - t/n)^m."""
    return (1.0 - t / n) ** m


def coupon_simulate(n: int, t: int, m: int, trials: int,
                    rng: np.random.Generator) -> float:
    """Monte Carlo estimate of coupon_miss_probability."""
    miss = 0
    for _ in range(trials):
        seen = False
        for _ in range(m):
            if 0 in rng.choice(n, size=t, replace=False):
                seen = True
                break
        miss += not seen
    return miss / trials

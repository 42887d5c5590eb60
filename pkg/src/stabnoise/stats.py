"""Statistical machinery: exact TV distance, chi-square uniformity tests,
and Hoeffding confidence intervals for distinguisher advantage."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import stats as sstats


@dataclass(frozen=True)
class AdvantageEstimate:
    """Distinguisher advantage p_s - p_u with a distribution-free
    (Hoeffding) per-arm confidence halfwidth at level alpha:
    ci_halfwidth = sqrt(ln(2/alpha) / (2 * trials)) with trials the smaller
    arm size."""

    p_structured: float
    p_unstructured: float
    advantage: float
    ci_halfwidth: float
    trials: int
    alpha: float


def tv_exact(p, q) -> float:
    """Total variation distance between two probability tables (half L1)."""
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise ValueError("support size mismatch")
    for name, t in (("p", p), ("q", q)):
        if abs(float(t.sum()) - 1.0) > 1e-9:
            raise ValueError(f"table {name} does not sum to 1")
        if (t < -1e-15).any():
            raise ValueError(f"table {name} has negative entries")
    return 0.5 * float(np.abs(p - q).sum())


def hoeffding_halfwidth(trials: int, alpha: float) -> float:
    """Two-sided Hoeffding bound for a [0,1] mean at confidence 1 - alpha."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    if not 0 < alpha < 1:
        raise ValueError("alpha must be in (0, 1)")
    return math.sqrt(math.log(2.0 / alpha) / (2.0 * trials))


def advantage_ci(
    successes_s: int, trials_s: int, successes_u: int, trials_u: int, alpha: float
) -> AdvantageEstimate:
    """Hoeffding estimate of Pr[say S | S] - Pr[say S | U]."""
    p_s = successes_s / trials_s
    p_u = successes_u / trials_u
    trials = min(trials_s, trials_u)
    return AdvantageEstimate(
        p_structured=p_s,
        p_unstructured=p_u,
        advantage=p_s - p_u,
        ci_halfwidth=hoeffding_halfwidth(trials, alpha),
        trials=trials,
        alpha=alpha,
    )


def chi_square_uniform(histogram) -> float:
    """p-value of the chi-square test of a histogram against uniform.
    Requires the expected count per cell to be at least 5."""
    obs = np.asarray(histogram, dtype=float)
    if obs.ndim != 1 or obs.size < 2:
        raise ValueError("histogram must be a 1-d array with >= 2 cells")
    expected = obs.sum() / obs.size
    if expected < 5:
        raise ValueError(f"expected count per cell {expected:.2f} < 5")
    return float(sstats.chisquare(obs).pvalue)


def diff_sigma(p_a: float, n_a: int, p_b: float, n_b: int) -> float:
    """Normal-approximation standard error of the difference of two
    independent binomial proportions (used for the 'within k sigma' checks)."""
    va = max(p_a * (1 - p_a), 1e-12) / n_a
    vb = max(p_b * (1 - p_b), 1e-12) / n_b
    return math.sqrt(va + vb)

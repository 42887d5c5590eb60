"""Noise models: exact distributions and the conversion/convolution lemmas."""
from fractions import Fraction

import numpy as np
import pytest

from stabnoise.noise import (
    BernParam,
    DepolParam,
    bern_convolve_param,
    bern_of_depol,
    bern_of_depol_bisect,
    depol_convolve_param,
    depol_of_bern,
    exact_depol_dist,
    depol_index_of_pauli,
    pauli_of_depol_index,
    sample_bernoulli,
    sample_depol,
)
from stabnoise.stats import tv_exact


def depol_table(p):
    return np.array([1 - p, p / 3, p / 3, p / 3])


def bern_three_flip_table(q):
    """Distribution of X^a Y^b Z^c for a,b,c ~ Ber(q), exact enumeration
    over the 8 flip patterns (letter order I, X, Z, Y)."""
    out = np.zeros(4)
    for a in (0, 1):
        for b in (0, 1):
            for c in (0, 1):
                # X^a Y^b Z^c phase-free: x-part a^b, z-part b^c
                code = (a ^ b) | ((b ^ c) << 1)
                pr = (q if a else 1 - q) * (q if b else 1 - q) * (q if c else 1 - q)
                out[code] += pr
    return out


def test_param_ranges():
    DepolParam(0.75)
    BernParam(0.5)
    with pytest.raises(ValueError):
        DepolParam(0.76)
    with pytest.raises(ValueError):
        BernParam(0.51)
    with pytest.raises(ValueError):
        DepolParam(-0.01)


def test_bern_of_depol_endpoints_and_value():
    assert bern_of_depol(0.0) == 0.0
    assert bern_of_depol(0.75) == pytest.approx(0.5)
    # p = 0.1: bisection on the cubic pins the closed form
    q = bern_of_depol(0.1)
    assert q == pytest.approx(0.0345253318, abs=1e-9)
    assert q == pytest.approx(bern_of_depol_bisect(0.1), abs=1e-10)
    # the pinned value satisfies the cubic itself
    assert 3 * (q**2 * (1 - q) + q * (1 - q) ** 2) == pytest.approx(0.1, abs=1e-12)


def test_bern_of_depol_is_inverse_on_grid():
    for q in np.linspace(0.0, 0.5, 51):
        p = 3 * (q**2 * (1 - q) + q * (1 - q) ** 2)
        assert depol_of_bern(q) == pytest.approx(p, abs=1e-15)
        assert bern_of_depol(p) == pytest.approx(q, abs=1e-10)


def test_depolarizing_decomposition_exact():
    # three independent Ber(q) flips produce Depol(3q(1-q)) exactly
    for p in [0.05 * i for i in range(1, 15)]:
        q = bern_of_depol(p)
        assert tv_exact(bern_three_flip_table(q), depol_table(p)) < 1e-10


def test_bern_convolution_identity():
    assert bern_convolve_param(0.3, 0.3) == 0.0
    assert bern_convolve_param(0.0, 0.37) == 0.37
    u = bern_convolve_param(0.1, 0.3)
    assert u == pytest.approx(0.25)
    # verify by 2x2 enumeration
    pr1 = 0.1 * (1 - u) + (1 - 0.1) * u
    assert pr1 == pytest.approx(0.3, abs=1e-12)
    with pytest.raises(ValueError):
        bern_convolve_param(0.4, 0.3)
    with pytest.raises(ValueError):
        bern_convolve_param(0.5, 0.5)


def test_depol_convolution_identity():
    assert depol_convolve_param(0.0, 0.3) == pytest.approx(0.3)
    assert depol_convolve_param(0.3, 0.3) == 0.0
    u = depol_convolve_param(0.15, 0.3)
    assert u == pytest.approx(0.1875)
    # exact 4-outcome product-distribution convolution
    t1, t2 = depol_table(0.15), depol_table(u)
    prod = np.zeros(4)
    mul = [[0, 1, 2, 3], [1, 0, 3, 2], [2, 3, 0, 1], [3, 2, 1, 0]]
    for a in range(4):
        for b in range(4):
            prod[mul[a][b]] += t1[a] * t2[b]
    assert tv_exact(prod, depol_table(0.3)) < 1e-12
    with pytest.raises(ValueError):
        depol_convolve_param(0.4, 0.3)


def test_depol_convolve_exact_fractions():
    u = depol_convolve_param(Fraction(27, 100), Fraction(3, 10))
    assert isinstance(u, Fraction)
    assert u == Fraction(3, 100) / Fraction(16, 25)


def test_exact_depol_dist():
    t = exact_depol_dist(1, 0.3)
    assert np.allclose(t, [0.7, 0.1, 0.1, 0.1])
    t2 = exact_depol_dist(2, 0.3)
    assert t2.sum() == pytest.approx(1.0, abs=1e-12)
    # Pr[X (x) I] = 0.1 * 0.7: X on qubit 0 is code 1 at digit 0
    assert t2[1] == pytest.approx(0.07)
    with pytest.raises(ValueError):
        exact_depol_dist(9, 0.1)


def test_depol_index_round_trip():
    for idx in range(64):
        p = pauli_of_depol_index(3, idx)
        assert depol_index_of_pauli(p) == idx


def test_sample_depol_p0_and_max(rng):
    for _ in range(10):
        assert sample_depol(4, 0.0, rng).v.bits == 0
    counts = np.zeros(4)
    for _ in range(100_000):
        p = sample_depol(1, 0.75, rng)
        counts[depol_index_of_pauli(p)] += 1
    assert np.abs(counts / 100_000 - 0.25).max() < 0.01


def test_sample_depol_matches_exact_table(rng):
    n, p, draws = 2, 0.3, 100_000
    counts = np.zeros(16)
    for _ in range(draws):
        counts[depol_index_of_pauli(sample_depol(n, p, rng))] += 1
    table = exact_depol_dist(n, p)
    # chi-square against the exact table
    from scipy.stats import chisquare

    assert chisquare(counts, table * draws).pvalue > 0.001
    # per-letter marginal: Pr[X on qubit 0] = p/3
    pr_x = sum(counts[i] for i in range(16) if i % 4 == 1) / draws
    assert pr_x == pytest.approx(0.1, abs=0.005)


def test_sample_bernoulli_mean(rng):
    total = sum(sample_bernoulli(4, 0.25, rng).weight() for _ in range(100_000))
    assert total / 100_000 == pytest.approx(1.0, abs=0.05)

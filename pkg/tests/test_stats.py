"""Statistical helpers: TV distance, Hoeffding CIs, chi-square."""
import numpy as np
import pytest

from stabnoise.stats import (
    advantage_ci,
    chi_square_uniform,
    diff_sigma,
    hoeffding_halfwidth,
    tv_exact,
)


def test_tv_examples():
    assert tv_exact([0.5, 0.5], [0.5, 0.5]) == 0.0
    assert tv_exact([1.0, 0.0], [0.0, 1.0]) == 1.0
    # Ber(0.5) vs Ber(0.25)
    assert tv_exact([0.5, 0.5], [0.75, 0.25]) == pytest.approx(0.25)


def test_tv_validation():
    with pytest.raises(ValueError):
        tv_exact([0.5, 0.5], [0.5, 0.5, 0.0])
    with pytest.raises(ValueError):
        tv_exact([0.6, 0.5], [0.5, 0.5])


def test_tv_metric_properties(rng):
    for _ in range(50):
        trio = []
        for _ in range(3):
            v = rng.random(8)
            trio.append(v / v.sum())
        p, q, r = trio
        assert tv_exact(p, q) == pytest.approx(tv_exact(q, p), abs=1e-12)
        assert tv_exact(p, r) <= tv_exact(p, q) + tv_exact(q, r) + 1e-12


def test_advantage_ci_example():
    est = advantage_ci(600, 1000, 400, 1000, 0.05)
    assert est.advantage == pytest.approx(0.2)
    assert est.ci_halfwidth == pytest.approx(0.0429, abs=5e-4)  # per arm
    assert est.trials == 1000


def test_halfwidth_scales_inverse_sqrt():
    a = hoeffding_halfwidth(1000, 0.05)
    b = hoeffding_halfwidth(4000, 0.05)
    assert a / b == pytest.approx(2.0)
    with pytest.raises(ValueError):
        hoeffding_halfwidth(0, 0.05)


def test_equal_rates_zero_advantage():
    est = advantage_ci(123, 1000, 123, 1000, 0.05)
    assert est.advantage == 0.0


def test_chi_square_uniform(rng):
    flat = rng.multinomial(60_000, np.full(6, 1 / 6))
    assert chi_square_uniform(flat) > 0.001
    assert chi_square_uniform([10_000, 0, 0, 0]) < 1e-6
    with pytest.raises(ValueError):
        chi_square_uniform([1, 2])  # expected < 5


def test_diff_sigma():
    s = diff_sigma(0.5, 100, 0.5, 100)
    assert s == pytest.approx((0.25 / 100 + 0.25 / 100) ** 0.5)

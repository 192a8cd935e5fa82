import math

import numpy as np
import pytest

from oracle_utils import (
    dense_grid_period_count,
    direct_pair_covariance,
    naive_trig_eval,
    naive_trig_sums,
)
from trigzeros.trigpoly import (
    OracleUnreliable,
    ScaledEvaluator,
    TrigPolynomial,
    batch_evaluate_window,
    companion_circle_roots_oracle,
    derivative_scaled,
    evaluate,
    evaluate_scaled,
    exact_pair_covariance,
    trig_sum_closed_form,
)

SINC2 = math.sin(2.0) / 2.0


def test_evaluate_trivials():
    assert abs(evaluate(TrigPolynomial([1.0], [0.0]), math.pi / 2) - 1.0) < 1e-15
    zero = TrigPolynomial([0.0, 0.0], [0.0, 0.0])
    assert evaluate(zero, 0.317) == 0.0


def test_evaluate_matches_naive_sum(rng):
    poly = TrigPolynomial(rng.standard_normal(3), rng.standard_normal(3))
    want = naive_trig_eval(poly.xi, poly.eta, 0.7)
    assert abs(evaluate(poly, 0.7) - want) <= 1e-12 * abs(want)


@pytest.mark.parametrize("n", [10, 100, 1000])
def test_evaluate_matches_naive_sweep(n, rng):
    poly = TrigPolynomial(rng.standard_normal(n), rng.standard_normal(n))
    # backward-relative agreement: at n=1000 any double-precision summation
    # route carries ~n*eps of the coefficient mass, so that is the denominator
    mass = float(np.sum(np.abs(poly.xi)) + np.sum(np.abs(poly.eta)))
    for t in rng.uniform(0.0, 2.0 * math.pi, 12):
        want = naive_trig_eval(poly.xi, poly.eta, t)
        assert abs(evaluate(poly, t) - want) <= 1e-12 * max(abs(want), mass)


def test_evaluate_scaled_substitution(rng):
    poly = TrigPolynomial(rng.standard_normal(7), rng.standard_normal(7))
    ev = ScaledEvaluator(poly, s=0.4, norm=2.5)
    assert evaluate_scaled(ev, 0.0) == pytest.approx(evaluate(poly, 0.4) / 2.5, rel=1e-14)
    one = ScaledEvaluator(TrigPolynomial([1.0], [0.0]), s=0.0, norm=1.0)
    assert one(math.pi / 2) == pytest.approx(1.0, abs=1e-15)


def test_evaluate_scaled_matches_direct(rng):
    poly = TrigPolynomial(rng.standard_normal(50), rng.standard_normal(50))
    ev = ScaledEvaluator(poly, s=1.2, norm=math.sqrt(50))
    want = evaluate(poly, 1.2 + 1.3 / 50) / math.sqrt(50)
    assert abs(ev(1.3) - want) <= 1e-12 * abs(want)


def test_derivative_scaled_trivials():
    ev_cos = ScaledEvaluator(TrigPolynomial([0.0], [1.0]), s=0.0, norm=1.0)
    assert derivative_scaled(ev_cos, 0.0) == pytest.approx(0.0, abs=1e-15)
    ev_sin = ScaledEvaluator(TrigPolynomial([1.0], [0.0]), s=0.0, norm=1.0)
    assert derivative_scaled(ev_sin, 0.0) == pytest.approx(1.0, abs=1e-14)


def test_derivative_matches_finite_difference(rng):
    poly = TrigPolynomial(rng.standard_normal(40), rng.standard_normal(40))
    ev = ScaledEvaluator(poly, s=0.9, norm=math.sqrt(40))
    h = 1e-6
    for u in (0.4, 1.7, -0.3):
        fd = (ev(u + h) - ev(u - h)) / (2 * h)
        d = ev.derivative(u)
        assert abs(d - fd) <= 1e-6 * max(abs(d), 1.0)


@pytest.mark.parametrize("size", [1, 2, 1024])
def test_batch_evaluate_matches_pointwise(size, rng):
    poly = TrigPolynomial(rng.standard_normal(30), rng.standard_normal(30))
    ev = ScaledEvaluator(poly, s=0.8, norm=3.0)
    grid = np.sort(rng.uniform(-2.0, 5.0, size))
    if size > 1:
        grid += np.arange(size) * 1e-9  # enforce strict monotonicity
    vals = batch_evaluate_window(ev, grid)
    scale = max(1e-3, float(np.max(np.abs(vals))))
    for u, v in zip(grid, vals):
        want = evaluate_scaled(ev, u)
        assert abs(v - want) <= 1e-12 * max(abs(want), 1e-3 * scale)


def test_batch_evaluate_validates_grid(rng):
    poly = TrigPolynomial([1.0], [0.0])
    ev = ScaledEvaluator(poly, 0.0, 1.0)
    with pytest.raises(ValueError):
        batch_evaluate_window(ev, [])
    with pytest.raises(ValueError):
        batch_evaluate_window(ev, [1.0, 1.0])


def test_trig_sum_closed_form_examples():
    assert trig_sum_closed_form(0.0, 5) == (5.0, 0.0)
    c, s = trig_sum_closed_form(math.pi / 2, 4)
    assert abs(c) < 1e-12 and abs(s) < 1e-12
    c, s = trig_sum_closed_form(2.0, 7)
    dc, ds = naive_trig_sums(2.0, 7)
    assert abs(c - dc) < 1e-12 and abs(s - ds) < 1e-12
    # continuity band near 2 pi Z
    assert trig_sum_closed_form(2 * math.pi + 1e-9, 11) == (11.0, 0.0)
    assert trig_sum_closed_form(-6 * math.pi - 1e-9, 3) == (3.0, 0.0)


def test_trig_sum_closed_form_random_thetas(rng):
    for theta in rng.uniform(0.05, 6.2, 25):
        n = int(rng.integers(1, 300))
        c, s = trig_sum_closed_form(theta, n)
        dc, ds = naive_trig_sums(theta, n)
        assert abs(c - dc) < 1e-9 * max(1.0, abs(dc))
        assert abs(s - ds) < 1e-9 * max(1.0, abs(ds))


def test_exact_pair_covariance_unit_diagonal():
    for n in (1, 10, 1234):
        for s in (0.0, 1.0, 2.2):
            assert exact_pair_covariance(1.0, 1.0, 0.0, n, s, 0.7, 0.7) == pytest.approx(
                1.0, abs=1e-12
            )


def test_exact_pair_covariance_approaches_sinc():
    got = exact_pair_covariance(1.0, 1.0, 0.0, 10 ** 4, 1.0, 0.0, 2.0)
    assert abs(got - SINC2) < 5e-4


def test_exact_pair_covariance_lattice_case():
    got = exact_pair_covariance(1.0, 0.0, 0.0, 10 ** 4, 0.0, 1.0, 1.0)
    want = 0.5 * (1.0 - SINC2)
    assert abs(got - want) < 5e-4


def test_exact_pair_covariance_matches_direct_sum(rng):
    for _ in range(20):
        s1, s2 = rng.uniform(0.0, 2.0, 2)
        rho = rng.uniform(-1.0, 1.0) * math.sqrt(s1 * s2)
        n = int(rng.integers(1, 3000))
        s, t1, t2 = rng.uniform(-3.0, 3.0, 3)
        got = exact_pair_covariance(s1, s2, rho, n, s, t1, t2)
        want = direct_pair_covariance(s1, s2, rho, n, s, t1, t2)
        assert abs(got - want) < 1e-10 * max(1.0, abs(want))


def test_pair_covariance_diagonal_nonnegative(rng):
    for _ in range(50):
        s1, s2 = rng.uniform(0.0, 2.0, 2)
        rho = rng.uniform(-1.0, 1.0) * math.sqrt(s1 * s2)
        n = int(rng.integers(1, 500))
        s, t = rng.uniform(-3.0, 3.0, 2)
        assert exact_pair_covariance(s1, s2, rho, n, s, t, t) >= -1e-12


def test_covariance_error_contracts_with_n():
    # O(1/n) convergence: doubling n must shrink the error to <= 0.75x
    cases = [
        (1.0, 1.0, 0.0, 1.0, 0.0, 2.0, SINC2),
        (1.0, 0.0, 0.0, 0.0, 1.0, 1.0, 0.5 * (1.0 - SINC2)),
        (1.0, 1.0, 0.0, 1.0, 0.5, 3.0, math.sin(2.5) / 2.5),
    ]
    for s1, s2, rho, s, t1, t2, limit in cases:
        errs = [
            abs(exact_pair_covariance(s1, s2, rho, n, s, t1, t2) - limit)
            for n in (512, 1024, 2048, 4096)
        ]
        for e_n, e_2n in zip(errs, errs[1:]):
            assert e_2n <= 0.75 * e_n


def test_bernstein_inequality(rng):
    for n in (8, 64):
        poly = TrigPolynomial(rng.standard_normal(n), rng.standard_normal(n))
        ev = ScaledEvaluator(poly, 0.0, 1.0)
        us = np.linspace(0.0, 2.0 * math.pi * n, 2 ** 18, endpoint=False)
        vals = ev(us)
        # derivative in u carries a 1/n; max |X'| = n * max |dY/du|
        dmax = np.max(np.abs(ev.derivative(us)))
        assert dmax <= np.max(np.abs(vals)) * (1.0 + 1e-6)


def test_companion_oracle_trivials():
    roots = companion_circle_roots_oracle(TrigPolynomial([0.0], [1.0]))
    assert np.allclose(roots, [math.pi / 2, 3 * math.pi / 2], atol=1e-12)
    roots = companion_circle_roots_oracle(TrigPolynomial([1.0], [0.0]))
    assert np.allclose(roots, [0.0, math.pi], atol=1e-12)


def test_companion_oracle_matches_dense_grid(rng):
    for _ in range(10):
        poly = TrigPolynomial(rng.standard_normal(8), rng.standard_normal(8))
        roots = companion_circle_roots_oracle(poly)
        ev = ScaledEvaluator(poly, 0.0, 1.0)
        assert len(roots) == dense_grid_period_count(ev, 8)
        # every reported root is a genuine zero
        for r in roots:
            assert abs(evaluate(poly, r)) < 1e-9 * np.sum(np.hypot(poly.xi, poly.eta))


def test_companion_oracle_rejects_bad_inputs(rng):
    with pytest.raises(ValueError):
        companion_circle_roots_oracle(TrigPolynomial([0.0], [0.0]))
    big = TrigPolynomial(rng.standard_normal(65), rng.standard_normal(65))
    with pytest.raises(ValueError):
        companion_circle_roots_oracle(big)


def test_polynomial_validation():
    with pytest.raises(ValueError):
        TrigPolynomial([], [])
    with pytest.raises(ValueError):
        TrigPolynomial([1.0, 2.0], [1.0])

import math
from fractions import Fraction

import numpy as np
import pytest

from oracle_utils import wrap_to_window
from trigzeros.rootfind import (
    CenterRule,
    DegenerateInput,
    ScanOptions,
    WindowSpec,
    ZeroFlag,
    count_sign_changes,
    count_zeros_window,
    joint_counts,
)
from trigzeros.sampling import FiniteVariance, draw_coefficients
from trigzeros.streams import coefficient_stream
from trigzeros.trigpoly import ScaledEvaluator, TrigPolynomial, companion_circle_roots_oracle


def test_sine_on_interval():
    rep = count_zeros_window(np.sin, np.cos, -1.0, 4.0)
    assert rep.count == 2
    assert np.allclose(rep.locations, [0.0, math.pi], atol=1e-10)
    assert not rep.flags


def test_positive_function_has_no_zeros():
    rep = count_zeros_window(lambda u: u * u + 1.0, lambda u: 2.0 * u, -1.0, 1.0)
    assert rep.count == 0
    assert not rep.flags


def test_refined_roots_hit_refinement_tolerance():
    rep = count_zeros_window(np.sin, np.cos, 2.0, 4.0)
    assert rep.count == 1
    assert abs(rep.locations[0] - math.pi) < 1e-11


def test_count_sign_changes_examples():
    assert count_sign_changes([1.0, -1.0, 1.0]) == 2
    assert count_sign_changes([1.0, 1.0, 1.0]) == 0
    assert count_sign_changes([1.0, 0.0, -1.0]) == 1
    assert count_sign_changes([0.0, 0.0, 2.0]) == 0
    with pytest.raises(ValueError):
        count_sign_changes([])


def test_degenerate_input_rejected():
    with pytest.raises(DegenerateInput):
        count_zeros_window(lambda u: 0.0 * u, lambda u: 0.0 * u, 0.0, 1.0)


def test_endpoint_zero_counted_once_and_flagged():
    rep = count_zeros_window(np.sin, np.cos, 0.0, 2.0)
    assert rep.count == 1
    assert rep.locations[0] == 0.0
    assert ZeroFlag.ENDPOINT_ZERO in rep.flags


def test_near_tangency_flagged_without_roots():
    f = lambda u: (u - 1.0) ** 2 + 1e-6
    fp = lambda u: 2.0 * (u - 1.0)
    rep = count_zeros_window(f, fp, 0.0, 2.0, ScanOptions(grid_points=256))
    assert rep.count == 0
    assert ZeroFlag.NEAR_TANGENCY in rep.flags


def test_hidden_pair_recovered_by_subdivision():
    # two roots 2e-4 apart: invisible on a 256-point grid, found by subdivision
    f = lambda u: (u - 1.0) ** 2 - 1e-8
    fp = lambda u: 2.0 * (u - 1.0)
    rep = count_zeros_window(f, fp, 0.0, 2.0, ScanOptions(grid_points=256))
    assert rep.count == 2
    assert np.allclose(rep.locations, [1.0 - 1e-4, 1.0 + 1e-4], atol=1e-10)


def test_joint_counts_examples():
    counts = joint_counts(np.sin, np.cos, [(-1.0, 1.0), (2.0, 4.0)])
    assert list(counts) == [1, 1]
    counts = joint_counts(lambda u: u * u + 1.0, lambda u: 2 * u, [(-1.0, 0.0), (0.5, 1.0)])
    assert list(counts) == [0, 0]
    with pytest.raises(ValueError):
        joint_counts(np.sin, np.cos, [(0.0, 2.0), (1.0, 3.0)])


def test_joint_counts_match_oracle_on_partition(rng):
    n = 16
    opts = ScanOptions()
    for _ in range(5):
        poly = TrigPolynomial(rng.standard_normal(n), rng.standard_normal(n))
        ev = ScaledEvaluator(poly, 0.0, 1.0)
        roots = companion_circle_roots_oracle(poly)
        parts_t = [(0.0, 1.5), (1.5, 3.0), (3.0, 4.7), (4.7, 2 * math.pi)]
        parts_u = [(a * n, b * n) for a, b in parts_t]
        counts = joint_counts(ev, ev.derivative, parts_u, opts)
        want = [sum(1 for r in roots if a <= r < b) for a, b in parts_t]
        assert list(counts) == want


def test_additivity_over_adjacent_intervals(rng):
    for _ in range(10):
        poly = TrigPolynomial(rng.standard_normal(12), rng.standard_normal(12))
        ev = ScaledEvaluator(poly, 0.3, 1.0)
        a, c, b = 0.0, 7.3, 20.0
        if abs(ev(c)) < 1e-12:
            continue
        whole = count_zeros_window(ev, ev.derivative, a, b).count
        left = count_zeros_window(ev, ev.derivative, a, c).count
        right = count_zeros_window(ev, ev.derivative, c, b).count
        assert whole == left + right


def test_determinism():
    f = np.sin
    fp = np.cos
    r1 = count_zeros_window(f, fp, -1.0, 10.0)
    r2 = count_zeros_window(f, fp, -1.0, 10.0)
    assert r1.count == r2.count
    assert np.array_equal(r1.locations, r2.locations)
    assert r1.flags == r2.flags


def test_scan_agrees_with_companion_oracle_full_period(rng):
    n = 16
    agree = 0
    trials = 300
    unreliable = 0
    for i in range(trials):
        pairs = draw_coefficients(FiniteVariance(), n, coefficient_stream(100, i))
        poly = TrigPolynomial(pairs.xi, pairs.eta)
        try:
            roots = companion_circle_roots_oracle(poly)
        except Exception:
            unreliable += 1
            continue
        ev = ScaledEvaluator(poly, 0.0, 1.0)
        rep = count_zeros_window(ev, ev.derivative, 0.0, 2.0 * math.pi * n)
        if rep.count == len(roots):
            agree += 1
        else:
            assert ZeroFlag.NEAR_TANGENCY in rep.flags
    assert unreliable <= 2
    assert agree >= (trials - unreliable) * 0.99


def test_window_resolution_soundness(rng):
    # windows of local width <= 10: missed roots against the oracle stay rare
    n = 64
    misses = 0
    checked = 0
    for i in range(150):
        pairs = draw_coefficients(FiniteVariance(), n, coefficient_stream(101, i))
        poly = TrigPolynomial(pairs.xi, pairs.eta)
        try:
            roots = companion_circle_roots_oracle(poly)
        except Exception:
            continue
        s = float(rng.uniform(0.0, 2.0 * math.pi))
        ev = ScaledEvaluator(poly, s, math.sqrt(n))
        a, b = 0.0, 4.0
        rep = count_zeros_window(ev, ev.derivative, a, b)
        want = len(wrap_to_window(roots, s + a / n, s + b / n))
        checked += 1
        if rep.count != want:
            misses += 1
            assert ZeroFlag.NEAR_TANGENCY in rep.flags
    assert checked > 100
    assert misses <= 1


def test_scan_options_validation():
    with pytest.raises(ValueError):
        ScanOptions(grid_points=4)
    with pytest.raises(ValueError):
        ScanOptions(subdivision_points=7)
    with pytest.raises(ValueError):
        count_zeros_window(np.sin, np.cos, 1.0, 1.0)


def test_center_rules():
    fixed = CenterRule(kind="fixed", s=1.0)
    assert fixed.value(10) == 1.0
    assert not fixed.is_lattice_regime()

    lat = CenterRule(kind="lattice_approach", s_pi=Fraction(1), rate=2.0)
    assert lat.is_lattice_regime()
    # |s_n - s| = o(1/n): quadratic approach
    assert abs(lat.value(100) - math.pi) == pytest.approx(2e-4)

    esc = CenterRule(kind="escape", s=0.0, rate=1.0)
    assert not esc.is_lattice_regime()
    # n * dist(s_n, pi Z) must grow
    dists = [n * abs(esc.value(n)) for n in (10, 100, 1000, 10000)]
    assert all(d2 > d1 for d1, d2 in zip(dists, dists[1:]))

    with pytest.raises(ValueError):
        CenterRule(kind="lattice_approach", s=1.0)  # target off the lattice
    with pytest.raises(ValueError):
        CenterRule(kind="diagonal")


def test_center_rule_classification():
    assert CenterRule(kind="fixed", s=0.0).targets_pi_lattice()
    assert CenterRule(kind="fixed", s=math.pi).targets_pi_lattice()
    assert not CenterRule(kind="fixed", s=1.0).targets_pi_lattice()
    assert CenterRule(kind="fixed", s_pi=Fraction(3)).targets_pi_lattice()
    assert not CenterRule(kind="fixed", s_pi=Fraction(1, 2)).targets_pi_lattice()
    assert CenterRule(kind="fixed", s_pi=Fraction(1, 2)).two_pi_fraction() == Fraction(1, 4)


def test_window_spec():
    w = WindowSpec(CenterRule(kind="fixed", s=1.0), a=0.0, b=2.0, n=500)
    assert w.s_n() == 1.0
    lo, hi = w.interval()
    assert lo == 1.0 and abs(hi - (1.0 + 2.0 / 500)) < 1e-15
    with pytest.raises(ValueError):
        WindowSpec(CenterRule(kind="fixed", s=1.0), a=2.0, b=0.0, n=500)
    with pytest.raises(ValueError):
        WindowSpec(CenterRule(kind="fixed", s=1.0), a=0.0, b=2.0, n=0)

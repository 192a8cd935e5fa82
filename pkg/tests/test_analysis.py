import math

import numpy as np
import pytest
from scipy.special import gamma as gamma_fn

from oracle_utils import exact_discrete_ks
from trigzeros.analysis import (
    CountDistribution,
    InsufficientSamples,
    chi2_two_sample,
    compare_distributions,
    empirical_pmf,
    equidistribution_ks,
    kac_rice_mean,
    tv_distance,
    weyl_limit,
    weyl_sigma_alpha,
)

TWO_PI = 2.0 * math.pi


def test_empirical_pmf_examples():
    d = empirical_pmf([0, 0, 1])
    assert d.pmf == {0: pytest.approx(2 / 3), 1: pytest.approx(1 / 3)}
    assert d.n_samples == 3
    with pytest.raises(ValueError):
        empirical_pmf([])


def test_empirical_pmf_fair_coin(rng):
    counts = rng.integers(0, 2, 10 ** 5)
    d = empirical_pmf(counts)
    assert abs(d.pmf[0] - 0.5) < 5e-3
    assert abs(d.pmf[1] - 0.5) < 5e-3


def test_pmf_mean_matches_arithmetic_mean(rng):
    counts = rng.integers(0, 7, 5000)
    d = empirical_pmf(counts)
    assert d.mean() == pytest.approx(counts.mean(), abs=1e-14)


def test_pmf_validation():
    with pytest.raises(ValueError):
        CountDistribution(pmf={0: 0.5, 1: 0.4}, n_samples=10)
    with pytest.raises(ValueError):
        CountDistribution(pmf={-1: 1.0}, n_samples=10)


def test_tv_distance_examples():
    p = empirical_pmf([0, 1])
    assert tv_distance(p, p) == 0.0
    q = empirical_pmf([2, 3])
    assert tv_distance(p, q) == pytest.approx(1.0)
    r = empirical_pmf([0, 0])
    assert tv_distance(p, r) == pytest.approx(0.5)


def test_tv_distance_is_a_metric(rng):
    def random_dist():
        raw = rng.integers(0, 5, 200)
        return empirical_pmf(raw)

    for _ in range(20):
        p, q, r = random_dist(), random_dist(), random_dist()
        assert tv_distance(p, q) == pytest.approx(tv_distance(q, p))
        assert tv_distance(p, r) <= tv_distance(p, q) + tv_distance(q, r) + 1e-12
        assert tv_distance(p, p) == 0.0


def test_chi2_identical_counts_give_zero_stat(rng):
    counts = rng.integers(0, 4, 2000)
    p = empirical_pmf(counts)
    stat, pvalue = chi2_two_sample(p, p)
    assert stat == 0.0
    assert pvalue == 1.0


def test_chi2_separated_distributions_rejected(rng):
    p = empirical_pmf(rng.integers(0, 2, 5000))
    q = empirical_pmf(rng.integers(3, 5, 5000))
    _, pvalue = chi2_two_sample(p, q)
    assert pvalue < 1e-6


def test_chi2_requires_samples():
    p = empirical_pmf([0] * 500 + [1] * 400)
    with pytest.raises(InsufficientSamples):
        chi2_two_sample(p, p)


def test_chi2_null_rejection_rate_calibrated(rng):
    # two halves of one stream: multinomial draws from a common pmf; the 1%
    # rejection rate should be right, within binomial noise over 1000 trials
    probs = np.array([0.45, 0.3, 0.15, 0.07, 0.03])
    n = 10 ** 5 // 2
    rejections = 0
    trials = 1000
    for _ in range(trials):
        c1 = rng.multinomial(n, probs)
        c2 = rng.multinomial(n, probs)
        p = CountDistribution(pmf={k: v / n for k, v in enumerate(c1) if v}, n_samples=n)
        q = CountDistribution(pmf={k: v / n for k, v in enumerate(c2) if v}, n_samples=n)
        _, pvalue = chi2_two_sample(p, q)
        rejections += pvalue < 0.01
    assert abs(rejections / trials - 0.01) <= 0.005


def test_kac_rice_values():
    assert kac_rice_mean(0.0, math.pi * math.sqrt(3.0)) == pytest.approx(1.0, abs=1e-15)
    assert kac_rice_mean(0.0, 2.0) == pytest.approx(2.0 / (math.pi * math.sqrt(3.0)))
    assert kac_rice_mean(0.0, 2.0) == pytest.approx(0.3676, abs=1e-4)
    # monotone in the right endpoint, additive over abutting intervals
    assert kac_rice_mean(0.0, 1.0) < kac_rice_mean(0.0, 2.0)
    assert kac_rice_mean(0.0, 1.0) + kac_rice_mean(1.0, 2.0) == pytest.approx(
        kac_rice_mean(0.0, 2.0)
    )
    with pytest.raises(ValueError):
        kac_rice_mean(1.0, 1.0)


def test_weyl_sigma_alpha_identity_at_two(rng):
    for _ in range(10):
        n = int(rng.integers(1, 3000))
        s = float(rng.uniform(-5, 5))
        assert weyl_sigma_alpha(n, s, 2.0) == 1.0


def test_weyl_sigma_alpha_enumeration():
    # n=4, s=pi/2, alpha=1: |cos| pattern 0,1,0,1 and |sin| pattern 1,0,1,0
    assert weyl_sigma_alpha(4, math.pi / 2, 1.0) == pytest.approx(1.0, abs=1e-12)


def test_weyl_sigma_alpha_converges_to_irrational_limit():
    got = weyl_sigma_alpha(10 ** 6, 1.0, 1.0)
    assert abs(got - weyl_limit("irrational", 1.0)) < 1e-2


def test_weyl_limit_values():
    assert weyl_limit("irrational", 2.0) == 1.0
    assert weyl_limit(4, 2.0) == pytest.approx(1.0, abs=1e-12)
    assert weyl_limit(4, 1.0) == pytest.approx(1.0, abs=1e-12)
    assert weyl_limit("irrational", 1.0) == pytest.approx(4.0 / math.pi, abs=1e-8)


def test_weyl_limit_matches_gamma_closed_form():
    # independent cross-check: (1/2pi) int |cos|^alpha = Gamma((a+1)/2) / (sqrt(pi) Gamma(a/2+1))
    for alpha in (0.5, 1.0, 1.5):
        want = 2.0 * gamma_fn((alpha + 1) / 2) / (math.sqrt(math.pi) * gamma_fn(alpha / 2 + 1))
        assert weyl_limit("irrational", alpha) == pytest.approx(want, abs=1e-8)


def test_equidistribution_ks_lattice_enumeration():
    # s = 2 pi * 1/2: the orbit alternates between 1/2 and 0
    for n in (10, 100):
        got = equidistribution_ks(n, math.pi * 2 / 2)
        pts = [(k * 0.5) % 1.0 for k in range(1, n + 1)]
        assert got == pytest.approx(exact_discrete_ks(pts), abs=1e-12)
        assert got == pytest.approx(0.5, abs=1e-12)


def test_equidistribution_ks_single_point():
    got = equidistribution_ks(1, 1.0)
    u = (1.0 / TWO_PI) % 1.0
    assert got == pytest.approx(max(u, 1.0 - u), abs=1e-15)


def test_equidistribution_ks_irrational_small():
    assert equidistribution_ks(10 ** 6, 1.0) < 5e-3


def test_compare_distributions(rng):
    p = empirical_pmf(rng.integers(0, 3, 5000))
    q = empirical_pmf(rng.integers(0, 3, 5000))
    v = compare_distributions(p, q)
    assert 0.0 <= v.tv <= 1.0
    assert v.chi2_pvalue is not None
    assert v.mean_ci_halfwidth > 0.0
    small = empirical_pmf([0, 1, 2])
    v2 = compare_distributions(small, small)
    assert v2.chi2_stat is None and v2.chi2_pvalue is None
    assert v2.tv == 0.0

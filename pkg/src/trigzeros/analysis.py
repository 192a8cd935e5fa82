"""Count distributions, distances, and the deterministic number-theory checks.

The statistical layer is deliberately small: empirical pmfs over nonnegative
integer counts, total-variation distance, a pooled two-sample chi-square, the
Kac-Rice mean oracle for the sinc-correlated process, and the Weyl
equidistribution quantities that drive the rational/irrational dichotomy of
the stable regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy.integrate import quad
from scipy.stats import chi2 as chi2_dist

TWO_PI = 2.0 * math.pi


class InsufficientSamples(ValueError):
    """Two-sample chi-square needs at least 1000 samples on each side."""


@dataclass(frozen=True)
class CountDistribution:
    """Empirical pmf over nonnegative integers with its sample size."""

    pmf: dict
    n_samples: int
    provenance: tuple = ()

    def __post_init__(self):
        if self.n_samples < 1:
            raise ValueError("n_samples must be >= 1")
        if any(k < 0 for k in self.pmf):
            raise ValueError("support must be nonnegative")
        total = sum(self.pmf.values())
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"pmf must sum to 1, got {total}")

    @classmethod
    def from_counts(cls, counts, provenance=()) -> "CountDistribution":
        counts = np.asarray(counts)
        if counts.size == 0:
            raise ValueError("counts must be nonempty")
        if counts.min() < 0:
            raise ValueError("counts must be nonnegative")
        freq = np.bincount(counts.astype(np.int64))
        pmf = {int(k): float(c) / counts.size for k, c in enumerate(freq) if c}
        return cls(pmf=pmf, n_samples=int(counts.size), provenance=tuple(provenance))

    def support(self):
        return sorted(self.pmf)

    def mean(self) -> float:
        return sum(k * p for k, p in self.pmf.items())

    def variance(self) -> float:
        m = self.mean()
        return sum((k - m) ** 2 * p for k, p in self.pmf.items())

    def raw_counts(self) -> dict:
        return {k: int(round(p * self.n_samples)) for k, p in self.pmf.items()}


@dataclass(frozen=True)
class ComparisonVerdict:
    tv: float
    chi2_stat: Optional[float]
    chi2_pvalue: Optional[float]
    mean_diff: float
    mean_ci_halfwidth: float

    def __post_init__(self):
        if not 0.0 <= self.tv <= 1.0 + 1e-12:
            raise ValueError("tv must lie in [0, 1]")
        if self.chi2_pvalue is not None and not 0.0 <= self.chi2_pvalue <= 1.0:
            raise ValueError("p-value must lie in [0, 1]")


def empirical_pmf(counts, provenance=()) -> CountDistribution:
    return CountDistribution.from_counts(counts, provenance)


def tv_distance(p: CountDistribution, q: CountDistribution) -> float:
    """Total variation: half the L1 distance over the union of supports."""
    keys = set(p.pmf) | set(q.pmf)
    return 0.5 * sum(abs(p.pmf.get(k, 0.0) - q.pmf.get(k, 0.0)) for k in keys)


def chi2_two_sample(p: CountDistribution, q: CountDistribution) -> tuple:
    """Two-sample chi-square over pooled bins.

    Bins whose combined expected count under the smaller sample falls below 5
    are pooled into a single tail bin; the statistic is referred to a
    chi-square law with (bins - 1) degrees of freedom.
    """
    n1, n2 = p.n_samples, q.n_samples
    if n1 < 1000 or n2 < 1000:
        raise InsufficientSamples("chi-square comparison needs >= 1000 samples per side")
    c1 = p.raw_counts()
    c2 = q.raw_counts()
    keys = sorted(set(c1) | set(c2))
    o1 = np.array([c1.get(k, 0) for k in keys], dtype=np.float64)
    o2 = np.array([c2.get(k, 0) for k in keys], dtype=np.float64)
    expected = (o1 + o2) * min(n1, n2) / (n1 + n2)
    main = expected >= 5.0
    bins1 = list(o1[main])
    bins2 = list(o2[main])
    if np.any(~main):
        bins1.append(o1[~main].sum())
        bins2.append(o2[~main].sum())
    bins1 = np.array(bins1)
    bins2 = np.array(bins2)
    df = len(bins1) - 1
    if df < 1:
        return 0.0, 1.0
    r1 = math.sqrt(n2 / n1)
    r2 = math.sqrt(n1 / n2)
    tot = bins1 + bins2
    mask = tot > 0
    stat = float(np.sum((r1 * bins1[mask] - r2 * bins2[mask]) ** 2 / tot[mask]))
    pvalue = float(chi2_dist.sf(stat, df))
    return stat, pvalue


def compare_distributions(p: CountDistribution, q: CountDistribution) -> ComparisonVerdict:
    """TV, chi-square (when sample sizes allow), and the mean difference with
    a normal-approximation confidence half-width."""
    try:
        stat, pvalue = chi2_two_sample(p, q)
    except InsufficientSamples:
        stat, pvalue = None, None
    mean_diff = p.mean() - q.mean()
    halfwidth = 1.96 * math.sqrt(p.variance() / p.n_samples + q.variance() / q.n_samples)
    return ComparisonVerdict(
        tv=tv_distance(p, q),
        chi2_stat=stat,
        chi2_pvalue=pvalue,
        mean_diff=mean_diff,
        mean_ci_halfwidth=halfwidth,
    )


def kac_rice_mean(a: float, b: float) -> float:
    """Expected zero count of the sinc-correlated process on [a, b].

    For a stationary unit-variance Gaussian process the level-0 crossing rate
    is sqrt(-r''(0))/pi; the sinc correlation has -r''(0) = 1/3 from
    sinc t = 1 - t^2/6 + ..., giving (b - a)/(pi sqrt(3)).  Cross-checked by
    Monte Carlo over sampled paths in the acceptance suite.
    """
    if not a < b:
        raise ValueError("requires a < b")
    return (b - a) / (math.pi * math.sqrt(3.0))


def weyl_sigma_alpha(n: int, s: float, alpha: float) -> float:
    """(1/n) sum_{k<=n} (|cos ks|^alpha + |sin ks|^alpha)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    ks = np.arange(1, n + 1, dtype=np.float64) * s
    if alpha == 2.0:
        return 1.0
    return float(np.mean(np.abs(np.cos(ks)) ** alpha + np.abs(np.sin(ks)) ** alpha))


def weyl_limit(s_class, alpha: float) -> float:
    """Limit of weyl_sigma_alpha: an integral (irrational) or exact finite sum
    (rational with denominator q, passed as the integer q)."""
    if not 0.0 < alpha <= 2.0:
        raise ValueError("alpha must lie in (0, 2]")
    if s_class == "irrational":
        if alpha == 2.0:
            return 1.0
        val, _ = quad(
            lambda u: abs(math.cos(TWO_PI * u)) ** alpha + abs(math.sin(TWO_PI * u)) ** alpha,
            0.0,
            1.0,
            points=[0.25, 0.5, 0.75],
            epsabs=1e-10,
            limit=200,
        )
        return float(val)
    q = int(s_class)
    if not 1 <= q <= 64:
        raise ValueError("rational class requires 1 <= q <= 64")
    total = sum(
        abs(math.cos(TWO_PI * k / q)) ** alpha + abs(math.sin(TWO_PI * k / q)) ** alpha
        for k in range(1, q + 1)
    )
    return total / q


def equidistribution_ks(n: int, s: float) -> float:
    """Kolmogorov-Smirnov distance of {k s/(2 pi) mod 1 : k <= n} to U[0, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    u = (np.arange(1, n + 1, dtype=np.float64) * s / TWO_PI) % 1.0
    # k*s carries ~k*eps of rounding; orbit points pushed just below 1 are
    # wrap artifacts of the circle embedding and belong at 0
    tol = 64.0 * np.finfo(np.float64).eps * n * max(1.0, abs(s))
    u[u >= 1.0 - tol] = 0.0
    u.sort()
    i = np.arange(1, n + 1)
    d_plus = np.max(i / n - u)
    d_minus = np.max(u - (i - 1) / n)
    return float(max(d_plus, d_minus))

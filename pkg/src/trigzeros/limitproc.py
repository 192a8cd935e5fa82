"""Simulators for the three local limit processes and their covariances.

* ``ZPath``: the stationary unit-variance Gaussian process with sinc
  correlation, sampled through the truncated cardinal series
  Z(t) = sum_{|k| <= K} sinc(t - pi k) N_k.  The truncation variance deficit
  is checked against the analytic tail bound once per cutoff.
* ``LevyIntegralPath``: discretized stochastic integrals
  int_0^1 sin(tu) dRe L + int_0^1 cos(tu) dIm L over midpoint nodes; the
  increment law decides whether this realizes the lattice Gaussian process
  (Brownian increments) or the stable limit (exact stable increments).
* ``limit_covariance``: closed forms, including the lattice extra terms and
  the (1 - cos x)/x convention at x = 0.

The spectral tilt of the stable regime (rotation averaging of the Levy
measure) lives here as ``tilt_levy_measure`` together with the arithmetic
classification of the window center.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import numpy as np
from scipy.integrate import quad

from . import _kernels
from .sampling import cms_stable, isotropic_atoms, sym_sqrt_2x2

TWO_PI = 2.0 * math.pi


class RationalOverflow(ValueError):
    """Window center is rational in 2*pi with denominator above the cap."""


def _sinc(x: float) -> float:
    return float(np.sinc(x / math.pi))


def _one_minus_cos_over(x: float) -> float:
    if x == 0.0:
        return 0.0
    if abs(x) < 1e-4:
        return x / 2.0 - x ** 3 / 24.0
    return (1.0 - math.cos(x)) / x


@dataclass(frozen=True)
class LimitSpec:
    """Which limit process to simulate, with its parameters.

    ``cardinal_cutoff`` (K) controls the Z series, ``steps`` (m) the
    integral discretizations.  For Znu, ``atoms`` are the *tilted* spectral
    atoms of the driving Levy process.
    """

    variant: str  # "Z" | "G_generic" | "G_lattice" | "Znu"
    sigma1_sq: float = 1.0
    sigma2_sq: float = 1.0
    rho: float = 0.0
    alpha: Optional[float] = None
    atoms: Optional[tuple] = None
    cardinal_cutoff: int = 512
    steps: int = 2048

    def __post_init__(self):
        if self.variant not in ("Z", "G_generic", "G_lattice", "Znu"):
            raise ValueError(f"unknown limit variant {self.variant!r}")
        if self.cardinal_cutoff < 64:
            raise ValueError("cardinal cutoff K must be >= 64")
        if self.steps < 256:
            raise ValueError("integration steps m must be >= 256")
        if self.variant in ("G_generic", "G_lattice"):
            if self.sigma1_sq < 0 or self.sigma2_sq < 0:
                raise ValueError("variances must be nonnegative")
            if self.rho * self.rho > self.sigma1_sq * self.sigma2_sq * (1 + 1e-12):
                raise ValueError("|rho| must not exceed sqrt(sigma1_sq * sigma2_sq)")
        if self.variant == "Znu":
            if self.alpha is None or not 0.0 < self.alpha < 2.0:
                raise ValueError("Znu requires alpha in (0, 2)")
            if not self.atoms or any(w <= 0 for _, w in self.atoms):
                raise ValueError("Znu requires spectral atoms with positive weights")
            object.__setattr__(self, "atoms", tuple((float(a), float(w)) for a, w in self.atoms))


class ZPath:
    """Truncated cardinal series path; callable on scalars and grids."""

    def __init__(self, noise: np.ndarray, amplitude: float = 1.0, provenance=("Z", "adhoc")):
        noise = np.ascontiguousarray(noise, dtype=np.float64)
        if noise.ndim != 1 or noise.shape[0] % 2 == 0 or noise.shape[0] < 3:
            raise ValueError("noise must be a 1-d array of odd length 2K+1")
        self.noise = noise
        self.amplitude = float(amplitude)
        self.provenance = provenance
        self.K = (noise.shape[0] - 1) // 2
        ks = np.arange(-self.K, self.K + 1)
        signs = np.where(ks % 2 == 0, 1.0, -1.0)
        self._m_signed = np.ascontiguousarray(signs * noise * self.amplitude)

    def __call__(self, t):
        if np.ndim(t) == 0:
            return _kernels.cardinal_eval_scalar(self._m_signed, float(t))
        ts = np.ascontiguousarray(t, dtype=np.float64)
        return _kernels.cardinal_eval_grid(self._m_signed, ts)

    def derivative(self, t):
        if np.ndim(t) == 0:
            return _kernels.cardinal_deriv_scalar(self._m_signed, float(t))
        ts = np.ascontiguousarray(t, dtype=np.float64)
        return _kernels.cardinal_deriv_grid(self._m_signed, ts)


class LevyIntegralPath:
    """Riemann-Stieltjes sum of sin/cos against complex increments.

    ``d_re``/``d_im`` are the m increments of the driving process on the
    midpoint partition of [0, 1]; evaluation and the termwise t-derivative run
    through the shared Horner kernels.
    """

    def __init__(self, d_re: np.ndarray, d_im: np.ndarray, provenance=("levy", "adhoc")):
        d_re = np.ascontiguousarray(d_re, dtype=np.float64)
        d_im = np.ascontiguousarray(d_im, dtype=np.float64)
        if d_re.ndim != 1 or d_re.shape != d_im.shape or d_re.shape[0] < 1:
            raise ValueError("increments must be equal-length 1-d arrays")
        self.d_re = d_re
        self.d_im = d_im
        self.provenance = provenance
        m = d_re.shape[0]
        u = (np.arange(m) + 0.5) / m
        self._ud_re = np.ascontiguousarray(u * d_re)
        self._ud_im = np.ascontiguousarray(u * d_im)

    @property
    def steps(self) -> int:
        return self.d_re.shape[0]

    def imaginary_total(self) -> float:
        """Im L(1) = sum of imaginary increments; equals the path value at 0."""
        return float(np.sum(self.d_im))

    def __call__(self, t):
        if np.ndim(t) == 0:
            return _kernels.levy_eval_scalar(self.d_re, self.d_im, float(t))
        ts = np.ascontiguousarray(t, dtype=np.float64)
        return _kernels.levy_eval_grid(self.d_re, self.d_im, ts)

    def derivative(self, t):
        if np.ndim(t) == 0:
            return _kernels.levy_deriv_scalar(self._ud_re, self._ud_im, float(t))
        ts = np.ascontiguousarray(t, dtype=np.float64)
        return _kernels.levy_deriv_grid(self._ud_re, self._ud_im, ts)


LimitPath = Union[ZPath, LevyIntegralPath]


def cardinal_truncation_bound(K: int, t: float) -> float:
    """Tail bound for the cardinal series: sum_{|k|>K} sinc^2(t - pi k)."""
    if abs(t) > math.pi * K / 2.0:
        raise ValueError("bound is valid for |t| <= pi K / 2")
    return 2.0 / (math.pi ** 2 * (K - abs(t) / math.pi))


def cardinal_variance_deficit(K: int, t: float) -> float:
    """1 - sum_{|k| <= K} sinc^2(t - pi k); the variance lost to truncation."""
    x = t - math.pi * np.arange(-K, K + 1)
    w = np.sinc(x / math.pi)
    return 1.0 - float(np.sum(w * w))


_checked_cutoffs = set()


def sample_Z_path(K: int, stream: np.random.Generator, amplitude: float = 1.0,
                  seed_path: str = "adhoc") -> ZPath:
    """Draw 2K+1 standard Gaussians and return the truncated series path."""
    if K < 64:
        raise ValueError("cardinal cutoff K must be >= 64")
    if K not in _checked_cutoffs:
        deficit = cardinal_variance_deficit(K, 0.0)
        bound = cardinal_truncation_bound(K, 0.0)
        if deficit > bound:
            raise AssertionError("cardinal truncation deficit exceeds its bound")
        _checked_cutoffs.add(K)
    noise = stream.standard_normal(2 * K + 1)
    return ZPath(noise, amplitude=amplitude, provenance=(f"Z:K={K}", seed_path))


def sample_Z_on_grid_cholesky(ts, stream: np.random.Generator,
                              jitter: float = 1e-10) -> np.ndarray:
    """Gaussian vector with the sinc covariance on a fixed grid.

    Cross-check route only: unlike the cardinal series this yields no
    evaluable function (nothing to hand to the root refiner), but its
    empirical covariance validates the series sampler independently.
    """
    ts = np.asarray(ts, dtype=np.float64)
    gap = ts[:, None] - ts[None, :]
    cov = np.sinc(gap / math.pi) + jitter * np.eye(ts.shape[0])
    chol = np.linalg.cholesky(cov)
    return chol @ stream.standard_normal(ts.shape[0])


def sample_G_path(spec: LimitSpec, m: int, stream: np.random.Generator,
                  seed_path: str = "adhoc") -> LimitPath:
    """Sample the finite-variance limit process.

    Off the lattice the process is just sqrt((sigma1^2 + sigma2^2)/2) times Z.
    On the lattice it is the Brownian integral with bivariate increments of
    covariance [[sigma1^2, rho], [rho, sigma2^2]] / m.
    """
    if spec.variant == "G_generic":
        amp = math.sqrt(0.5 * (spec.sigma1_sq + spec.sigma2_sq))
        return sample_Z_path(spec.cardinal_cutoff, stream, amplitude=amp, seed_path=seed_path)
    if spec.variant != "G_lattice":
        raise ValueError("sample_G_path needs a G_generic or G_lattice spec")
    if m < 256:
        raise ValueError("integration steps m must be >= 256")
    root = sym_sqrt_2x2(spec.sigma1_sq, spec.sigma2_sq, spec.rho)
    z = stream.standard_normal((m, 2))
    incr = (z @ root.T) / math.sqrt(m)
    return LevyIntegralPath(incr[:, 0], incr[:, 1],
                            provenance=(f"G_lattice:m={m}", seed_path))


def sample_Znu_path(alpha: float, tilted_atoms, m: int, stream: np.random.Generator,
                    seed_path: str = "adhoc") -> LevyIntegralPath:
    """Stable-integral path: m exact alpha-stable increments with the tilted
    spectral measure, each scaled by (1/m)^{1/alpha} through the weights."""
    if m < 256:
        raise ValueError("integration steps m must be >= 256")
    angles = np.array([a for a, _ in tilted_atoms])
    scales = (np.array([w for _, w in tilted_atoms]) / m) ** (1.0 / alpha)
    s = cms_stable(alpha, (m, angles.shape[0]), stream)
    d_re = s @ (scales * np.cos(angles))
    d_im = s @ (scales * np.sin(angles))
    return LevyIntegralPath(d_re, d_im, provenance=(f"Znu:alpha={alpha}:m={m}", seed_path))


def sample_limit_path(spec: LimitSpec, stream: np.random.Generator,
                      seed_path: str = "adhoc") -> LimitPath:
    if spec.variant == "Z":
        return sample_Z_path(spec.cardinal_cutoff, stream, seed_path=seed_path)
    if spec.variant in ("G_generic", "G_lattice"):
        return sample_G_path(spec, spec.steps, stream, seed_path=seed_path)
    return sample_Znu_path(spec.alpha, spec.atoms, spec.steps, stream, seed_path=seed_path)


def limit_covariance(spec: LimitSpec, t1: float, t2: float) -> float:
    """Closed-form covariance of the Gaussian limit processes.

    The lattice case carries the extra sinc(t1 + t2) and (1 - cos)/x terms;
    the stable process has no finite second moment and is rejected.
    """
    if spec.variant == "Znu":
        raise ValueError("the stable limit process has no finite second moment")
    if spec.variant == "Z":
        return _sinc(t1 - t2)
    base = 0.5 * (spec.sigma1_sq + spec.sigma2_sq) * _sinc(t1 - t2)
    if spec.variant == "G_generic":
        return base
    return (
        base
        - 0.5 * (spec.sigma1_sq - spec.sigma2_sq) * _sinc(t1 + t2)
        + spec.rho * _one_minus_cos_over(t1 + t2)
    )


@dataclass(frozen=True)
class CenterClass:
    kind: str  # "rational" | "irrational"
    fraction: Optional[Fraction] = None  # s / (2 pi) mod 1, when rational

    @property
    def q(self) -> Optional[int]:
        return self.fraction.denominator if self.fraction is not None else None


def classify_two_pi_rational(s, q_max: int = 64, tol: float = 1e-12) -> CenterClass:
    """Classify s as a rational or irrational multiple of 2*pi.

    Exact intent can be declared by passing a Fraction equal to s/(2*pi);
    floats fall back to a continued-fraction test with denominators capped at
    q_max.  A declared rational beyond the cap raises RationalOverflow.
    """
    if isinstance(s, Fraction):
        frac = s % 1
        if frac.denominator > q_max:
            raise RationalOverflow(
                f"rational center with q={frac.denominator} exceeds cap {q_max}"
            )
        return CenterClass("rational", frac)
    x = (float(s) / TWO_PI) % 1.0
    best = Fraction(x).limit_denominator(q_max)
    if abs(x - float(best)) < tol:
        return CenterClass("rational", best % 1)
    return CenterClass("irrational")


def _merge_atoms(atoms, tol: float = 1e-12):
    atoms = sorted(((a % TWO_PI, w) for a, w in atoms))
    merged = []
    for a, w in atoms:
        if merged and a - merged[-1][0] < tol:
            merged[-1][1] += w
        else:
            merged.append([a, w])
    if len(merged) > 1 and (merged[0][0] + TWO_PI) - merged[-1][0] < tol:
        merged[0][1] += merged.pop()[1]
    return tuple((a, w) for a, w in merged)


def tilt_levy_measure(atoms, s, q_max: int = 64) -> tuple:
    """Rotation-average the spectral atoms according to the center class.

    Irrational centers average over all rotations, so only the total weight
    survives; it is spread over the default 64-angle uniform atom set.
    Rational centers s = 2 pi p/q replace each atom (phi, w) by the q atoms
    (phi - 2 pi k/q, w/q), merged on collision.  Total weight is preserved in
    both cases.
    """
    cls = s if isinstance(s, CenterClass) else classify_two_pi_rational(s, q_max)
    total = sum(w for _, w in atoms)
    if cls.kind == "irrational":
        return isotropic_atoms(total_weight=total)
    q = cls.q
    out = []
    for a, w in atoms:
        for k in range(1, q + 1):
            out.append(((a - TWO_PI * k / q) % TWO_PI, w / q))
    return _merge_atoms(out)


def stable_cf_exponent(alpha: float, atoms, t: float, a: float) -> float:
    """Re log E exp(i a Znu(t)) = -|a|^alpha sum_j w_j int_0^1 |sin(tu+phi_j)|^alpha du.

    Adaptive quadrature per atom, splitting at the kinks of |sin|^alpha.
    Serves as the closed-form oracle for the stable-path simulator.
    """
    total = 0.0
    for phi, w in atoms:
        if t == 0.0:
            val = abs(math.sin(phi)) ** alpha
        else:
            k_lo = math.ceil((min(phi, t + phi)) / math.pi)
            k_hi = math.floor((max(phi, t + phi)) / math.pi)
            pts = sorted(
                (k * math.pi - phi) / t
                for k in range(k_lo, k_hi + 1)
                if 0.0 < (k * math.pi - phi) / t < 1.0
            )
            val, _ = quad(
                lambda u: abs(math.sin(t * u + phi)) ** alpha,
                0.0,
                1.0,
                points=pts or None,
                limit=200,
            )
        total += w * val
    return -abs(a) ** alpha * total

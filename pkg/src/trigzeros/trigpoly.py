"""Trigonometric polynomials: evaluation, covariance identities, root oracle.

A polynomial X(t) = sum_{k=1}^n (xi_k sin kt + eta_k cos kt) is evaluated as
the real part of a complex Horner recurrence for P(z) = sum (eta_k - i xi_k)
z^k at z = e^{it}; this halves the transcendental calls compared to per-term
sin/cos and behaves well under cancellation.  The scalar path additionally
compensates the Horner additions.  Window-scaled evaluation follows
Y(u) = X(s + u/n) / norm.

The module also carries the deterministic pieces used by the covariance
regression suite (closed-form trig sums, the exact finite-n pair covariance)
and an exact small-degree root oracle based on the companion roots of
Q(z) = z^n * 2 X(t(z)) on the unit circle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels

TWO_PI = 2.0 * math.pi


class OracleUnreliable(RuntimeError):
    """A companion root sits near the unit circle but cannot be polished."""


@dataclass(frozen=True, eq=False)
class TrigPolynomial:
    xi: np.ndarray
    eta: np.ndarray

    def __post_init__(self):
        xi = np.ascontiguousarray(self.xi, dtype=np.float64)
        eta = np.ascontiguousarray(self.eta, dtype=np.float64)
        if xi.ndim != 1 or xi.shape != eta.shape or xi.shape[0] < 1:
            raise ValueError("xi and eta must be 1-d arrays of equal length >= 1")
        object.__setattr__(self, "xi", xi)
        object.__setattr__(self, "eta", eta)

    @property
    def n(self) -> int:
        return self.xi.shape[0]

    def is_zero(self) -> bool:
        return not (np.any(self.xi) or np.any(self.eta))


def evaluate(poly: TrigPolynomial, t: float) -> float:
    """X(t) via compensated complex Horner at e^{it}."""
    return _kernels.trig_eval_scalar(poly.xi, poly.eta, float(t), 1.0)


def evaluate_derivative(poly: TrigPolynomial, t: float) -> float:
    """dX/dt = sum k (xi_k cos kt - eta_k sin kt)."""
    k = np.arange(1.0, poly.n + 1.0)
    return _kernels.trig_deriv_scalar(k * poly.xi, k * poly.eta, float(t), 1.0)


class ScaledEvaluator:
    """Window-scaled view Y(u) = X(s + u/n) / norm, with derivative in u.

    Callable on scalars and on grids; instances are immutable after
    construction and safe to share between threads.
    """

    def __init__(self, poly: TrigPolynomial, s: float, norm: float):
        if norm <= 0:
            raise ValueError("norm must be positive")
        self.poly = poly
        self.s = float(s)
        self.norm = float(norm)
        n = poly.n
        self._inv_n = 1.0 / n
        self._inv_norm = 1.0 / self.norm
        k = np.arange(1.0, n + 1.0)
        self._wxi = np.ascontiguousarray(k * poly.xi)
        self._weta = np.ascontiguousarray(k * poly.eta)
        self._dscale = 1.0 / (n * self.norm)

    def __call__(self, u):
        if np.ndim(u) == 0:
            t = self.s + float(u) * self._inv_n
            return _kernels.trig_eval_scalar(self.poly.xi, self.poly.eta, t, self._inv_norm)
        us = np.ascontiguousarray(u, dtype=np.float64)
        return _kernels.trig_eval_grid(
            self.poly.xi, self.poly.eta, self.s, self._inv_n, self._inv_norm, us
        )

    def derivative(self, u):
        if np.ndim(u) == 0:
            t = self.s + float(u) * self._inv_n
            return _kernels.trig_deriv_scalar(self._wxi, self._weta, t, self._dscale)
        us = np.ascontiguousarray(u, dtype=np.float64)
        return _kernels.trig_deriv_grid(
            self._wxi, self._weta, self.s, self._inv_n, self._dscale, us
        )


def evaluate_scaled(ev: ScaledEvaluator, u: float) -> float:
    return ev(float(u))


def derivative_scaled(ev: ScaledEvaluator, u: float) -> float:
    return ev.derivative(float(u))


def batch_evaluate_window(ev: ScaledEvaluator, grid) -> np.ndarray:
    """Vectorized evaluation on a strictly increasing grid."""
    grid = np.asarray(grid, dtype=np.float64)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    if grid.size > 1 and not np.all(np.diff(grid) > 0):
        raise ValueError("grid must be strictly increasing")
    return ev(grid)


def trig_sum_closed_form(theta: float, n: int) -> tuple:
    """(sum_{k<=n} cos k theta, sum_{k<=n} sin k theta) in closed form.

    Within 1e-8 of 2 pi Z the closed forms lose too many digits, so the
    continuity values (n, 0) are returned instead.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    r = theta - TWO_PI * round(theta / TWO_PI)
    if abs(r) < 1e-8:
        return float(n), 0.0
    half = 0.5 * theta
    s2 = math.sin(half)
    arg = (n + 0.5) * theta
    sum_cos = -0.5 + math.sin(arg) / (2.0 * s2)
    sum_sin = 0.5 * math.cos(half) / s2 - math.cos(arg) / (2.0 * s2)
    return sum_cos, sum_sin


def exact_pair_covariance(
    sigma1_sq: float,
    sigma2_sq: float,
    rho: float,
    n: int,
    s: float,
    t1: float,
    t2: float,
) -> float:
    """E[Y_n(t1) Y_n(t2)] for the window-scaled polynomial at center s.

    Product-to-sum reduction of the three coefficient sums; the two surviving
    frequencies are (t1 - t2)/n and 2s + (t1 + t2)/n, both evaluated through
    the closed-form trig sums, so the whole expression is O(1) in n.  The O(n)
    direct summation is kept as the test oracle.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d_minus = (t1 - t2) / n
    d_plus = 2.0 * s + (t1 + t2) / n
    c_minus, _ = trig_sum_closed_form(d_minus, n)
    c_plus, s_plus = trig_sum_closed_form(d_plus, n)
    return (
        sigma1_sq / (2.0 * n) * (c_minus - c_plus)
        + sigma2_sq / (2.0 * n) * (c_minus + c_plus)
        + rho / n * s_plus
    )


def _wrap_angle(t: float) -> float:
    return t % TWO_PI


def companion_circle_roots_oracle(poly: TrigPolynomial, max_degree: int = 64) -> np.ndarray:
    """All real zeros of X in [0, 2 pi), exactly, for small degrees.

    X(t) = Re P(e^{it}) with P(z) = sum (eta_k - i xi_k) z^k, so the real
    zeros are the unit-circle roots of the degree-2n polynomial
    Q(z) = z^n (P(z) + conj(P)(1/z)).  Companion (eigenvalue) root finding is
    O(n^3), hence the degree cap.  Roots within 1e-8 of the circle are
    accepted and polished by Newton on X; anything within 1e-6 that fails to
    polish raises OracleUnreliable.
    """
    n = poly.n
    if n > max_degree:
        raise ValueError(f"oracle is limited to degree <= {max_degree}")
    if poly.is_zero():
        raise ValueError("polynomial is identically zero")
    coeffs = np.zeros(2 * n + 1, dtype=np.complex128)
    c = poly.eta - 1j * poly.xi
    coeffs[n + 1:] = c
    coeffs[:n] = np.conj(c)[::-1]
    roots = np.roots(coeffs[::-1])
    dist = np.abs(np.abs(roots) - 1.0)
    candidates = roots[dist < 1e-6]
    scale = float(np.sum(np.hypot(poly.xi, poly.eta)))

    polished = []
    for r in candidates:
        t0 = _wrap_angle(float(np.angle(r)))
        t = t0
        converged = False
        for _ in range(60):
            v = evaluate(poly, t)
            d = evaluate_derivative(poly, t)
            if d == 0.0:
                break
            step = v / d
            t -= step
            if abs(step) < 1e-13:
                converged = True
                break
        moved = abs((t - t0 + math.pi) % TWO_PI - math.pi)
        ok = converged and moved < 1e-4 and abs(evaluate(poly, t)) <= 1e-8 * scale
        if not ok:
            raise OracleUnreliable(
                f"root at distance {np.abs(np.abs(r) - 1.0):.2e} from the unit "
                "circle failed to polish"
            )
        polished.append(_wrap_angle(t))

    polished.sort()
    out = []
    for t in polished:
        if out and abs(t - out[-1]) < 1e-9:
            continue
        out.append(t)
    # wrap-around duplicate: a zero polished to both ~0 and ~2 pi
    if len(out) > 1 and (out[0] + TWO_PI) - out[-1] < 1e-9:
        out.pop()
    return np.array(out)

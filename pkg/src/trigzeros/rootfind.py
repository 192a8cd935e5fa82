"""Sign-scan zero counting with bisection/Newton refinement and tangency flags.

The counter scans an equispaced grid, refines every strict sign change by
bisection followed by safeguarded Newton, and treats grid points where |f|
dips below a tangency threshold without changing sign as candidates for a
hidden root pair: those cells are recursively subdivided (bounded depth) and
flagged ``NEAR_TANGENCY`` when the dip persists unresolved.  Zeros are counted
without multiplicity; endpoint zeros are counted once under the left-closed
convention and flagged.

Everything here is pure and deterministic: identical inputs and options give
identical reports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np


class DegenerateInput(ValueError):
    """The sampled function is numerically zero on the scan grid."""


class ZeroFlag(str, Enum):
    NEAR_TANGENCY = "near_tangency"
    ENDPOINT_ZERO = "endpoint_zero"
    REFINEMENT_FAILED = "refinement_failed"


@dataclass(frozen=True)
class ScanOptions:
    grid_points: int = 2048
    refine_tol: Optional[float] = None  # default 1e-12 * (b - a)
    tangency_rel: float = 1e-2          # threshold relative to max |f| on the grid
    subdivision_levels: int = 3
    subdivision_points: int = 16
    max_dip_windows: int = 64

    def __post_init__(self):
        if self.grid_points < 8:
            raise ValueError("grid_points must be >= 8")
        if self.subdivision_points < 4 or self.subdivision_points % 2:
            raise ValueError("subdivision_points must be even and >= 4")


@dataclass(frozen=True, eq=False)
class ZeroReport:
    count: int
    locations: np.ndarray
    flags: frozenset

    def __post_init__(self):
        if not self.flags and self.count != len(self.locations):
            raise ValueError("count must equal len(locations) when unflagged")


@dataclass(frozen=True)
class CenterRule:
    """Rule producing the window center s_n for degree n.

    ``fixed`` keeps the base center.  ``lattice_approach`` adds rate/n^2 so
    that |s_n - s| = o(1/n); its target must lie in pi*Z.  ``escape`` adds
    rate*log(n)/n, which keeps n*dist(s_n, pi*Z) growing like rate*log(n).
    An exact center can be declared as a fraction of pi via ``s_pi``; decimal
    centers are classified with a tolerance.
    """

    kind: str = "fixed"
    s: float = 0.0
    s_pi: Optional[Fraction] = None
    rate: float = 1.0

    def __post_init__(self):
        if self.kind not in ("fixed", "lattice_approach", "escape"):
            raise ValueError(f"unknown center rule {self.kind!r}")
        if self.s_pi is not None:
            object.__setattr__(self, "s_pi", Fraction(self.s_pi))
            object.__setattr__(self, "s", math.pi * float(self.s_pi))
        if self.kind == "lattice_approach" and not self.targets_pi_lattice():
            raise ValueError("lattice_approach requires a target in pi*Z")

    def base(self) -> float:
        return self.s

    def value(self, n: int) -> float:
        if self.kind == "fixed":
            return self.s
        if self.kind == "lattice_approach":
            return self.s + self.rate / (n * n)
        return self.s + self.rate * math.log(n) / n

    def targets_pi_lattice(self, tol: float = 1e-12) -> bool:
        if self.s_pi is not None:
            return self.s_pi.denominator == 1
        return abs(self.s - math.pi * round(self.s / math.pi)) < tol

    def is_lattice_regime(self) -> bool:
        """Which branch of the covariance dichotomy this rule drives."""
        if self.kind == "escape":
            return False
        if self.kind == "lattice_approach":
            return True
        return self.targets_pi_lattice()

    def two_pi_fraction(self) -> Optional[Fraction]:
        """Exact s/(2 pi) when the center was declared as a pi-fraction."""
        if self.s_pi is not None:
            return Fraction(self.s_pi, 2)
        return None


@dataclass(frozen=True)
class WindowSpec:
    center: CenterRule
    a: float
    b: float
    n: int

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError("window requires a < b")
        if self.n < 1:
            raise ValueError("degree must be >= 1")

    def s_n(self) -> float:
        return self.center.value(self.n)

    def interval(self) -> tuple:
        s = self.s_n()
        return (s + self.a / self.n, s + self.b / self.n)


def count_sign_changes(values) -> int:
    """Adjacent strict sign alternations; zeros keep the previous sign."""
    values = np.asarray(values, dtype=np.float64)
    if values.size == 0:
        raise ValueError("values must be nonempty")
    signs = np.sign(values)
    nonzero = signs[signs != 0.0]
    if nonzero.size < 2:
        return 0
    return int(np.count_nonzero(nonzero[1:] != nonzero[:-1]))


def _eval_grid(f: Callable, xs: np.ndarray) -> np.ndarray:
    try:
        vals = np.asarray(f(xs), dtype=np.float64)
        if vals.shape == xs.shape:
            return vals
    except (TypeError, ValueError):
        pass
    return np.array([float(f(x)) for x in xs])


def _refine_bracket(f, fprime, lo, hi, flo, fhi, xtol):
    """Bisection to a narrow bracket, then Newton safeguarded by the bracket.

    Returns (root, converged); converged means the last step was below xtol.
    """
    for _ in range(80):
        if hi - lo <= 1e6 * xtol:
            break
        mid = 0.5 * (lo + hi)
        fm = float(f(mid))
        if fm == 0.0:
            return mid, True
        if (flo < 0.0) != (fm < 0.0):
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    x = 0.5 * (lo + hi)
    fx = float(f(x))
    if fx == 0.0:
        return x, True
    for _ in range(60):
        d = float(fprime(x))
        xn = x - fx / d if d != 0.0 else 0.5 * (lo + hi)
        if not lo <= xn <= hi or xn == x:
            xn = 0.5 * (lo + hi)
        fxn = float(f(xn))
        if fxn == 0.0:
            return xn, True
        if (flo < 0.0) != (fxn < 0.0):
            hi, fhi = xn, fxn
        else:
            lo, flo = xn, fxn
        if abs(xn - x) < xtol:
            return xn, True
        x, fx = xn, fxn
        if hi - lo < xtol:
            return 0.5 * (lo + hi), True
    return x, False


def _subdivide(f, fprime, lo, hi, thr, depth, opts, xtol, locations, flags):
    xs = np.linspace(lo, hi, opts.subdivision_points + 1)
    vs = _eval_grid(f, xs)
    found = False
    for i in range(len(xs) - 1):
        if vs[i] * vs[i + 1] < 0.0:
            root, ok = _refine_bracket(f, fprime, xs[i], xs[i + 1], vs[i], vs[i + 1], xtol)
            if ok:
                locations.append(root)
            else:
                flags.add(ZeroFlag.REFINEMENT_FAILED)
            found = True
    for i in range(1, len(xs) - 1):
        if vs[i] == 0.0 and vs[i - 1] * vs[i + 1] < 0.0:
            locations.append(float(xs[i]))
            found = True
    if found:
        return
    absv = np.abs(vs)
    j = int(np.argmin(absv))
    if absv[j] >= thr:
        return
    if depth >= opts.subdivision_levels:
        flags.add(ZeroFlag.NEAR_TANGENCY)
        return
    lo2 = float(xs[max(j - 1, 0)])
    hi2 = float(xs[min(j + 1, len(xs) - 1)])
    _subdivide(f, fprime, lo2, hi2, thr, depth + 1, opts, xtol, locations, flags)


def count_zeros_window(
    f: Callable,
    fprime: Callable,
    a: float,
    b: float,
    opts: Optional[ScanOptions] = None,
) -> ZeroReport:
    """Count and localize the zeros of f on [a, b].

    ``f`` and ``fprime`` may be scalar callables or support numpy-array
    arguments (preferred; the scan then costs a single vectorized call).
    Raises DegenerateInput when max |f| on the grid falls below 1e-30.
    """
    if opts is None:
        opts = ScanOptions()
    if not a < b:
        raise ValueError("window requires a < b")
    M = opts.grid_points
    xtol = opts.refine_tol if opts.refine_tol is not None else 1e-12 * (b - a)
    xs = np.linspace(a, b, M + 1)
    vs = _eval_grid(f, xs)
    maxabs = float(np.max(np.abs(vs)))
    if maxabs < 1e-30:
        raise DegenerateInput("function is numerically zero on the scan grid")
    thr = opts.tangency_rel * maxabs

    flags = set()
    locations = []

    if vs[0] == 0.0:
        locations.append(float(a))
        flags.add(ZeroFlag.ENDPOINT_ZERO)
    if vs[M] == 0.0:
        locations.append(float(b))
        flags.add(ZeroFlag.ENDPOINT_ZERO)
    for i in np.nonzero(vs[1:M] == 0.0)[0] + 1:
        if vs[i - 1] * vs[i + 1] < 0.0:
            locations.append(float(xs[i]))

    prod = vs[:-1] * vs[1:]
    for i in np.nonzero(prod < 0.0)[0]:
        root, ok = _refine_bracket(
            f, fprime, float(xs[i]), float(xs[i + 1]), float(vs[i]), float(vs[i + 1]), xtol
        )
        if ok:
            locations.append(root)
        else:
            flags.add(ZeroFlag.REFINEMENT_FAILED)

    # hidden-pair candidates: interior local minima of |f| under the tangency
    # threshold with no sign change through either adjacent cell
    absv = np.abs(vs)
    inner = absv[1:M]
    candidate = (
        (inner < thr)
        & (inner <= absv[:M - 1])
        & (inner <= absv[2:])
        & ~((prod[:M - 1] < 0.0) | (prod[1:] < 0.0))
    )
    dips = 0
    for i in np.nonzero(candidate)[0] + 1:
        if vs[i] == 0.0 and vs[i - 1] * vs[i + 1] < 0.0:
            continue
        if dips >= opts.max_dip_windows:
            flags.add(ZeroFlag.NEAR_TANGENCY)
            break
        dips += 1
        _subdivide(
            f, fprime, float(xs[i - 1]), float(xs[i + 1]), thr, 1, opts, xtol, locations, flags
        )

    locations.sort()
    merged = []
    for x in locations:
        if merged and x - merged[-1] < xtol:
            continue
        merged.append(min(max(x, a), b))
    return ZeroReport(count=len(merged), locations=np.array(merged), flags=frozenset(flags))


def joint_counts(
    f: Callable,
    fprime: Callable,
    partition: Sequence[tuple],
    opts: Optional[ScanOptions] = None,
) -> np.ndarray:
    """Per-interval zero counts over a disjoint interval family."""
    ordered = sorted(partition)
    for (a1, b1), (a2, b2) in zip(ordered, ordered[1:]):
        if b1 > a2:
            raise ValueError("partition intervals must be disjoint")
    counts = [count_zeros_window(f, fprime, a, b, opts).count for a, b in partition]
    return np.array(counts, dtype=np.int64)

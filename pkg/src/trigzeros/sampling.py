"""Coefficient ensembles and their normalizing sequences.

Three coefficient models are implemented:

* ``FiniteVariance``: i.i.d. pairs with prescribed covariance matrix
  [[sigma1_sq, rho], [rho, sigma2_sq]], built from standardized marginals
  (gaussian, rademacher, uniform or centered exponential) pushed through the
  symmetric 2x2 matrix square root of the covariance.
* ``ExactStable``: exactly alpha-stable pairs with a symmetric discrete
  spectral measure on the unit circle, simulated atom by atom with the
  Chambers-Mallows-Stuck generator.
* ``ParetoTail``: heavy-tailed pairs with independent symmetric components,
  P(|xi| > x) = min(1, c x^-alpha), which lie in the strict domain of
  attraction of a four-atom stable law.

Spectral-measure convention
---------------------------
Atoms ``(phi_j, w_j)`` always parameterize the characteristic function
exponent: a stable vector with atoms A satisfies

    log E exp(i <theta, X>) = - sum_j w_j |<theta, u_j>|^alpha,
    u_j = (cos phi_j, sin phi_j).

With this convention the atom pair {(0, 1/2), (pi, 1/2)} is exactly the
standard symmetric alpha-stable law on the first coordinate, and the
normalization for ParetoTail models works out to four equal atoms of weight
1/4 when b_n = (c' n)^{1/alpha} with c' = alpha * c * I_alpha, where
I_alpha = integral over R of (1 - cos u) |u|^{-1-alpha} du.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Union

import numpy as np

TWO_PI = 2.0 * math.pi

FINITE_VARIANCE_FAMILIES = ("gaussian", "rademacher", "uniform", "centered_exponential")

ISOTROPIC_ATOM_COUNT = 64


class InvalidModel(ValueError):
    """Raised when model parameters violate a construction invariant."""


def sym_sqrt_2x2(sigma1_sq: float, sigma2_sq: float, rho: float) -> np.ndarray:
    """Symmetric PSD square root of [[sigma1_sq, rho], [rho, sigma2_sq]].

    Uses the closed form sqrt(A) = (A + sqrt(det A) I) / sqrt(tr A + 2 sqrt(det A)),
    valid for any 2x2 symmetric PSD matrix with positive trace.
    """
    tau = sigma1_sq + sigma2_sq
    det = sigma1_sq * sigma2_sq - rho * rho
    if tau <= 0:
        raise InvalidModel("covariance matrix must have positive trace")
    s = math.sqrt(max(det, 0.0))
    t = math.sqrt(tau + 2.0 * s)
    return np.array([[sigma1_sq + s, rho], [rho, sigma2_sq + s]]) / t


def stable_one_sided_integral(alpha: float) -> float:
    """J_alpha = int_0^inf (1 - cos u) u^{-1-alpha} du for alpha in (0, 2)."""
    if not 0.0 < alpha < 2.0:
        raise ValueError("alpha must lie in (0, 2)")
    if abs(alpha - 1.0) < 1e-12:
        return math.pi / 2.0
    return math.gamma(2.0 - alpha) * math.cos(math.pi * alpha / 2.0) / (alpha * (1.0 - alpha))


def isotropic_atoms(total_weight: float = 1.0, count: int = ISOTROPIC_ATOM_COUNT):
    """Uniform atom set approximating an isotropic spectral measure."""
    if count < 2 or count % 2:
        raise ValueError("atom count must be even and >= 2")
    w = total_weight / count
    return tuple((TWO_PI * j / count, w) for j in range(count))


def _circular_dist(a: float, b: float) -> float:
    return abs((a - b + math.pi) % TWO_PI - math.pi)


def _check_symmetric_atoms(atoms, tol=1e-9):
    for angle, weight in atoms:
        target = angle + math.pi
        matched = sum(w for a, w in atoms if _circular_dist(a, target) < tol)
        if abs(matched - weight) > tol * max(1.0, weight):
            raise InvalidModel(
                "spectral atoms must be symmetric: every atom needs a partner at "
                "angle + pi with equal weight"
            )


@dataclass(frozen=True)
class FiniteVariance:
    family: str = "gaussian"
    sigma1_sq: float = 1.0
    sigma2_sq: float = 1.0
    rho: float = 0.0

    def __post_init__(self):
        if self.family not in FINITE_VARIANCE_FAMILIES:
            raise InvalidModel(f"unknown marginal family {self.family!r}")
        if self.sigma1_sq < 0 or self.sigma2_sq < 0:
            raise InvalidModel("variances must be nonnegative")
        if self.sigma1_sq + self.sigma2_sq <= 0:
            raise InvalidModel("sigma1_sq + sigma2_sq must be positive")
        if self.rho * self.rho > self.sigma1_sq * self.sigma2_sq * (1 + 1e-12):
            raise InvalidModel("|rho| must not exceed sqrt(sigma1_sq * sigma2_sq)")

    @property
    def is_unit(self) -> bool:
        return self.sigma1_sq == 1.0 and self.sigma2_sq == 1.0 and self.rho == 0.0


@dataclass(frozen=True)
class ExactStable:
    alpha: float
    atoms: tuple = field(default_factory=lambda: isotropic_atoms())

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise InvalidModel("alpha must lie strictly inside (0, 2)")
        atoms = tuple((float(a), float(w)) for a, w in self.atoms)
        object.__setattr__(self, "atoms", atoms)
        if not atoms or any(w <= 0 for _, w in atoms):
            raise InvalidModel("spectral atoms need positive weights")
        _check_symmetric_atoms(atoms)

    @property
    def total_weight(self) -> float:
        return sum(w for _, w in self.atoms)


@dataclass(frozen=True)
class ParetoTail:
    alpha: float
    tail_constant: float = 1.0

    def __post_init__(self):
        if not 0.0 < self.alpha < 2.0:
            raise InvalidModel("alpha must lie strictly inside (0, 2)")
        if self.tail_constant <= 0:
            raise InvalidModel("tail constant must be positive")

    @property
    def bn_constant(self) -> float:
        """c' in b_n = (c' n)^{1/alpha}; makes the limit atoms equal to 1/4."""
        return 2.0 * self.alpha * self.tail_constant * stable_one_sided_integral(self.alpha)


CoefficientModel = Union[FiniteVariance, ExactStable, ParetoTail]


@dataclass(frozen=True)
class LevyMeasureSpec:
    alpha: float
    atoms: tuple  # (angle, weight) in the characteristic-function convention


@dataclass(frozen=True, eq=False)
class CoefficientPairs:
    n: int
    xi: np.ndarray
    eta: np.ndarray
    model_id: CoefficientModel
    seed_path: str = "adhoc"

    def __post_init__(self):
        if self.n < 1 or self.xi.shape != (self.n,) or self.eta.shape != (self.n,):
            raise ValueError("xi and eta must both have length n >= 1")


def cms_stable(alpha: float, size, rng: np.random.Generator) -> np.ndarray:
    """Standard symmetric alpha-stable variates, cf exp(-|a|^alpha).

    Chambers-Mallows-Stuck form; at alpha = 1 the second factor degenerates to
    1 and the formula reduces to tan(V), the standard Cauchy.
    """
    v = rng.uniform(-math.pi / 2.0, math.pi / 2.0, size)
    w = rng.standard_exponential(size)
    w = np.maximum(w, 1e-300)
    if abs(alpha - 1.0) < 1e-12:
        return np.tan(v)
    cv = np.cos(v)
    out = np.sin(alpha * v) / cv ** (1.0 / alpha)
    out *= (np.cos((1.0 - alpha) * v) / w) ** ((1.0 - alpha) / alpha)
    return out


def _standardized_marginals(family: str, n: int, rng: np.random.Generator) -> np.ndarray:
    if family == "gaussian":
        return rng.standard_normal((2, n))
    if family == "rademacher":
        return rng.integers(0, 2, size=(2, n)).astype(np.float64) * 2.0 - 1.0
    if family == "uniform":
        half = math.sqrt(3.0)
        return rng.uniform(-half, half, size=(2, n))
    if family == "centered_exponential":
        return rng.standard_exponential((2, n)) - 1.0
    raise InvalidModel(f"unknown marginal family {family!r}")


def draw_coefficients(
    model: CoefficientModel,
    n: int,
    stream: np.random.Generator,
    seed_path: str = "adhoc",
) -> CoefficientPairs:
    """Draw n i.i.d. coefficient pairs (xi_k, eta_k) from the model."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(model, FiniteVariance):
        z = _standardized_marginals(model.family, n, stream)
        root = sym_sqrt_2x2(model.sigma1_sq, model.sigma2_sq, model.rho)
        xi = root[0, 0] * z[0] + root[0, 1] * z[1]
        eta = root[1, 0] * z[0] + root[1, 1] * z[1]
    elif isinstance(model, ExactStable):
        angles = np.array([a for a, _ in model.atoms])
        scales = np.array([w for _, w in model.atoms]) ** (1.0 / model.alpha)
        s = cms_stable(model.alpha, (n, len(model.atoms)), stream)
        xi = s @ (scales * np.cos(angles))
        eta = s @ (scales * np.sin(angles))
    elif isinstance(model, ParetoTail):
        u = stream.uniform(0.0, 1.0, size=(2, n))
        u = np.maximum(u, 1e-300)
        mag = (model.tail_constant / u) ** (1.0 / model.alpha)
        sign = stream.integers(0, 2, size=(2, n)).astype(np.float64) * 2.0 - 1.0
        xi = sign[0] * mag[0]
        eta = sign[1] * mag[1]
    else:
        raise TypeError(f"unknown coefficient model {type(model).__name__}")
    return CoefficientPairs(
        n=n,
        xi=np.ascontiguousarray(xi, dtype=np.float64),
        eta=np.ascontiguousarray(eta, dtype=np.float64),
        model_id=model,
        seed_path=seed_path,
    )


def normalizer(model: CoefficientModel, n: int) -> float:
    """Normalizing sequence: sqrt(n), n^{1/alpha}, or (c' n)^{1/alpha}."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if isinstance(model, FiniteVariance):
        return math.sqrt(n)
    if isinstance(model, ExactStable):
        return n ** (1.0 / model.alpha)
    if isinstance(model, ParetoTail):
        return (model.bn_constant * n) ** (1.0 / model.alpha)
    raise TypeError(f"unknown coefficient model {type(model).__name__}")


def limit_levy_measure(model: CoefficientModel) -> LevyMeasureSpec:
    """Spectral description of the limiting stable law's Levy measure.

    ExactStable models are fixed points (their own atoms).  For ParetoTail the
    independence and symmetry of the components concentrate the limit measure
    on the four half-axes; the b_n constant is chosen so each atom carries
    weight 1/4.
    """
    if isinstance(model, ExactStable):
        return LevyMeasureSpec(alpha=model.alpha, atoms=model.atoms)
    if isinstance(model, ParetoTail):
        atoms = tuple((k * math.pi / 2.0, 0.25) for k in range(4))
        return LevyMeasureSpec(alpha=model.alpha, atoms=atoms)
    raise InvalidModel("limit Levy measure is only defined for stable-regime models")


def ray_tail_mass(spec: LevyMeasureSpec, angle: float, tol: float = 1e-9) -> float:
    """Radial Levy tail mass m with nu({r u_angle : r > lam}) = m lam^-alpha.

    Converts a cf-convention atom weight w into the Levy-measure normalization,
    m = w / (alpha * J_alpha).  Used to match empirical n P[b_n^-1 (xi, eta) in .]
    against the vague limit.
    """
    j = stable_one_sided_integral(spec.alpha)
    mass = 0.0
    for a, w in spec.atoms:
        if abs((a - angle + math.pi) % TWO_PI - math.pi) < tol:
            mass += w / (spec.alpha * j)
    return mass

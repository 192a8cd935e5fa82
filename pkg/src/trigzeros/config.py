"""Experiment configuration: INI parsing, validation, and round-trip output.

Config files are flat key/value text with sections [model], [window], [limit],
[scan], [run].  Unknown sections or keys are errors.  The window center can be
given as a decimal (``s``) or as an exact fraction of pi (``s_pi = p/q``); the
exact form is what drives the arithmetic dichotomies, so prefer it whenever
the center is meant to be rational.
"""

from __future__ import annotations

import configparser
import io
from dataclasses import dataclass
from fractions import Fraction

from .rootfind import CenterRule, ScanOptions, WindowSpec
from .sampling import (
    CoefficientModel,
    ExactStable,
    FiniteVariance,
    ParetoTail,
    isotropic_atoms,
)


class ConfigError(ValueError):
    pass


_ALLOWED_KEYS = {
    "model": {"variant", "family", "sigma1_sq", "sigma2_sq", "rho", "alpha", "atoms",
              "tail_constant"},
    "window": {"s", "s_pi", "rule", "rate", "a", "b", "degree"},
    "limit": {"variant", "cardinal_cutoff", "steps"},
    "scan": {"grid_points", "refine_tol", "tangency_rel", "subdivision_levels"},
    "run": {"experiment_id", "replicas", "master_seed", "workers", "outputs"},
}

_LIMIT_VARIANTS = ("auto", "Z", "G_generic", "G_lattice", "Znu")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment_id: str
    model: CoefficientModel
    window: WindowSpec
    replicas: int
    master_seed: int
    scan: ScanOptions = ScanOptions()
    limit_variant: str = "auto"
    cardinal_cutoff: int = 512
    steps: int = 2048
    workers: int = 1
    outputs: tuple = ("json",)

    def __post_init__(self):
        if self.replicas < 1:
            raise ConfigError("replicas must be >= 1")
        if self.workers < 1:
            raise ConfigError("workers must be >= 1")
        if self.limit_variant not in _LIMIT_VARIANTS:
            raise ConfigError(f"unknown limit variant {self.limit_variant!r}")
        bad = set(self.outputs) - {"json", "csv"}
        if bad:
            raise ConfigError(f"unknown output formats: {sorted(bad)}")


def _parse_atoms(text: str):
    text = text.strip()
    if text.startswith("isotropic"):
        parts = text.split(":")
        count = int(parts[1]) if len(parts) > 1 else 64
        total = float(parts[2]) if len(parts) > 2 else 1.0
        return isotropic_atoms(total_weight=total, count=count)
    atoms = []
    for chunk in text.split(","):
        angle, weight = chunk.strip().split(":")
        atoms.append((float(angle), float(weight)))
    return tuple(atoms)


def _parse_model(section) -> CoefficientModel:
    variant = section.get("variant", "finite_variance")
    if variant == "finite_variance":
        return FiniteVariance(
            family=section.get("family", "gaussian"),
            sigma1_sq=float(section.get("sigma1_sq", "1.0")),
            sigma2_sq=float(section.get("sigma2_sq", "1.0")),
            rho=float(section.get("rho", "0.0")),
        )
    if variant == "exact_stable":
        if "alpha" not in section:
            raise ConfigError("exact_stable model requires alpha")
        return ExactStable(
            alpha=float(section["alpha"]),
            atoms=_parse_atoms(section.get("atoms", "isotropic:64")),
        )
    if variant == "pareto_tail":
        if "alpha" not in section:
            raise ConfigError("pareto_tail model requires alpha")
        return ParetoTail(
            alpha=float(section["alpha"]),
            tail_constant=float(section.get("tail_constant", "1.0")),
        )
    raise ConfigError(f"unknown model variant {variant!r}")


def _parse_window(section) -> WindowSpec:
    if "s" in section and "s_pi" in section:
        raise ConfigError("give the window center as s or s_pi, not both")
    s_pi = None
    s = 0.0
    if "s_pi" in section:
        num, _, den = section["s_pi"].partition("/")
        s_pi = Fraction(int(num), int(den) if den else 1)
    elif "s" in section:
        s = float(section["s"])
    else:
        raise ConfigError("window requires a center (s or s_pi)")
    rule = section.get("rule", "fixed")
    center = CenterRule(kind=rule, s=s, s_pi=s_pi, rate=float(section.get("rate", "1.0")))
    try:
        return WindowSpec(
            center=center,
            a=float(section["a"]),
            b=float(section["b"]),
            n=int(section["degree"]),
        )
    except KeyError as exc:
        raise ConfigError(f"window requires key {exc.args[0]!r}") from None


def _parse_scan(section) -> ScanOptions:
    refine = section.get("refine_tol", "").strip()
    return ScanOptions(
        grid_points=int(section.get("grid_points", "2048")),
        refine_tol=float(refine) if refine else None,
        tangency_rel=float(section.get("tangency_rel", "0.01")),
        subdivision_levels=int(section.get("subdivision_levels", "3")),
    )


def parse_config(text: str) -> ExperimentConfig:
    parser = configparser.ConfigParser()
    parser.read_string(text)
    for name in parser.sections():
        if name not in _ALLOWED_KEYS:
            raise ConfigError(f"unknown config section [{name}]")
        unknown = set(parser[name]) - _ALLOWED_KEYS[name]
        if unknown:
            raise ConfigError(f"unknown keys in [{name}]: {sorted(unknown)}")
    for required in ("model", "window", "run"):
        if required not in parser:
            raise ConfigError(f"missing config section [{required}]")

    run = parser["run"]
    for key in ("experiment_id", "replicas", "master_seed"):
        if key not in run:
            raise ConfigError(f"[run] requires key {key!r}")
    limit = parser["limit"] if "limit" in parser else {}
    scan = _parse_scan(parser["scan"]) if "scan" in parser else ScanOptions()
    outputs = tuple(
        tok.strip() for tok in run.get("outputs", "json").split(",") if tok.strip()
    )
    return ExperimentConfig(
        experiment_id=run["experiment_id"],
        model=_parse_model(parser["model"]),
        window=_parse_window(parser["window"]),
        replicas=int(run["replicas"]),
        master_seed=int(run["master_seed"]),
        scan=scan,
        limit_variant=limit.get("variant", "auto") if limit else "auto",
        cardinal_cutoff=int(limit.get("cardinal_cutoff", "512")) if limit else 512,
        steps=int(limit.get("steps", "2048")) if limit else 2048,
        workers=int(run.get("workers", "1")),
        outputs=outputs,
    )


def load_config(path) -> ExperimentConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


def _model_lines(model: CoefficientModel):
    if isinstance(model, FiniteVariance):
        return [
            "variant = finite_variance",
            f"family = {model.family}",
            f"sigma1_sq = {model.sigma1_sq!r}",
            f"sigma2_sq = {model.sigma2_sq!r}",
            f"rho = {model.rho!r}",
        ]
    if isinstance(model, ExactStable):
        atoms = ", ".join(f"{a!r}:{w!r}" for a, w in model.atoms)
        return [f"variant = exact_stable", f"alpha = {model.alpha!r}", f"atoms = {atoms}"]
    return [
        "variant = pareto_tail",
        f"alpha = {model.alpha!r}",
        f"tail_constant = {model.tail_constant!r}",
    ]


def config_to_ini(cfg: ExperimentConfig) -> str:
    w = cfg.window
    out = io.StringIO()
    out.write("[model]\n")
    out.write("\n".join(_model_lines(cfg.model)) + "\n")
    out.write("\n[window]\n")
    if w.center.s_pi is not None:
        out.write(f"s_pi = {w.center.s_pi.numerator}/{w.center.s_pi.denominator}\n")
    else:
        out.write(f"s = {w.center.s!r}\n")
    out.write(f"rule = {w.center.kind}\n")
    out.write(f"rate = {w.center.rate!r}\n")
    out.write(f"a = {w.a!r}\nb = {w.b!r}\ndegree = {w.n}\n")
    out.write("\n[limit]\n")
    out.write(f"variant = {cfg.limit_variant}\n")
    out.write(f"cardinal_cutoff = {cfg.cardinal_cutoff}\n")
    out.write(f"steps = {cfg.steps}\n")
    out.write("\n[scan]\n")
    out.write(f"grid_points = {cfg.scan.grid_points}\n")
    refine = "" if cfg.scan.refine_tol is None else repr(cfg.scan.refine_tol)
    out.write(f"refine_tol = {refine}\n")
    out.write(f"tangency_rel = {cfg.scan.tangency_rel!r}\n")
    out.write(f"subdivision_levels = {cfg.scan.subdivision_levels}\n")
    out.write("\n[run]\n")
    out.write(f"experiment_id = {cfg.experiment_id}\n")
    out.write(f"replicas = {cfg.replicas}\n")
    out.write(f"master_seed = {cfg.master_seed}\n")
    out.write(f"workers = {cfg.workers}\n")
    out.write(f"outputs = {','.join(cfg.outputs)}\n")
    return out.getvalue()


def config_to_dict(cfg: ExperimentConfig) -> dict:
    """JSON-ready echo of the configuration (exact center kept as a string)."""
    model = cfg.model
    if isinstance(model, FiniteVariance):
        model_d = {
            "variant": "finite_variance",
            "family": model.family,
            "sigma1_sq": model.sigma1_sq,
            "sigma2_sq": model.sigma2_sq,
            "rho": model.rho,
        }
    elif isinstance(model, ExactStable):
        model_d = {
            "variant": "exact_stable",
            "alpha": model.alpha,
            "atoms": [[a, w] for a, w in model.atoms],
        }
    else:
        model_d = {
            "variant": "pareto_tail",
            "alpha": model.alpha,
            "tail_constant": model.tail_constant,
        }
    c = cfg.window.center
    return {
        "experiment_id": cfg.experiment_id,
        "model": model_d,
        "window": {
            "rule": c.kind,
            "s": c.s,
            "s_pi": None if c.s_pi is None else f"{c.s_pi.numerator}/{c.s_pi.denominator}",
            "rate": c.rate,
            "a": cfg.window.a,
            "b": cfg.window.b,
            "degree": cfg.window.n,
        },
        "limit": {
            "variant": cfg.limit_variant,
            "cardinal_cutoff": cfg.cardinal_cutoff,
            "steps": cfg.steps,
        },
        "scan": {
            "grid_points": cfg.scan.grid_points,
            "refine_tol": cfg.scan.refine_tol,
            "tangency_rel": cfg.scan.tangency_rel,
            "subdivision_levels": cfg.scan.subdivision_levels,
        },
        "replicas": cfg.replicas,
        "master_seed": cfg.master_seed,
        "workers": cfg.workers,
        "outputs": list(cfg.outputs),
    }

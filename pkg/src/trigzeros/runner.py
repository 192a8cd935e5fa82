"""Experiment orchestration: replica fan-out, aggregation, persistence.

``run_experiment`` drives one full comparison: for every replica it draws a
coefficient vector from its own counter-based stream, counts the zeros of the
window-scaled polynomial, independently samples a limit path from a second
stream, counts its zeros on the same interval, and aggregates both count
sequences into empirical pmfs with a comparison verdict.  Replica results are
collected by index, so the outcome is a pure function of the configuration
regardless of the worker count.  Replicas whose refinement failed are
discarded (and tallied); the run aborts if more than 1% are discarded.
"""

from __future__ import annotations

import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .analysis import ComparisonVerdict, CountDistribution, compare_distributions
from .config import ExperimentConfig, config_to_dict
from .limitproc import (
    CenterClass,
    LimitSpec,
    classify_two_pi_rational,
    sample_limit_path,
    tilt_levy_measure,
)
from .rootfind import ZeroFlag, count_zeros_window
from .sampling import (
    FiniteVariance,
    draw_coefficients,
    limit_levy_measure,
    normalizer,
)
from .streams import coefficient_stream, limit_stream, seed_path
from .trigpoly import ScaledEvaluator, TrigPolynomial, exact_pair_covariance
from .analysis import weyl_limit, weyl_sigma_alpha, equidistribution_ks


@dataclass(frozen=True)
class RunResult:
    config: ExperimentConfig
    poly_distribution: CountDistribution
    limit_distribution: CountDistribution
    verdict: ComparisonVerdict
    flag_tallies: dict
    wall_time: float

    def to_json_dict(self, include_timing: bool = True) -> dict:
        pmf_p = [[k, self.poly_distribution.pmf[k]] for k in self.poly_distribution.support()]
        pmf_l = [[k, self.limit_distribution.pmf[k]] for k in self.limit_distribution.support()]
        out = {
            "config": config_to_dict(self.config),
            "poly_pmf": pmf_p,
            "limit_pmf": pmf_l,
            "verdict": {
                "tv": self.verdict.tv,
                "chi2_stat": self.verdict.chi2_stat,
                "chi2_pvalue": self.verdict.chi2_pvalue,
                "mean_diff": self.verdict.mean_diff,
                "mean_ci_halfwidth": self.verdict.mean_ci_halfwidth,
            },
            "flags": dict(self.flag_tallies),
            "n_samples": self.poly_distribution.n_samples,
        }
        if include_timing:
            out["timing"] = {"wall_time": self.wall_time}
        return out

    def canonical_json(self) -> str:
        """Deterministic serialization; excludes the volatile timing field."""
        return json.dumps(self.to_json_dict(include_timing=False), sort_keys=True)


def resolve_limit_spec(cfg: ExperimentConfig) -> LimitSpec:
    """Pick the limit process implied by model and window (or honor an
    explicitly configured variant).

    Finite variance with unit covariance goes to Z for any window rule; other
    finite-variance models split into the generic/lattice Gaussian process by
    the center's relation to pi*Z.  Stable models tilt their Levy measure by
    the center's 2*pi-rational class.
    """
    center = cfg.window.center
    model = cfg.model
    K, m = cfg.cardinal_cutoff, cfg.steps
    variant = cfg.limit_variant

    if variant == "auto":
        if isinstance(model, FiniteVariance):
            if model.is_unit:
                variant = "Z"
            else:
                variant = "G_lattice" if center.is_lattice_regime() else "G_generic"
        else:
            variant = "Znu"

    if variant == "Z":
        return LimitSpec(variant="Z", cardinal_cutoff=K, steps=m)
    if variant in ("G_generic", "G_lattice"):
        if not isinstance(model, FiniteVariance):
            raise ValueError("G limits require a finite-variance model")
        return LimitSpec(
            variant=variant,
            sigma1_sq=model.sigma1_sq,
            sigma2_sq=model.sigma2_sq,
            rho=model.rho,
            cardinal_cutoff=K,
            steps=m,
        )
    base = limit_levy_measure(model)
    if center.kind == "escape":
        # escape sequences leave every rational class; tilt isotropically
        s_class = CenterClass("irrational")
    else:
        frac = center.two_pi_fraction()
        s_class = classify_two_pi_rational(frac if frac is not None else center.base())
    tilted = tilt_levy_measure(base.atoms, s_class)
    return LimitSpec(
        variant="Znu", alpha=base.alpha, atoms=tilted, cardinal_cutoff=K, steps=m
    )


def _replica(cfg, lim_spec, s_n, norm, index):
    rng_c = coefficient_stream(cfg.master_seed, index)
    pairs = draw_coefficients(
        cfg.model, cfg.window.n, rng_c, seed_path(cfg.master_seed, index, 0)
    )
    ev = ScaledEvaluator(TrigPolynomial(pairs.xi, pairs.eta), s_n, norm)
    rep_p = count_zeros_window(ev, ev.derivative, cfg.window.a, cfg.window.b, cfg.scan)
    rng_l = limit_stream(cfg.master_seed, index)
    path = sample_limit_path(lim_spec, rng_l, seed_path(cfg.master_seed, index, 1))
    rep_l = count_zeros_window(path, path.derivative, cfg.window.a, cfg.window.b, cfg.scan)
    return rep_p, rep_l


def run_experiment(cfg: ExperimentConfig, workers: int = None) -> RunResult:
    start = time.perf_counter()
    workers = workers if workers is not None else cfg.workers
    lim_spec = resolve_limit_spec(cfg)
    s_n = cfg.window.s_n()
    norm = normalizer(cfg.model, cfg.window.n)
    R = cfg.replicas

    poly_counts = np.zeros(R, dtype=np.int64)
    limit_counts = np.zeros(R, dtype=np.int64)
    failed = np.zeros(R, dtype=bool)
    tallies = {
        "poly_near_tangency": 0,
        "limit_near_tangency": 0,
        "poly_endpoint_zero": 0,
        "limit_endpoint_zero": 0,
        "refinement_failed": 0,
        "discarded": 0,
    }

    def process(indices):
        local = dict.fromkeys(tallies, 0)
        for i in indices:
            rep_p, rep_l = _replica(cfg, lim_spec, s_n, norm, i)
            poly_counts[i] = rep_p.count
            limit_counts[i] = rep_l.count
            bad = (ZeroFlag.REFINEMENT_FAILED in rep_p.flags
                   or ZeroFlag.REFINEMENT_FAILED in rep_l.flags)
            failed[i] = bad
            local["refinement_failed"] += int(bad)
            local["poly_near_tangency"] += int(ZeroFlag.NEAR_TANGENCY in rep_p.flags)
            local["limit_near_tangency"] += int(ZeroFlag.NEAR_TANGENCY in rep_l.flags)
            local["poly_endpoint_zero"] += int(ZeroFlag.ENDPOINT_ZERO in rep_p.flags)
            local["limit_endpoint_zero"] += int(ZeroFlag.ENDPOINT_ZERO in rep_l.flags)
        return local

    if workers <= 1:
        locals_ = [process(range(R))]
    else:
        chunks = [range(w, R, workers) for w in range(workers)]
        with ThreadPoolExecutor(max_workers=workers) as pool:
            locals_ = list(pool.map(process, chunks))
    for local in locals_:
        for k, v in local.items():
            tallies[k] += v

    kept = ~failed
    n_discard = int(failed.sum())
    tallies["discarded"] = n_discard
    if n_discard > 0.01 * R:
        raise RuntimeError(
            f"aborting: {n_discard}/{R} replicas discarded for refinement failures"
        )
    if not kept.any():
        raise RuntimeError("all replicas discarded")

    prov = (cfg.experiment_id, cfg.master_seed)
    poly_dist = CountDistribution.from_counts(poly_counts[kept], provenance=prov + ("poly",))
    limit_dist = CountDistribution.from_counts(limit_counts[kept], provenance=prov + ("limit",))
    verdict = compare_distributions(poly_dist, limit_dist)
    return RunResult(
        config=cfg,
        poly_distribution=poly_dist,
        limit_distribution=limit_dist,
        verdict=verdict,
        flag_tallies=tallies,
        wall_time=time.perf_counter() - start,
    )


def run_covariance_table(sigma1_sq, sigma2_sq, rho, s, pairs, n_ladder):
    """Deterministic finite-n covariance against the closed-form limit.

    Rows of (n, t1, t2, exact, limit, abs error) for every (t1, t2) pair and
    every ladder degree.  The limit uses the lattice form when s sits on
    pi*Z and the generic form otherwise.
    """
    lattice = abs(s - math.pi * round(s / math.pi)) < 1e-12
    variant = "G_lattice" if lattice else "G_generic"
    from .limitproc import limit_covariance

    spec = LimitSpec(variant=variant, sigma1_sq=sigma1_sq, sigma2_sq=sigma2_sq, rho=rho)
    rows = []
    for n in n_ladder:
        for t1, t2 in pairs:
            exact = exact_pair_covariance(sigma1_sq, sigma2_sq, rho, n, s, t1, t2)
            lim = limit_covariance(spec, t1, t2)
            rows.append(
                {
                    "n": n,
                    "t1": t1,
                    "t2": t2,
                    "exact": exact,
                    "limit": lim,
                    "abs_error": abs(exact - lim),
                }
            )
    return rows


def run_weyl_report(s_values, alphas, n_ladder):
    """sigma_n^alpha / n against its Weyl limit, plus equidistribution KS."""
    rows = []
    for s in s_values:
        cls = classify_two_pi_rational(s if isinstance(s, Fraction) else float(s))
        s_float = float(s) * 2.0 * math.pi if isinstance(s, Fraction) else float(s)
        limit_class = "irrational" if cls.kind == "irrational" else cls.q
        for alpha in alphas:
            lim = weyl_limit(limit_class, alpha)
            for n in n_ladder:
                rows.append(
                    {
                        "s": s_float,
                        "s_class": "irrational" if cls.kind == "irrational" else f"q={cls.q}",
                        "alpha": alpha,
                        "n": n,
                        "sigma_alpha": weyl_sigma_alpha(n, s_float, alpha),
                        "limit": lim,
                        "ks_distance": equidistribution_ks(n, s_float),
                    }
                )
    return rows


def save_result(result: RunResult, path, fmt: str = "json") -> None:
    if fmt == "json":
        with open(path, "w", encoding="utf-8") as fh:
            json.dump(result.to_json_dict(), fh, indent=2, sort_keys=True)
            fh.write("\n")
        return
    if fmt == "csv":
        keys = sorted(set(result.poly_distribution.pmf) | set(result.limit_distribution.pmf))
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("k,poly_prob,limit_prob\n")
            for k in keys:
                p = result.poly_distribution.pmf.get(k, 0.0)
                q = result.limit_distribution.pmf.get(k, 0.0)
                fh.write(f"{k},{p!r},{q!r}\n")
        return
    raise ValueError(f"unknown output format {fmt!r}")


def load_result_dict(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)

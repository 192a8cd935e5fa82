"""Command-line interface.

Subcommands: ``simulate`` (run one experiment from a config file),
``covariance`` (deterministic finite-n covariance table), ``weyl``
(equidistribution report), ``compare`` (verdict between two stored results)
and ``show`` (pretty-print a stored result).
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from fractions import Fraction

from .analysis import CountDistribution, compare_distributions
from .config import load_config
from .runner import (
    load_result_dict,
    run_covariance_table,
    run_experiment,
    run_weyl_report,
    save_result,
)
from .sampling import FiniteVariance


def _parse_center_token(tok: str):
    """A center given as a decimal or as 'pi*p/q'."""
    tok = tok.strip()
    if tok.startswith("pi*"):
        num, _, den = tok[3:].partition("/")
        frac = Fraction(int(num), int(den) if den else 1)
        return Fraction(frac, 2)  # s/(2 pi)
    return float(tok)


def _parse_pairs(text: str):
    pairs = []
    for chunk in text.split(","):
        t1, t2 = chunk.strip().split(":")
        pairs.append((float(t1), float(t2)))
    return pairs


def _parse_floats(text: str):
    return [float(tok) for tok in text.split(",") if tok.strip()]


def _parse_ints(text: str):
    return [int(tok) for tok in text.split(",") if tok.strip()]


def _write_rows(rows, out, fmt):
    if fmt == "json":
        payload = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    else:
        cols = list(rows[0].keys())
        lines = [",".join(cols)]
        for row in rows:
            lines.append(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c])
                                   for c in cols))
        payload = "\n".join(lines) + "\n"
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(payload)
    else:
        sys.stdout.write(payload)


def _dist_from_pmf_rows(rows, n_samples):
    pmf = {int(k): float(p) for k, p in rows}
    return CountDistribution(pmf=pmf, n_samples=n_samples)


def cmd_simulate(args) -> int:
    cfg = load_config(args.config)
    if args.seed is not None:
        cfg = replace(cfg, master_seed=args.seed)
    if args.workers is not None:
        cfg = replace(cfg, workers=args.workers)
    result = run_experiment(cfg)
    fmts = [args.format] if args.format else list(cfg.outputs)
    for fmt in fmts:
        path = args.out or f"{cfg.experiment_id}.{fmt}"
        if args.out and len(fmts) > 1:
            path = f"{args.out}.{fmt}"
        save_result(result, path, fmt)
        print(f"wrote {path}")
    v = result.verdict
    print(
        f"experiment {cfg.experiment_id}: replicas={cfg.replicas} "
        f"tv={v.tv:.5f} chi2_p={v.chi2_pvalue} mean_diff={v.mean_diff:+.5f} "
        f"discarded={result.flag_tallies['discarded']} "
        f"wall={result.wall_time:.1f}s"
    )
    return 0


def cmd_covariance(args) -> int:
    cfg = load_config(args.config)
    model = cfg.model
    if not isinstance(model, FiniteVariance):
        raise SystemExit("covariance tables require a finite-variance model")
    pairs = _parse_pairs(args.pairs)
    ladder = _parse_ints(args.n_ladder)
    rows = run_covariance_table(
        model.sigma1_sq, model.sigma2_sq, model.rho, cfg.window.center.base(), pairs, ladder
    )
    _write_rows(rows, args.out, args.format or "csv")
    return 0


def cmd_weyl(args) -> int:
    centers = [_parse_center_token(tok) for tok in args.s.split(",")]
    rows = run_weyl_report(centers, _parse_floats(args.alpha), _parse_ints(args.n_ladder))
    _write_rows(rows, args.out, args.format or "csv")
    return 0


def cmd_compare(args) -> int:
    da = load_result_dict(args.result_a)
    db = load_result_dict(args.result_b)
    key = f"{args.side}_pmf"
    pa = _dist_from_pmf_rows(da[key], da["n_samples"])
    pb = _dist_from_pmf_rows(db[key], db["n_samples"])
    v = compare_distributions(pa, pb)
    out = {
        "side": args.side,
        "tv": v.tv,
        "chi2_stat": v.chi2_stat,
        "chi2_pvalue": v.chi2_pvalue,
        "mean_diff": v.mean_diff,
        "mean_ci_halfwidth": v.mean_ci_halfwidth,
    }
    print(json.dumps(out, indent=2, sort_keys=True))
    return 0


def cmd_show(args) -> int:
    d = load_result_dict(args.result)
    cfgd = d["config"]
    print(f"experiment {cfgd['experiment_id']}")
    print(f"  model   : {cfgd['model']}")
    print(f"  window  : {cfgd['window']}")
    print(f"  limit   : {cfgd['limit']}")
    print(f"  samples : {d['n_samples']}")
    print("  k   poly_prob    limit_prob")
    keys = sorted({int(k) for k, _ in d["poly_pmf"]} | {int(k) for k, _ in d["limit_pmf"]})
    pp = {int(k): p for k, p in d["poly_pmf"]}
    pl = {int(k): p for k, p in d["limit_pmf"]}
    for k in keys:
        print(f"  {k:<3d} {pp.get(k, 0.0):<12.6f} {pl.get(k, 0.0):<12.6f}")
    print(f"  verdict : {d['verdict']}")
    print(f"  flags   : {d['flags']}")
    if "timing" in d:
        print(f"  timing  : {d['timing']['wall_time']:.2f}s")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="trigzeros",
        description="Monte Carlo comparison of windowed zero counts of random "
        "trigonometric polynomials against their local limit processes.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run one experiment from a config file")
    sim.add_argument("--config", required=True)
    sim.add_argument("--seed", type=int, default=None, help="override the master seed")
    sim.add_argument("--workers", type=int, default=None)
    sim.add_argument("--out", default=None)
    sim.add_argument("--format", choices=("json", "csv"), default=None)
    sim.set_defaults(func=cmd_simulate)

    cov = sub.add_parser("covariance", help="finite-n covariance vs the limit")
    cov.add_argument("--config", required=True)
    cov.add_argument("--pairs", default="0:2,1:1,0.5:3", help="t1:t2 pairs, comma separated")
    cov.add_argument("--n-ladder", default="1250,2500,5000,10000")
    cov.add_argument("--out", default=None)
    cov.add_argument("--format", choices=("json", "csv"), default=None)
    cov.set_defaults(func=cmd_covariance)

    weyl = sub.add_parser("weyl", help="equidistribution and sigma_n^alpha report")
    weyl.add_argument("--s", default="1.0", help="centers: decimals or pi*p/q tokens")
    weyl.add_argument("--alpha", default="1.0,1.5,2.0")
    weyl.add_argument("--n-ladder", default="1000,10000,100000")
    weyl.add_argument("--out", default=None)
    weyl.add_argument("--format", choices=("json", "csv"), default=None)
    weyl.set_defaults(func=cmd_weyl)

    cmp_ = sub.add_parser("compare", help="verdict between two stored results")
    cmp_.add_argument("result_a")
    cmp_.add_argument("result_b")
    cmp_.add_argument("--side", choices=("poly", "limit"), default="poly")
    cmp_.set_defaults(func=cmd_compare)

    show = sub.add_parser("show", help="pretty-print a stored result")
    show.add_argument("result")
    show.set_defaults(func=cmd_show)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

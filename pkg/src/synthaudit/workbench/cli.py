"""Command-line front end.

Subcommands mirror the workflow: generate and transform datasets, serve a
provider over HTTP, score a synthetic dataset, run attacks (locally or
against a served provider), reproduce the counter-examples, sweep DP
budgets, and render report JSON to tidy CSV. Exit code 1 means a run's
hard checks failed, 2 means the invocation itself was bad.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from ..attacks import ANY_RECORD, OUTLIERS_ONLY, AttackConfig, reconsyn
from ..metrics.report import baseline_stats, report_against
from ..provider import FilterConfig, HttpClient, provider_new
from ..provider.service import serve
from ..tabular.discretize import apply_discretizer, fit_discretizer
from ..tabular.generate import gen_censuslite, gen_gauss, split
from ..tabular.io import read_csv, write_csv
from . import counterexamples as ce
from .config import budget, dp_sweep, load_spec, parse_config, run_attack
from .report import CheckFailure, report_from_dict, write_tidy_csv


def _outdir(spec) -> Path:
    path = Path(spec.out)
    path.mkdir(parents=True, exist_ok=True)
    return path


def _emit(report, spec) -> Path:
    outdir = _outdir(spec)
    path = outdir / f"{report.name}.json"
    report.write_json(path)
    attack = getattr(report, "attack_result", None)
    if attack is not None:
        (outdir / f"{report.name}.attack.json").write_text(attack.to_json())
    return path


def _run_and_emit(fn, spec) -> int:
    try:
        report = fn(spec)
    except CheckFailure as e:
        _emit(e.report, spec)
        raise
    path = _emit(report, spec)
    print(f"{report.name}: all {len(report.checks)} checks passed -> {path}")
    return 0


def cmd_data_gen(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out,
                     dataset=args.dataset, dim=args.dim, n_rows=args.n_rows)
    if spec.dataset == "gauss":
        ds = gen_gauss(spec.dim, spec.n_rows or 2000, spec.seed)
    elif spec.dataset == "censuslite":
        ds = gen_censuslite(spec.n_rows or 6000, spec.seed)
    else:
        raise ValueError(f"unknown dataset {spec.dataset!r}")
    path = _outdir(spec) / "data.csv"
    write_csv(ds, path)
    print(f"{ds.n_rows} rows -> {path}")
    return 0


def cmd_data_split(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out)
    ds = read_csv(args.infile)
    train, test = split(ds, spec.seed)
    outdir = _outdir(spec)
    write_csv(train, outdir / "train.csv")
    write_csv(test, outdir / "test.csv")
    print(f"{train.n_rows}+{test.n_rows} rows -> {outdir}/train.csv, test.csv")
    return 0


def cmd_data_discretize(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out,
                     strategy=args.strategy, n_bins=args.n_bins)
    ds = read_csv(args.infile)
    disc = fit_discretizer(ds, spec.strategy, spec.n_bins)
    path = _outdir(spec) / "discretized.csv"
    write_csv(apply_discretizer(disc, ds), path)
    print(f"{spec.strategy} x {spec.n_bins} bins -> {path}")
    return 0


def cmd_provider_serve(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out,
                     dataset=args.dataset, model=args.model, eps=args.eps,
                     metric=args.metric)
    if args.infile:
        data = read_csv(args.infile)
    elif spec.dataset == "gauss":
        data = gen_gauss(spec.dim, spec.n_rows or 2000, spec.seed)
    else:
        data = gen_censuslite(spec.n_rows or 6000, spec.seed)
    filters = None
    if spec.sf_tau is not None or spec.of_percentile is not None:
        filters = FilterConfig(spec.sf_tau, spec.of_percentile)
    provider = provider_new(data, spec.model, dp=budget(spec.eps),
                            metric=spec.metric, filters=filters,
                            seed=spec.seed, quota=spec.quota)
    host, sep, port = args.bind.rpartition(":")
    if not sep:
        raise ValueError(f"--bind wants host:port, got {args.bind!r}")
    serve(provider, host, int(port))
    return 0


def cmd_metrics_report(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out,
                     metric=args.metric)
    synth = read_csv(args.synth)
    if args.provider:
        resp = HttpClient(args.provider).metrics(synth)
        flags, payload = resp.flags, resp.to_dict()
    else:
        if not (args.train and args.test):
            raise ValueError(
                "metrics report needs --train and --test, or --provider")
        baseline = baseline_stats(read_csv(args.train), read_csv(args.test),
                                  spec.metric)
        rep = report_against(baseline, read_csv(args.train), synth)
        flags = {"ims": rep.ims.passed, "dcr": rep.dcr.passed,
                 "nndr": rep.nndr.passed}
        payload = rep.to_dict()
    path = _outdir(spec) / "privacy_report.json"
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")
    verdict = " ".join(f"{k}={'pass' if v else 'fail'}"
                       for k, v in flags.items())
    print(f"{verdict} -> {path}")
    return 0


def cmd_attack_difference(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out,
                     attack=args.mode, model=args.model, eps=args.eps,
                     n_targets=args.n_targets, column=args.column)
    return _run_and_emit(run_attack, spec)


def cmd_attack_reconsyn(args) -> int:
    attack = "reconsyn" if args.target == "outliers" else "any_record"
    spec = load_spec(args.config, seed=args.seed, out=args.out,
                     attack=attack, dataset=args.dataset, model=args.model,
                     eps=args.eps, rounds=args.rounds)
    if args.provider:
        # remote run: no ground truth on this side, so no checks; the
        # claims themselves are the output
        if not (spec.n_train and spec.n_out):
            raise ValueError(
                "remote reconsyn needs n_train and n_out (config keys)")
        mode = OUTLIERS_ONLY if args.target == "outliers" else ANY_RECORD
        config = AttackConfig(n_train=spec.n_train, n_out=spec.n_out,
                              rounds=spec.rounds, d_sra=spec.d_sra,
                              target_mode=mode, seed=spec.seed)
        result = reconsyn(HttpClient(args.provider), config)
        path = _outdir(spec) / "reconsyn.attack.json"
        path.write_text(result.to_json())
        print(f"{len(result.reconstructed)} records claimed -> {path}")
        return 0
    return _run_and_emit(run_attack, spec)


def cmd_reproduce(args) -> int:
    cfg = parse_config(args.config) if args.config else {}
    spec = load_spec(args.config, seed=args.seed, out=args.out)
    # ce2 and ce4 pin their own default master seeds; only an explicit
    # --seed or config seed overrides them
    seed_kw = {}
    if args.seed is not None:
        seed_kw = {"seed": args.seed}
    elif "seed" in cfg:
        seed_kw = {"seed": cfg["seed"]}
    plans = {
        "ce1": [lambda: ce.ce1(**seed_kw)],
        "ce2": [lambda: ce.ce2(**seed_kw)],
        "ce3": [lambda: ce.ce3(dims=spec.dims, n_datasets=spec.n_datasets,
                               time_budget=spec.time_budget, **seed_kw),
                lambda: ce.ce3_targeted(**seed_kw)],
        "ce3_targeted": [lambda: ce.ce3_targeted(**seed_kw)],
        "ce4": [lambda: ce.ce4(n_reps=spec.n_reps, **seed_kw)],
        "ce5": [lambda: ce.ce5(n_reps=spec.n_reps, **seed_kw)],
        "ce6": [lambda: ce.ce6(**seed_kw)],
    }
    reports = []
    try:
        for step in plans[args.ce]:
            reports.append(step())
    except CheckFailure as e:
        reports.append(e.report)
        for rep in reports:
            _emit(rep, spec)
        raise
    for rep in reports:
        path = _emit(rep, spec)
        print(f"{rep.name}: all {len(rep.checks)} checks passed -> {path}")
    return 0


def cmd_sweep_dp(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out,
                     rounds=args.rounds, n_seeds=args.n_seeds)
    try:
        report = dp_sweep(spec)
    except CheckFailure as e:
        _emit(e.report, spec)
        raise
    path = _emit(report, spec)
    csv_path = _outdir(spec) / f"{report.name}.csv"
    write_tidy_csv([report], csv_path)
    print(f"{report.name}: all {len(report.checks)} checks passed "
          f"-> {path}, {csv_path}")
    return 0


def cmd_report_render(args) -> int:
    spec = load_spec(args.config, seed=args.seed, out=args.out)
    reports = []
    for src in args.inputs:
        with open(src) as fh:
            reports.append(report_from_dict(json.load(fh)))
    path = _outdir(spec) / "reports.csv"
    write_tidy_csv(reports, path)
    print(f"{sum(len(r.results) > 0 for r in reports)} reports -> {path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="synthaudit",
        description="privacy-audit workbench for synthetic tabular data")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None,
                        help="master seed (default: per-command)")
    common.add_argument("--out", default=None,
                        help="output directory (default: runs)")
    common.add_argument("--config", default=None, metavar="FILE",
                        help="flat key=value config file")
    sub = parser.add_subparsers(dest="command", required=True)

    data = sub.add_parser("data", help="generate and transform datasets")
    dsub = data.add_subparsers(dest="subcommand", required=True)
    gen = dsub.add_parser("gen", parents=[common], help="write a dataset CSV")
    gen.add_argument("--dataset", choices=("gauss", "censuslite"))
    gen.add_argument("--dim", type=int)
    gen.add_argument("--n-rows", type=int, dest="n_rows")
    gen.set_defaults(func=cmd_data_gen)
    spl = dsub.add_parser("split", parents=[common],
                          help="disjoint train/test halves")
    spl.add_argument("--in", dest="infile", required=True, metavar="CSV")
    spl.set_defaults(func=cmd_data_split)
    dis = dsub.add_parser("discretize", parents=[common],
                          help="bin numeric columns to categories")
    dis.add_argument("--in", dest="infile", required=True, metavar="CSV")
    dis.add_argument("--strategy", choices=("uniform", "quantile"))
    dis.add_argument("--n-bins", type=int, dest="n_bins")
    dis.set_defaults(func=cmd_data_discretize)

    prov = sub.add_parser("provider", help="run the HTTP provider")
    psub = prov.add_subparsers(dest="subcommand", required=True)
    srv = psub.add_parser("serve", parents=[common],
                          help="serve a provider; prints the bound port")
    srv.add_argument("--bind", default="127.0.0.1:0", metavar="HOST:PORT")
    srv.add_argument("--in", dest="infile", metavar="CSV",
                     help="dataset file; omitted: generate per config")
    srv.add_argument("--dataset", choices=("gauss", "censuslite"))
    srv.add_argument("--model")
    srv.add_argument("--eps", type=float)
    srv.add_argument("--metric", choices=("hamming", "euclidean"))
    srv.set_defaults(func=cmd_provider_serve)

    met = sub.add_parser("metrics", help="privacy metrics")
    msub = met.add_subparsers(dest="subcommand", required=True)
    mrep = msub.add_parser("report", parents=[common],
                           help="score a synthetic dataset")
    mrep.add_argument("--synth", required=True, metavar="CSV")
    mrep.add_argument("--train", metavar="CSV")
    mrep.add_argument("--test", metavar="CSV")
    mrep.add_argument("--provider", metavar="URL",
                      help="submit to a served provider instead")
    mrep.add_argument("--metric", choices=("hamming", "euclidean"))
    mrep.set_defaults(func=cmd_metrics_report)

    atk = sub.add_parser("attack", help="run attacks")
    asub = atk.add_subparsers(dest="subcommand", required=True)
    diff = asub.add_parser("difference", parents=[common],
                           help="membership / attribute inference")
    diff.add_argument("--mode", choices=("membership", "attribute"),
                      default="membership")
    diff.add_argument("--model")
    diff.add_argument("--eps", type=float)
    diff.add_argument("--n-targets", type=int, dest="n_targets")
    diff.add_argument("--column")
    diff.set_defaults(func=cmd_attack_difference)
    rsyn = asub.add_parser("reconsyn", parents=[common],
                           help="reconstruction via sampling and search")
    rsyn.add_argument("--target", choices=("outliers", "any"),
                      default="outliers")
    rsyn.add_argument("--dataset", choices=("censuslite", "gauss"))
    rsyn.add_argument("--model")
    rsyn.add_argument("--eps", type=float)
    rsyn.add_argument("--rounds", type=int)
    rsyn.add_argument("--provider", metavar="URL",
                      help="attack a served provider (needs n_train/n_out)")
    rsyn.set_defaults(func=cmd_attack_reconsyn)

    repro = sub.add_parser("reproduce", parents=[common],
                           help="counter-example reproductions")
    repro.add_argument("ce", choices=("ce1", "ce2", "ce3", "ce3_targeted",
                                      "ce4", "ce5", "ce6"))
    repro.set_defaults(func=cmd_reproduce)

    swp = sub.add_parser("sweep", help="experiment grids")
    ssub = swp.add_subparsers(dest="subcommand", required=True)
    sdp = ssub.add_parser("dp", parents=[common],
                          help="privacy-utility sweep over DP budgets")
    sdp.add_argument("--rounds", type=int)
    sdp.add_argument("--n-seeds", type=int, dest="n_seeds")
    sdp.set_defaults(func=cmd_sweep_dp)

    rep = sub.add_parser("report", help="report post-processing")
    rsub = rep.add_subparsers(dest="subcommand", required=True)
    rend = rsub.add_parser("render", parents=[common],
                           help="flatten report JSON to tidy CSV")
    rend.add_argument("inputs", nargs="+", metavar="REPORT.json")
    rend.set_defaults(func=cmd_report_render)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except AssertionError as e:
        print(f"FAIL: {e}", file=sys.stderr)
        return 1
    except (ValueError, OSError) as e:
        print(f"error: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

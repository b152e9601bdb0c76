"""Command-line front end.

Subcommands cover the full workflow: generate benchmark data, fit a credal
partition, extract source knowledge, fit with transfer, evaluate hardened
labels, and select the balance coefficient by grid search or sweep. Every
successful run prints a single-line JSON summary to stdout. Exit codes:
0 success, 2 usage error, 1 runtime error. The CREDAL_THREADS environment
variable caps the worker pool used for grid/sweep cells.
"""

import argparse
import csv
import json
import sys
from dataclasses import replace

from .belief import harden
from .datagen import builtin_scenarios, generate
from .engine import (
    DEFAULT_LAMBDA_GRID,
    DegenerateFitError,
    FitConfig,
    ecm_fit,
    extract_source_knowledge,
    grid_search_lambda,
    resolve_workers,
    tecm_fit,
)
from .metrics import evaluate_labels
from .model_io import (
    SCHEMA_VERSION,
    read_csv_header,
    read_dataset_csv,
    read_labels_csv,
    read_source_knowledge,
    write_dataset_csv,
    write_grid_report,
    write_labels_csv,
    write_model,
    write_source_knowledge,
)

__all__ = ["main", "run"]


def _cap(value: str):
    if value == "full":
        return None
    try:
        return int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(
            f"cap must be an integer or 'full', got {value!r}"
        ) from None


def _grid(value: str):
    try:
        return [float(tok) for tok in value.replace(",", " ").split()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"cannot parse grid {value!r}") from None


def _add_common_fit_flags(parser, gamma=False):
    parser.add_argument("--alpha", type=float, default=1.0,
                        help="cardinality exponent (default 1)")
    parser.add_argument("--beta", type=float, default=2.0,
                        help="mass exponent, > 1 (default 2)")
    parser.add_argument("--delta", type=float, default=10.0,
                        help="outlier distance (default 10)")
    if gamma:
        parser.add_argument("--gamma", type=float, default=2.0,
                            help="association exponent, > 1 (default 2)")
    parser.add_argument("--epsilon", type=float, default=1e-3,
                        help="convergence threshold on |dJ| (default 1e-3)")
    parser.add_argument("--max-iter", type=int, default=100,
                        help="iteration cap (default 100)")
    parser.add_argument("--cap", type=_cap, default=None,
                        help="focal-set cardinality cap, or 'full' (default full)")
    parser.add_argument("--seed", type=int, default=0,
                        help="seed for center initialization (default 0)")
    parser.add_argument("--label-column", default=None,
                        help="label column name; default: 'y' when present; "
                             "'' forces unlabeled")


def _config_from_args(args, lam=0.0) -> FitConfig:
    return FitConfig(
        alpha=args.alpha,
        beta=args.beta,
        delta=args.delta,
        gamma=getattr(args, "gamma", 2.0),
        lam=lam,
        epsilon=args.epsilon,
        max_iter=args.max_iter,
        max_cardinality=args.cap,
        seed=args.seed,
    )


def _load_data(path, label_column):
    if label_column is None:
        label_column = "y" if "y" in read_csv_header(path) else ""
    if label_column == "":
        return read_dataset_csv(path)
    return read_dataset_csv(path, label_column)


def _emit(summary) -> int:
    print(json.dumps(summary))
    return 0


def _fit_summary(command, data, model):
    hard = harden(model.partition, model.structure)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "n": data.n,
        "p": data.p,
        "c": model.structure.c,
        "objective": model.objective_trace[-1],
        "iterations": model.iterations,
        "converged": model.converged,
        "outliers": int(hard.outlier_flags.sum()),
    }
    if data.labels is not None:
        report = evaluate_labels(hard.labels, data.labels)
        summary["scores"] = {"ac": report.ac, "ri": report.ri, "nmi": report.nmi}
    return summary, hard


# ---------------------------------------------------------------------------
# Handlers


def _cmd_generate(args) -> int:
    scenarios = builtin_scenarios()
    if args.scenario not in scenarios:
        raise ValueError(
            f"unknown scenario {args.scenario!r}; "
            f"available: {', '.join(sorted(scenarios))}"
        )
    spec = scenarios[args.scenario]
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    if args.noise_sigma is not None:
        spec = replace(spec, noise_sigma=args.noise_sigma)
    data = generate(spec)
    write_dataset_csv(args.out, data)
    return _emit({
        "schema_version": SCHEMA_VERSION,
        "command": "generate",
        "scenario": spec.name,
        "seed": spec.seed,
        "noise_sigma": spec.noise_sigma,
        "n": data.n,
        "p": data.p,
        "out": args.out,
    })


def _cmd_fit_ecm(args) -> int:
    data = _load_data(args.data, args.label_column)
    model = ecm_fit(data, args.c, _config_from_args(args))
    summary, hard = _fit_summary("fit-ecm", data, model)
    if args.out:
        write_model(model, args.out)
        summary["out"] = args.out
    if args.out_labels:
        write_labels_csv(args.out_labels, hard.labels)
        summary["out_labels"] = args.out_labels
    return _emit(summary)


def _cmd_extract(args) -> int:
    data = _load_data(args.source_data, args.label_column)
    knowledge = extract_source_knowledge(
        data, args.c_source, _config_from_args(args)
    )
    write_source_knowledge(knowledge, args.out)
    return _emit({
        "schema_version": SCHEMA_VERSION,
        "command": "extract",
        "n": data.n,
        "p": data.p,
        "c_source": args.c_source,
        "focal_sets": knowledge.structure.n_sets,
        "out": args.out,
    })


def _cmd_fit_tecm(args) -> int:
    data = _load_data(args.data, args.label_column)
    source = read_source_knowledge(args.source_model)
    model = tecm_fit(data, args.c, source, _config_from_args(args, lam=args.lam))
    summary, hard = _fit_summary("fit-tecm", data, model)
    summary["lambda"] = args.lam
    if args.out:
        write_model(model, args.out)
        summary["out"] = args.out
    if args.out_labels:
        write_labels_csv(args.out_labels, hard.labels)
        summary["out_labels"] = args.out_labels
    return _emit(summary)


def _cmd_evaluate(args) -> int:
    pred = read_labels_csv(args.pred, args.label_column)
    truth = read_labels_csv(args.truth, args.label_column)
    report = evaluate_labels(pred, truth)
    return _emit({
        "schema_version": SCHEMA_VERSION,
        "command": "evaluate",
        "n": int(pred.size),
        "ac": report.ac,
        "ri": report.ri,
        "nmi": report.nmi,
    })


def _run_grid(args):
    data = _load_data(args.data, args.label_column)
    source = read_source_knowledge(args.source_model)
    seeds = [args.seed + i for i in range(args.repeats)]
    best, table = grid_search_lambda(
        data,
        args.c,
        source,
        _config_from_args(args),
        grid=args.grid,
        scorer=args.scorer,
        seeds=seeds,
        workers=resolve_workers(),
    )
    return data, seeds, best, table


def _cmd_gridsearch(args) -> int:
    data, seeds, best, table = _run_grid(args)
    best_row = next(row for row in table if row["lam"] == best)
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "gridsearch",
        "n": data.n,
        "scorer": args.scorer,
        "repeats": args.repeats,
        "best_lambda": best,
        "best_mean": best_row["mean"],
    }
    if args.out:
        write_grid_report(
            args.out, scorer=args.scorer, seeds=seeds, table=table, best_lam=best
        )
        summary["out"] = args.out
    return _emit(summary)


def _cmd_sweep(args) -> int:
    _, _, best, table = _run_grid(args)
    rows = sorted(table, key=lambda row: row["lam"])
    with open(args.out, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(["lambda", "mean_score", "std_score"])
        for row in rows:
            writer.writerow(
                [repr(row["lam"]), repr(row["mean"]), repr(row["std"])]
            )
    return _emit({
        "schema_version": SCHEMA_VERSION,
        "command": "sweep-lambda",
        "scorer": args.scorer,
        "repeats": args.repeats,
        "rows": len(rows),
        "best_lambda": best,
        "out": args.out,
    })


# ---------------------------------------------------------------------------
# Parser


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="credal",
        description="Credal clustering with optional source-to-target transfer.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a built-in benchmark scenario as CSV")
    p.add_argument("--scenario", required=True,
                   help="scenario name, e.g. S1-1 or T2-1")
    p.add_argument("--seed", type=int, default=None,
                   help="override the scenario's seed")
    p.add_argument("--noise-sigma", type=float, default=None,
                   help="override the additive noise level")
    p.add_argument("--out", required=True, help="output CSV path")
    p.set_defaults(handler=_cmd_generate)

    p = sub.add_parser("fit-ecm", help="fit a credal partition to one dataset")
    p.add_argument("--data", required=True, help="input CSV")
    p.add_argument("--c", type=int, required=True, help="number of clusters")
    _add_common_fit_flags(p)
    p.add_argument("--out", default=None, help="write the fitted model JSON here")
    p.add_argument("--out-labels", default=None,
                   help="write hardened labels as a one-column CSV")
    p.set_defaults(handler=_cmd_fit_ecm)

    p = sub.add_parser("extract", help="cluster a source domain, keep barycenters")
    p.add_argument("--source-data", required=True, help="source CSV")
    p.add_argument("--c-source", type=int, required=True,
                   help="number of source clusters")
    _add_common_fit_flags(p)
    p.add_argument("--out", required=True, help="output knowledge JSON path")
    p.set_defaults(handler=_cmd_extract)

    p = sub.add_parser("fit-tecm", help="fit with transfer from source knowledge")
    p.add_argument("--data", required=True, help="target CSV")
    p.add_argument("--source-model", required=True, help="source knowledge JSON")
    p.add_argument("--c", type=int, required=True, help="number of target clusters")
    p.add_argument("--lambda", dest="lam", type=float, default=0.0,
                   help="transfer balance coefficient (default 0)")
    _add_common_fit_flags(p, gamma=True)
    p.add_argument("--out", default=None, help="write the fitted model JSON here")
    p.add_argument("--out-labels", default=None,
                   help="write hardened labels as a one-column CSV")
    p.set_defaults(handler=_cmd_fit_tecm)

    p = sub.add_parser("evaluate", help="score predicted labels against the truth")
    p.add_argument("--pred", required=True, help="CSV holding predicted labels")
    p.add_argument("--truth", required=True, help="CSV holding true labels")
    p.add_argument("--label-column", default=None,
                   help="label column in both files (default: 'y' or only column)")
    p.set_defaults(handler=_cmd_evaluate)

    for name, handler in (("gridsearch", _cmd_gridsearch),
                          ("sweep-lambda", _cmd_sweep)):
        p = sub.add_parser(
            name,
            help="score lambdas over repeated seeds"
            + (" and write the curve CSV" if name == "sweep-lambda" else ""),
        )
        p.add_argument("--data", required=True, help="target CSV")
        p.add_argument("--source-model", required=True, help="source knowledge JSON")
        p.add_argument("--c", type=int, required=True,
                       help="number of target clusters")
        _add_common_fit_flags(p, gamma=True)
        p.add_argument("--repeats", type=int, default=10,
                       help="fits per lambda (default 10, seeds seed..seed+repeats-1)")
        p.add_argument("--grid", type=_grid,
                       default=list(DEFAULT_LAMBDA_GRID),
                       help="comma-separated lambda values")
        p.add_argument("--scorer", choices=["silhouette", "ac"],
                       default="silhouette",
                       help="selection score (ac needs labeled data)")
        p.add_argument("--out", default=None,
                       required=(name == "sweep-lambda"),
                       help="report JSON path" if name == "gridsearch"
                       else "curve CSV path")
        p.set_defaults(handler=handler)

    return parser


def run(argv) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args)
    except (ValueError, OSError, DegenerateFitError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def main() -> None:
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()

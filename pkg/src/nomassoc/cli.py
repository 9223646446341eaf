"""Command-line interface.

Subcommands: inspect, matrix, vector, tau, select, equiv, predict,
bootstrap, simulate.  Exit codes: 0 success, 1 usage error, 2 data error.

Output formats (``--format``): ``human`` prints aligned tables,
``delimited`` prints delimiter-separated rows, ``structured`` prints
deterministic ``key = value`` lines (nested keys joined with dots, matrix
entries keyed by row and column labels) suitable for scripting.
"""

from __future__ import annotations

import argparse
import csv
import sys

import numpy as np

from . import __version__
from .association import (
    WeightVector,
    association_matrix,
    association_vector,
    resolve_weights,
    weighted_tau,
)
from .dataset import CategoricalDataset, contingency, load_delimited
from .equivalence import EquivalenceLevel, check, hierarchy_scan
from .errors import DataError, NomassocError
from .prediction import fit, predict_and_score
from .resampling import bootstrap, make_reduction_statistic
from .scenarios import COLUMN_NAMES, FluScenarioConfig, generate_flu
from .selection import SelectionConfig, select_structural, select_supervised


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):  # exit 1 on usage problems, not argparse's 2
        raise UsageError(f"{self.prog}: {message}")


class Printer:
    """Renders results in one of the three output modes."""

    def __init__(self, mode: str, precision: int, delimiter: str = ","):
        self.mode = mode
        self.precision = max(1, precision)
        self.delimiter = delimiter

    def num(self, value) -> str:
        return f"{float(value):.{self.precision}f}"

    def kv(self, key: str, value) -> None:
        if isinstance(value, (float, np.floating)):
            value = self.num(value)
        if self.mode == "structured":
            print(f"{key} = {value}")
        elif self.mode == "delimited":
            print(f"{key}{self.delimiter}{value}")
        else:
            print(f"{key}: {value}")

    def matrix(self, key: str, rows, row_labels, col_labels) -> None:
        rows = np.asarray(rows, dtype=np.float64)
        if self.mode == "structured":
            for r, rl in enumerate(row_labels):
                for c, cl in enumerate(col_labels):
                    print(f"{key}.{rl}.{cl} = {self.num(rows[r, c])}")
            return
        if self.mode == "delimited":
            print(self.delimiter.join([key] + list(col_labels)))
            for r, rl in enumerate(row_labels):
                print(self.delimiter.join([rl] + [self.num(v) for v in rows[r]]))
            return
        width = max(
            [len(str(l)) for l in col_labels]
            + [self.precision + 3]
        )
        label_w = max(len(str(l)) for l in list(row_labels) + [key])
        print(f"{key:<{label_w}}  " + "  ".join(f"{l:>{width}}" for l in col_labels))
        for r, rl in enumerate(row_labels):
            cells = "  ".join(f"{self.num(v):>{width}}" for v in rows[r])
            print(f"{rl:<{label_w}}  {cells}")

    def vector(self, key: str, values, labels) -> None:
        if self.mode == "structured":
            for lab, v in zip(labels, values):
                print(f"{key}.{lab} = {self.num(v)}")
        elif self.mode == "delimited":
            print(self.delimiter.join([key] + list(labels)))
            print(self.delimiter.join([""] + [self.num(v) for v in values]))
        else:
            body = "  ".join(f"{lab}={self.num(v)}" for lab, v in zip(labels, values))
            print(f"{key}: {body}")


def _add_io_flags(p: _Parser, with_file: bool = True) -> None:
    if with_file:
        p.add_argument("file", help="delimited input file")
    p.add_argument("--delimiter", default=",", help="field delimiter (default ,)")
    p.add_argument("--missing-token", default="__NA__")
    p.add_argument(
        "--missing-policy", choices=("own-category", "drop-row"),
        default="own-category",
    )
    p.add_argument("--mass-column", default=None,
                   help="column holding per-row masses")


def _add_output_flags(p: _Parser) -> None:
    p.add_argument(
        "--format", choices=("human", "delimited", "structured"),
        default="human", dest="out_format",
    )
    p.add_argument("--precision", type=int, default=4)


def _load(args, path=None) -> CategoricalDataset:
    return load_delimited(
        path or args.file,
        delimiter=args.delimiter,
        missing_token=args.missing_token,
        missing_policy=args.missing_policy,
        mass_column=args.mass_column,
    )


def _printer(args) -> Printer:
    return Printer(args.out_format, args.precision,
                   getattr(args, "delimiter", ","))


def _names(raw: str, flag: str) -> list[str]:
    names = [n.strip() for n in raw.split(",") if n.strip()]
    if not names:
        raise UsageError(f"{flag} requires at least one variable name")
    return names


def _resolve(dataset: CategoricalDataset, names, flag: str):
    """Validate variable names against the dataset, naming the flag."""
    if isinstance(names, str):
        names = [names]
    try:
        for name in names:
            dataset.index_of(name)
    except DataError as exc:
        raise DataError(f"{flag}: {exc}") from None
    return list(names)


def _weights_spec(raw: str, printer: Printer | None = None):
    if raw.startswith("file:"):
        path = raw[len("file:"):]
        with open(path, "r", encoding="utf-8") as fh:
            values = [float(line.strip()) for line in fh if line.strip()]
        vec = WeightVector.from_raw(np.asarray(values))
        if printer is not None:
            printer.kv("weights.normalized",
                       " ".join(printer.num(w) for w in vec.weights))
            printer.kv("weights.regular", str(vec.regular).lower())
        return vec
    return raw


def _response_vector(dataset, args, printer):
    given = _resolve(dataset, _names(args.given, "--given"), "--given")
    _resolve(dataset, args.response, "--response")
    table = contingency(dataset, given, args.response)
    return table, association_vector(table)


# -- subcommand handlers -----------------------------------------------------


def _cmd_inspect(args) -> int:
    ds = _load(args)
    pr = _printer(args)
    pr.kv("rows", ds.n_rows)
    pr.kv("variables", ds.n_variables)
    pr.kv("total_mass", ds.total_mass)
    for v in ds.variables:
        preview = ",".join(v.levels[:8]) + (",..." if v.cardinality > 8 else "")
        pr.kv(f"variable.{v.name}.cardinality", v.cardinality)
        pr.kv(f"variable.{v.name}.levels", preview)
    return 0


def _cmd_matrix(args) -> int:
    ds = _load(args)
    pr = _printer(args)
    table, _ = _response_vector(ds, args, pr)
    m = association_matrix(table)
    if m.dropped_levels:
        pr.kv("dropped_levels", ",".join(str(i) for i in m.dropped_levels))
    pr.matrix("matrix", m.entries, m.y_labels, m.y_labels)
    return 0


def _cmd_vector(args) -> int:
    ds = _load(args)
    pr = _printer(args)
    _, vec = _response_vector(ds, args, pr)
    if vec.excluded_levels:
        pr.kv("excluded_levels", ",".join(str(i) for i in vec.excluded_levels))
    pr.vector("vector", vec.components, vec.y_labels)
    return 0


def _cmd_tau(args) -> int:
    ds = _load(args)
    pr = _printer(args)
    spec = _weights_spec(args.weights, pr)
    _, vec = _response_vector(ds, args, pr)
    alpha = resolve_weights(spec, vec.stats())
    pr.kv("tau", weighted_tau(vec, alpha))
    return 0


def _cmd_select(args) -> int:
    ds = _load(args)
    pr = _printer(args)
    spec = _weights_spec(args.weights, pr)
    config = SelectionConfig(
        weights=spec,
        epsilon=args.epsilon,
        max_vars=args.max_vars,
        max_cells=args.max_cells,
    )
    candidates = (
        _resolve(ds, _names(args.candidates, "--candidates"), "--candidates")
        if args.candidates
        else None
    )
    if args.mode == "supervised":
        if not args.response:
            raise UsageError("select supervised requires --response")
        _resolve(ds, args.response, "--response")
        result = select_supervised(ds, args.response, candidates, config,
                                   workers=args.threads)
    else:
        result = select_structural(ds, candidates, config, workers=args.threads)
    pr.kv("basis", ",".join(result.basis_names) or "(empty)")
    pr.kv("final_value", result.final_value)
    pr.kv("terminated_by", result.terminated_by)
    for i, step in enumerate(result.trace, start=1):
        pr.kv(f"trace.{i}.variable", step.chosen_name)
        pr.kv(f"trace.{i}.value", step.value)
    if result.removed:
        pr.kv("removed", ",".join(ds.variables[i].name for i in result.removed))
    if result.skipped:
        pr.kv("skipped_max_cells",
              ",".join(ds.variables[i].name for i in result.skipped))
    return 0


def _cmd_equiv(args) -> int:
    ds = _load(args)
    pr = _printer(args)
    alpha = _weights_spec(args.weights, pr) if args.weights else None
    x1 = _resolve(ds, _names(args.x1, "--x1"), "--x1")
    x2 = _resolve(ds, _names(args.x2, "--x2"), "--x2")
    _resolve(ds, args.response, "--response")
    if args.level:
        name = args.level if args.level.startswith("E") else f"E{args.level}"
        report = check(ds, x1, x2, args.response,
                       EquivalenceLevel(name, tolerance=args.tol, alpha=alpha))
        pr.kv(f"equivalent.{report.level}", str(report.holds).lower())
        if report.witness is not None:
            pr.kv("witness", str(report.witness))
        return 0
    for name, holds in hierarchy_scan(ds, x1, x2, args.response,
                                      alpha=alpha, tolerance=args.tol):
        pr.kv(f"equivalent.{name}", str(holds).lower())
    return 0


def _cmd_predict(args) -> int:
    pr = _printer(args)
    train = _load(args, args.train)
    test = _load(args, args.test)
    given = _resolve(train, _names(args.given, "--given"), "--given")
    _resolve(train, args.response, "--response")
    predictor = fit(train, given, args.response, seed=args.seed)
    cm = predict_and_score(predictor, test)
    pr.kv("rows_scored", cm.total)
    pr.kv("accuracy", cm.accuracy())
    pr.matrix("confusion_counts", cm.counts.astype(float), cm.labels, cm.labels)
    pr.matrix("confusion_rates", cm.row_normalized, cm.labels, cm.labels)
    return 0


def _cmd_bootstrap(args) -> int:
    ds = _load(args)
    pr = _printer(args)
    if args.stat != "reduction":
        raise UsageError(f"--stat: unknown statistic {args.stat!r}")
    if not args.response or not args.subset:
        raise UsageError("bootstrap --stat reduction requires --response and --subset")
    _resolve(ds, args.response, "--response")
    subset = _resolve(ds, _names(args.subset, "--subset"), "--subset")
    full = (
        _resolve(ds, _names(args.full, "--full"), "--full")
        if args.full
        else [n for n in ds.names if n != ds.variable(args.response).name]
    )
    spec = _weights_spec(args.weights, pr)
    statistic = make_reduction_statistic(args.response, subset, full, spec)
    stratify = args.stratify_by if args.stratify_by else args.response
    _resolve(ds, stratify, "--stratify-by")
    summary = bootstrap(
        ds, statistic,
        iterations=args.iterations, sample_size=args.sample_size,
        seed=args.seed, stratify_by=stratify, confidence=args.confidence,
    )
    pr.kv("statistic", "reduction")
    pr.kv("subset", ",".join(subset))
    pr.kv("full_set", ",".join(full))
    pr.kv("point_estimate", summary.point_estimate)
    pr.kv("mean", summary.mean)
    pr.kv("ci_low", summary.ci_low)
    pr.kv("ci_high", summary.ci_high)
    pr.kv("confidence", summary.confidence)
    pr.kv("iterations", summary.iterations)
    pr.kv("failures", summary.failures)
    pr.kv("sample_size", summary.sample_size)
    pr.kv("stratified_by", summary.stratified_by)
    pr.kv("seed", summary.seed)
    return 0


def _cmd_simulate(args) -> int:
    if args.scenario != "flu":
        raise UsageError(f"unknown scenario {args.scenario!r}; available: flu")
    config = FluScenarioConfig(
        n=args.n, seed=args.seed,
        flip_prob=args.flip_prob, s5_prob=args.s5_prob,
        one_sided_noise=not args.symmetric_noise,
    )
    ds = generate_flu(config)
    with open(args.output, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh, delimiter=args.delimiter)
        writer.writerow(COLUMN_NAMES)
        columns = [ds.codes[ds.index_of(n)] for n in COLUMN_NAMES]
        levels = [ds.variable(n).levels for n in COLUMN_NAMES]
        for r in range(ds.n_rows):
            writer.writerow([levels[j][columns[j][r]] for j in range(len(columns))])
    print(f"wrote {ds.n_rows} rows to {args.output} (seed={args.seed})")
    return 0


# -- parser ------------------------------------------------------------------


def build_parser() -> _Parser:
    parser = _Parser(prog="nomassoc", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("inspect", help="describe a delimited file")
    _add_io_flags(p)
    _add_output_flags(p)
    p.set_defaults(func=_cmd_inspect)

    for name, handler, needs_weights in (
        ("matrix", _cmd_matrix, False),
        ("vector", _cmd_vector, False),
        ("tau", _cmd_tau, True),
    ):
        p = sub.add_parser(name, help=f"print the association {name}")
        _add_io_flags(p)
        _add_output_flags(p)
        p.add_argument("--response", required=True)
        p.add_argument("--given", required=True,
                       help="comma-separated explanatory variables")
        if needs_weights:
            p.add_argument("--weights", default="gk",
                           help="gk|equal|invprob|file:<path>")
        p.set_defaults(func=handler)

    p = sub.add_parser("select", help="greedy basis selection")
    p.add_argument("mode", choices=("supervised", "structural"))
    _add_io_flags(p)
    _add_output_flags(p)
    p.add_argument("--response", default=None)
    p.add_argument("--candidates", default=None,
                   help="comma-separated candidates (default: all)")
    p.add_argument("--weights", default="gk")
    p.add_argument("--epsilon", type=float, default=1e-9)
    p.add_argument("--max-vars", type=int, default=None)
    p.add_argument("--max-cells", type=int, default=10_000)
    p.add_argument("--threads", type=int, default=None,
                   help="evaluation workers (or set NOMASSOC_THREADS)")
    p.set_defaults(func=_cmd_select)

    p = sub.add_parser("equiv", help="pairwise equivalence of two variables")
    _add_io_flags(p)
    _add_output_flags(p)
    p.add_argument("--x1", required=True)
    p.add_argument("--x2", required=True)
    p.add_argument("--response", required=True)
    p.add_argument("--level", default=None,
                   help="1|2|2prime|3|4|5 (default: scan the hierarchy)")
    p.add_argument("--tol", type=float, default=1e-9)
    p.add_argument("--weights", default=None)
    p.set_defaults(func=_cmd_equiv)

    p = sub.add_parser("predict",
                       help="fit on train, score proportional predictions on test")
    p.add_argument("--train", required=True)
    p.add_argument("--test", required=True)
    _add_io_flags(p, with_file=False)
    _add_output_flags(p)
    p.add_argument("--response", required=True)
    p.add_argument("--given", required=True)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=_cmd_predict)

    p = sub.add_parser("bootstrap", help="stratified bootstrap of a statistic")
    _add_io_flags(p)
    _add_output_flags(p)
    p.add_argument("--stat", default="reduction")
    p.add_argument("--response", required=True)
    p.add_argument("--subset", required=True)
    p.add_argument("--full", default=None)
    p.add_argument("--weights", default="gk")
    p.add_argument("-B", "--iterations", type=int, default=1000)
    p.add_argument("-n", "--sample-size", type=int, default=500)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--confidence", type=float, default=0.95)
    p.add_argument("--stratify-by", default=None,
                   help="stratum variable (default: the response)")
    p.set_defaults(func=_cmd_bootstrap)

    p = sub.add_parser("simulate", help="write a synthetic scenario file")
    p.add_argument("scenario", help="scenario name (flu)")
    p.add_argument("-n", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--flip-prob", type=float, default=0.10)
    p.add_argument("--s5-prob", type=float, default=0.8)
    p.add_argument("--symmetric-noise", action="store_true",
                   help="also corrupt negative results")
    p.set_defaults(func=_cmd_simulate)

    return parser


def dispatch(argv) -> int:
    """Run one CLI invocation; returns the process exit code."""
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except SystemExit as exc:  # --help/--version
        return int(exc.code or 0)
    try:
        return args.func(args) or 0
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return 1
    except NomassocError as exc:
        print(f"data error: {exc}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(dispatch(sys.argv[1:]))

"""Command-line interface.

Subcommands:

- ``compute``: interval estimates per condition for chosen methods
- ``diagnose``: ANOVA table, variance summaries, circularity advisory
- ``posterior-prob``: modified (and optionally Gibbs-based unconditional)
  posterior probability of an interval for one condition mean
- ``simulate``: draw a synthetic dataset from a TOML simulation spec
- ``plot``: grouped error-bar SVG for one or two methods

Inputs starting with ``bundled:`` resolve to the data files shipped with the
package.  ``WSINT_THREADS`` optionally caps how many worker threads the
per-condition computations may use; unset means sequential.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path
from typing import Callable, Sequence

from . import diagnostics, intervals, io, posterior
from .errors import WsintError
from .estimate import IntervalEstimate
from .plotting import emit_plot
from .summary import RepeatedMeasuresTable, standardize, summarize

METHOD_KEYS = ("between", "lm", "hdi", "hetero", "large", "cm")

_DF_CHOICES = {
    "n-minus-1": intervals.DfChoice.N_MINUS_1,
    "c-times-n-minus-1": intervals.DfChoice.C_TIMES_N_MINUS_1,
    "interaction": intervals.DfChoice.INTERACTION,
}

_POSTERIOR_CHOICES = {
    "jeffreys": (posterior.Model.HOMOSCEDASTIC, posterior.Prior.JEFFREYS),
    "lm-improper": (posterior.Model.HOMOSCEDASTIC, posterior.Prior.LOFTUS_MASSON_IMPROPER),
    "per-condition": (posterior.Model.HETEROSCEDASTIC, posterior.Prior.PER_CONDITION_JEFFREYS),
}


def _level(text: str) -> float:
    try:
        value = float(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a number: {text!r}")
    if not 0.0 < value < 1.0:
        raise argparse.ArgumentTypeError(f"level must be in (0, 1), got {value}")
    return value


def _methods(text: str) -> list[str]:
    keys = [k.strip() for k in text.split(",") if k.strip()]
    bad = [k for k in keys if k not in METHOD_KEYS]
    if bad:
        raise argparse.ArgumentTypeError(
            f"unknown methods {bad}; choose from {', '.join(METHOD_KEYS)}"
        )
    if not keys:
        raise argparse.ArgumentTypeError("need at least one method")
    return keys


def _resolve_input(raw: str) -> Path:
    if raw.startswith("bundled:"):
        return io.bundled_path(raw[len("bundled:"):])
    return Path(raw)


def _add_dataset_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--input", required=True, help="dataset path, or bundled:<name>")
    p.add_argument("--layout", choices=["wide", "long"], default="wide")
    p.add_argument("--subject-column", default="subject")
    p.add_argument("--condition-column", default="condition")
    p.add_argument("--value-column", default="value")


def _load_table(args: argparse.Namespace) -> RepeatedMeasuresTable:
    spec = io.DatasetSpec(
        path=_resolve_input(args.input),
        layout=io.Layout(args.layout),
        subject_column=args.subject_column,
        condition_column=args.condition_column,
        value_column=args.value_column,
    )
    return io.load_dataset(spec)


def _max_workers() -> int:
    raw = os.environ.get("WSINT_THREADS")
    if raw is None:
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise WsintError(f"WSINT_THREADS must be a positive integer, got {raw!r}") from None
    if value < 1:
        raise WsintError(f"WSINT_THREADS must be a positive integer, got {value}")
    return value


def _map_conditions(fn: Callable[[int], IntervalEstimate], n_conditions: int) -> list[IntervalEstimate]:
    workers = min(_max_workers(), n_conditions)
    if workers <= 1:
        return [fn(j) for j in range(n_conditions)]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, range(n_conditions)))


def _compute_method(
    key: str,
    table: RepeatedMeasuresTable,
    level: float,
    df_choice: intervals.DfChoice,
    morey_correction: bool,
) -> list[IntervalEstimate]:
    if key in ("hetero", "cm"):
        std = standardize(table)
        if key == "hetero":
            fn = lambda j: intervals.heteroscedastic_hdi(std, j, level)
        else:
            fn = lambda j: intervals.cousineau_morey_interval(
                std, j, level, df_choice, morey_correction
            )
    else:
        stats = summarize(table)
        fn = {
            "between": lambda j: intervals.between_subject_ci(stats, j, level),
            "lm": lambda j: intervals.loftus_masson_ci(stats, j, level),
            "hdi": lambda j: intervals.within_subject_hdi(stats, j, level),
            "large": lambda j: intervals.nathoo_masson_hdi(stats, j, level),
        }[key]
    return _map_conditions(fn, table.n_conditions)


def _interval_rows(
    table: RepeatedMeasuresTable, method_keys: Sequence[str], per_method: dict[str, list[IntervalEstimate]]
) -> list[dict]:
    rows = []
    for key in method_keys:
        for j, est in enumerate(per_method[key]):
            rows.append(
                {
                    "method": est.method.value,
                    "condition": table.condition_labels[j],
                    "center": est.center,
                    "half_width": est.half_width,
                    "lower": est.lower,
                    "upper": est.upper,
                    "level": est.level,
                    "df": est.df_label,
                }
            )
    return rows


def _render_compute_text(rows: list[dict]) -> str:
    headers = ["method", "condition", "mean", "width", "interval", "df"]
    cells = []
    for r in rows:
        cells.append(
            [
                r["method"],
                r["condition"],
                f"{r['center']:.2f}",
                f"±{r['half_width']:.2f}",
                f"[{r['lower']:.2f}, {r['upper']:.2f}]",
                str(r["df"]),
            ]
        )
    widths = [max(len(h), *(len(row[i]) for row in cells)) if cells else len(h)
              for i, h in enumerate(headers)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    for row in cells:
        lines.append("  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip())
    return "\n".join(lines)


def _cmd_compute(args: argparse.Namespace) -> int:
    table = _load_table(args)
    per_method = {
        key: _compute_method(key, table, args.level, _DF_CHOICES[args.df_choice], args.morey_correction)
        for key in args.methods
    }
    rows = _interval_rows(table, args.methods, per_method)
    if args.output == "json":
        print(json.dumps(rows, indent=2))
    else:
        print(_render_compute_text(rows))
    return 0


def _render_diagnose_text(
    table: RepeatedMeasuresTable,
    anova: diagnostics.AnovaTable,
    report: diagnostics.CircularityReport,
) -> str:
    lines = ["ANOVA", f"{'source':<12}{'SS':>16}{'df':>6}{'MS':>16}{'F':>10}"]
    for row in anova.rows:
        ms = f"{row.ms:.2f}" if row.ms is not None else "-"
        f = f"{row.f:.2f}" if row.f is not None else "-"
        lines.append(f"{row.source.value:<12}{row.ss:>16.2f}{row.df:>6}{ms:>16}{f:>10}")
    lines.append("")
    lines.append("condition variances (ddof=1)")
    for label, v in zip(table.condition_labels, report.condition_variances):
        lines.append(f"  {label}: {v:.4f}")
    lines.append("pairwise difference-score variances")
    for (a, b), v in report.pairwise_diff_variances.items():
        lines.append(f"  {a} vs {b}: {v:.4f}")
    lines.append(f"max/min difference-variance ratio: {report.max_min_diff_variance_ratio:.3f}")
    lines.append(f"max/min condition-variance ratio:  {report.max_min_condition_variance_ratio:.3f}")
    lines.append(f"threshold: {report.ratio_threshold:g}")
    lines.append(f"advisory: {report.advisory.value}")
    return "\n".join(lines)


def _cmd_diagnose(args: argparse.Namespace) -> int:
    table = _load_table(args)
    stats = summarize(table)
    anova = diagnostics.anova_table(stats)
    report = diagnostics.circularity_report(table, args.ratio_threshold)
    if args.output == "json":
        doc = {
            "anova": [
                {"source": r.source.value, "ss": r.ss, "df": r.df, "ms": r.ms, "f": r.f}
                for r in anova.rows
            ],
            "condition_variances": dict(zip(table.condition_labels, report.condition_variances)),
            "pairwise_diff_variances": [
                {"conditions": list(pair), "variance": v}
                for pair, v in report.pairwise_diff_variances.items()
            ],
            "max_min_diff_variance_ratio": report.max_min_diff_variance_ratio,
            "max_min_condition_variance_ratio": report.max_min_condition_variance_ratio,
            "ratio_threshold": report.ratio_threshold,
            "advisory": report.advisory.value,
        }
        print(json.dumps(doc, indent=2))
    else:
        print(_render_diagnose_text(table, anova, report))
    return 0


def _cmd_posterior_prob(args: argparse.Namespace) -> int:
    table = _load_table(args)
    j = table.condition_index(args.condition)
    model, prior = _POSTERIOR_CHOICES[args.posterior]
    post = posterior.conditional_posterior(table, model, prior)
    if (args.lower is None) != (args.upper is None):
        raise WsintError("--lower and --upper must be given together")
    if args.lower is not None:
        if args.upper < args.lower:
            raise WsintError(f"--upper {args.upper} is below --lower {args.lower}")
        bounds: posterior.Bounds = (args.lower, args.upper)
        source = "explicit"
    else:
        est = _compute_method(
            args.interval_method, table, args.level,
            _DF_CHOICES[args.df_choice], args.morey_correction,
        )[j]
        bounds = est
        source = est.method.value
    lo, hi = (bounds.lower, bounds.upper) if isinstance(bounds, IntervalEstimate) else bounds
    prob = posterior.modified_posterior_probability(post, j, bounds)
    doc = {
        "condition": args.condition,
        "interval": source,
        "lower": lo,
        "upper": hi,
        "level": args.level,
        "posterior": args.posterior,
        "modified_probability": prob,
    }
    if args.unconditional:
        cfg = posterior.GibbsConfig(
            iterations=args.iterations, burn_in=args.burn_in, seed=args.seed
        )
        unc = posterior.unconditional_posterior_probability(table, j, bounds, cfg)
        doc["unconditional_probability"] = unc.estimate
        doc["unconditional_se"] = unc.standard_error
        doc["gibbs_draws"] = unc.n_draws
    if args.output == "json":
        print(json.dumps(doc, indent=2))
    else:
        lines = [
            f"condition {args.condition}: interval [{lo:.6g}, {hi:.6g}] ({source})",
            f"modified posterior probability ({args.posterior}): {prob:.6f}",
        ]
        if args.unconditional:
            lines.append(
                f"unconditional posterior probability: {doc['unconditional_probability']:.6f} "
                f"(MC se {doc['unconditional_se']:.2g}, {doc['gibbs_draws']} draws)"
            )
        print("\n".join(lines))
    return 0


def _cmd_simulate(args: argparse.Namespace) -> int:
    spec_path = _resolve_input(args.spec)
    spec = io.load_simspec(spec_path, seed_override=args.seed)
    table = io.simulate(spec)
    text = io.render_wide(table)
    if args.output == "-":
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text, encoding="utf-8")
    return 0


def _cmd_plot(args: argparse.Namespace) -> int:
    table = _load_table(args)
    if not 1 <= len(args.methods) <= 2:
        raise WsintError(f"plot takes 1 or 2 methods, got {len(args.methods)}")
    series = []
    for key in args.methods:
        ests = _compute_method(
            key, table, args.level, _DF_CHOICES[args.df_choice], args.morey_correction
        )
        series.append((ests[0].method.value, ests))
    svg, data = emit_plot(series, table.condition_labels)
    out = Path(args.output)
    out.write_text(svg, encoding="utf-8")
    data_path = out.with_suffix(".csv")
    data_path.write_text(data, encoding="utf-8")
    print(f"wrote {out} and {data_path}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wsint",
        description="Within-subject interval estimates for repeated-measures data",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_compute = sub.add_parser("compute", help="interval estimates per condition")
    _add_dataset_args(p_compute)
    p_compute.add_argument(
        "--methods", type=_methods, default=["between", "lm", "hdi"],
        help=f"comma-separated subset of: {', '.join(METHOD_KEYS)}",
    )
    p_compute.add_argument("--level", type=_level, default=0.95)
    p_compute.add_argument("--output", choices=["table", "json"], default="table")
    p_compute.add_argument("--morey-correction", action="store_true")
    p_compute.add_argument("--df-choice", choices=sorted(_DF_CHOICES), default="n-minus-1")
    p_compute.set_defaults(func=_cmd_compute)

    p_diag = sub.add_parser("diagnose", help="ANOVA and circularity advisory")
    _add_dataset_args(p_diag)
    p_diag.add_argument("--ratio-threshold", type=float, default=3.0)
    p_diag.add_argument("--output", choices=["table", "json"], default="table")
    p_diag.set_defaults(func=_cmd_diagnose)

    p_prob = sub.add_parser(
        "posterior-prob", help="posterior probability of an interval for one condition"
    )
    _add_dataset_args(p_prob)
    p_prob.add_argument("--condition", required=True, help="condition label")
    p_prob.add_argument(
        "--interval-method", dest="interval_method", choices=list(METHOD_KEYS), default="lm"
    )
    p_prob.add_argument("--lower", type=float, default=None, help="explicit interval bound")
    p_prob.add_argument("--upper", type=float, default=None, help="explicit interval bound")
    p_prob.add_argument("--level", type=_level, default=0.95)
    p_prob.add_argument(
        "--posterior", choices=sorted(_POSTERIOR_CHOICES), default="jeffreys"
    )
    p_prob.add_argument("--morey-correction", action="store_true")
    p_prob.add_argument("--df-choice", choices=sorted(_DF_CHOICES), default="n-minus-1")
    p_prob.add_argument("--unconditional", action="store_true", help="also run the Gibbs sampler")
    p_prob.add_argument("--iterations", type=int, default=5000)
    p_prob.add_argument("--burn-in", dest="burn_in", type=int, default=1000)
    p_prob.add_argument("--seed", type=int, default=0)
    p_prob.add_argument("--output", choices=["table", "json"], default="table")
    p_prob.set_defaults(func=_cmd_posterior_prob)

    p_sim = sub.add_parser("simulate", help="draw a dataset from a TOML simulation spec")
    p_sim.add_argument("--spec", required=True, help="TOML path, or bundled:<name>")
    p_sim.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p_sim.add_argument("--output", default="-", help="output path, or - for stdout")
    p_sim.set_defaults(func=_cmd_simulate)

    p_plot = sub.add_parser("plot", help="grouped error-bar SVG")
    _add_dataset_args(p_plot)
    p_plot.add_argument(
        "--methods", type=_methods, default=["hdi", "hetero"],
        help="1 or 2 methods, comma-separated",
    )
    p_plot.add_argument("--level", type=_level, default=0.95)
    p_plot.add_argument("--output", default="intervals.svg", help="SVG output path")
    p_plot.add_argument("--morey-correction", action="store_true")
    p_plot.add_argument("--df-choice", choices=sorted(_DF_CHOICES), default="n-minus-1")
    p_plot.set_defaults(func=_cmd_plot)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except WsintError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, IndexError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

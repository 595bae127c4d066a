"""Command-line interface: encode tables, mine rules, benchmark scaling,
and generate synthetic demo data.

Exit codes: 0 success, 2 usage or configuration error, 3 data error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict, dataclass

from .datasets import save_tables, synthetic_tables
from .engine import MiningConfig, Rule, RuleSet, mine, mine_negative
from .errors import ConfigError, DataError
from .metrics import CriteriaWeights
from .preprocess import (
    PartitionedDatabase,
    database_to_dict,
    decode,
    preprocess_csv,
    replicate,
)


@dataclass
class RunReport:
    """What a mining run did and how long it took."""

    dataset: str
    records: int
    partition_sizes: list[int]
    threads: int
    preprocess_seconds: float
    mine_seconds: float
    positive_counts: list[int]
    negative_counts: list[int]


def _config_dict(config: MiningConfig) -> dict:
    return {
        "min_corr": config.min_corr,
        "corr_stop": config.corr_stop,
        "min_f_all": config.min_f_all,
        "neg_corr": config.neg_corr,
        "weights": list(config.weights.as_tuple()),
        "max_premise_len": config.max_premise_len,
    }


def _parse_weights(text: str) -> CriteriaWeights:
    parts = text.split(",")
    if len(parts) != 4:
        raise ConfigError("--weights expects four comma-separated numbers")
    try:
        values = [float(p) for p in parts]
    except ValueError as exc:
        raise ConfigError(f"--weights expects numbers, got {text!r}") from exc
    return CriteriaWeights(*values)


def _build_config(args: argparse.Namespace) -> MiningConfig:
    weights = _parse_weights(args.weights) if args.weights else CriteriaWeights()
    return MiningConfig(
        min_corr=args.min_corr,
        corr_stop=args.corr_stop,
        min_f_all=args.min_freq,
        weights=weights,
        neg_corr=args.neg_corr,
        max_premise_len=args.max_premise_len,
    )


def _add_input_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--db", required=True, help="CSV table path")
    parser.add_argument("--dbd", required=True, help="JSON description path")
    parser.add_argument(
        "--skip-missing",
        action="store_true",
        help="drop rows with missing cells instead of failing",
    )


def _add_mining_args(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--min-corr", type=float, default=0.35)
    parser.add_argument("--corr-stop", type=float, default=1.0)
    parser.add_argument("--min-freq", type=float, default=0.01, help="overall frequency floor")
    parser.add_argument("--neg-corr", type=float, default=-0.35)
    parser.add_argument("--weights", default=None, help="four comma-separated criteria weights")
    parser.add_argument("--max-premise-len", type=int, default=None)
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--seed", type=int, default=0, help="recorded only; mining is deterministic")


def _rule_json(rule: Rule, pdb: PartitionedDatabase) -> dict:
    return {
        "premise": decode(rule.premise, pdb.catalog),
        "goal": pdb.goal_labels[rule.goal],
        "sup_k": rule.sup_k,
        "sup": rule.sup,
        "f_g": rule.metrics.f_g,
        "f_all": rule.metrics.f_all,
        "conf": rule.metrics.confidence,
        "lift": rule.metrics.lift,
        "corr": rule.metrics.correlation,
        "q": rule.metrics.quality,
        "final": rule.final,
        "negative": rule.negative,
    }


def _rule_head(rule: Rule, pdb: PartitionedDatabase) -> str:
    premise = ",".join(decode(rule.premise, pdb.catalog))
    goal = pdb.goal_labels[rule.goal]
    return f"{premise} => {'not ' if rule.negative else ''}{goal}"


def format_rules_table(ruleset: RuleSet, pdb: PartitionedDatabase) -> str:
    header = (
        f"{'rule':<44} {'sup_k':>7} {'sup':>7} "
        f"{'f_g':>6} {'f_all':>6} {'conf':>6} {'lift':>6} {'corr':>7} {'q':>7} final"
    )
    lines = [header, "-" * len(header)]
    for rule in ruleset.all_positive() + ruleset.all_negative():
        m = rule.metrics
        lines.append(
            f"{_rule_head(rule, pdb):<44} {rule.sup_k:>7} {rule.sup:>7} "
            f"{m.f_g:>6.3f} {m.f_all:>6.3f} {m.confidence:>6.3f} {m.lift:>6.3f} "
            f"{m.correlation:>7.3f} {m.quality:>7.3f} {'yes' if rule.final else 'no'}"
        )
    return "\n".join(lines)


def format_rules_csv(ruleset: RuleSet, pdb: PartitionedDatabase) -> str:
    import csv as _csv
    import io

    buffer = io.StringIO()
    writer = _csv.writer(buffer, lineterminator="\n")
    writer.writerow(
        ["premise", "goal", "premise_len", "sup_k", "sup",
         "f_g", "f_all", "conf", "lift", "corr", "q", "final", "negative"]
    )
    for rule in ruleset.all_positive() + ruleset.all_negative():
        m = rule.metrics
        writer.writerow(
            [
                "+".join(decode(rule.premise, pdb.catalog)),
                pdb.goal_labels[rule.goal],
                rule.premise_len,
                rule.sup_k,
                rule.sup,
                f"{m.f_g:.6f}",
                f"{m.f_all:.6f}",
                f"{m.confidence:.6f}",
                f"{m.lift:.6f}",
                f"{m.correlation:.6f}",
                f"{m.quality:.6f}",
                int(rule.final),
                int(rule.negative),
            ]
        )
    return buffer.getvalue()


def mining_output_json(
    ruleset: RuleSet, pdb: PartitionedDatabase, config: MiningConfig, report: RunReport
) -> dict:
    return {
        "config": _config_dict(config),
        "goals": list(pdb.goal_labels),
        "catalog": database_to_dict(pdb)["catalog"],
        "rules": [
            _rule_json(rule, pdb)
            for rule in ruleset.all_positive() + ruleset.all_negative()
        ],
        "report": asdict(report),
    }


def _report_text(report: RunReport) -> str:
    return (
        f"# dataset={report.dataset} records={report.records} "
        f"partitions={report.partition_sizes} threads={report.threads}\n"
        f"# preprocess_seconds={report.preprocess_seconds:.3f} "
        f"mine_seconds={report.mine_seconds:.3f}\n"
        f"# rules: positive={report.positive_counts} negative={report.negative_counts}"
    )


def cmd_preprocess(args: argparse.Namespace) -> int:
    started = time.perf_counter()
    pdb = preprocess_csv(args.db, args.dbd, skip_missing=args.skip_missing)
    elapsed = time.perf_counter() - started
    # without --out the dump goes to stdout, so the report moves to stderr
    report_stream = sys.stdout if args.out else sys.stderr
    print(f"{'idx':>4} {'name':<8} {'column':<14} meaning", file=report_stream)
    for prop in pdb.catalog:
        print(
            f"{prop.index:>4} {prop.name:<8} {prop.column:<14} {prop.full_name}",
            file=report_stream,
        )
    sizes = ", ".join(
        f"{label}={size}" for label, size in zip(pdb.goal_labels, pdb.partition_sizes)
    )
    print(f"partitions: {sizes} (total {pdb.total})", file=report_stream)
    if pdb.skipped_rows:
        print(f"skipped rows: {pdb.skipped_rows}", file=report_stream)
    print(f"preprocess_seconds={elapsed:.3f}", file=report_stream)
    if args.out:
        from .preprocess import dump_database

        dump_database(pdb, args.out)
        print(f"encoded database written to {args.out}", file=report_stream)
    else:
        json.dump(database_to_dict(pdb), sys.stdout, indent=2)
        print()
    return 0


def cmd_mine(args: argparse.Namespace) -> int:
    config = _build_config(args)
    started = time.perf_counter()
    pdb = preprocess_csv(args.db, args.dbd, skip_missing=args.skip_missing)
    preprocess_seconds = time.perf_counter() - started

    started = time.perf_counter()
    ruleset = mine(pdb, config, threads=args.threads)
    if args.negative:
        ruleset = ruleset.with_negative(mine_negative(pdb, config, threads=args.threads))
    mine_seconds = time.perf_counter() - started

    report = RunReport(
        dataset=args.db,
        records=pdb.total,
        partition_sizes=list(pdb.partition_sizes),
        threads=args.threads,
        preprocess_seconds=preprocess_seconds,
        mine_seconds=mine_seconds,
        positive_counts=ruleset.positive_counts(),
        negative_counts=ruleset.negative_counts(),
    )
    if args.format == "json":
        json.dump(mining_output_json(ruleset, pdb, config, report), sys.stdout, indent=2)
        print()
    elif args.format == "csv":
        sys.stdout.write(format_rules_csv(ruleset, pdb))
        print(_report_text(report), file=sys.stderr)
    else:
        print(format_rules_table(ruleset, pdb))
        print(_report_text(report))
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    config = _build_config(args)
    try:
        factors = [int(f) for f in args.factors.split(",")]
    except ValueError as exc:
        raise ConfigError(f"--factors expects comma-separated integers, got {args.factors!r}") from exc
    if not factors or any(f < 1 for f in factors):
        raise ConfigError("--factors expects positive integers")
    base = preprocess_csv(args.db, args.dbd, skip_missing=args.skip_missing)
    base_rules = mine(base, config, threads=args.threads)

    def criteria_view(ruleset: RuleSet) -> list[tuple]:
        return [
            (r.goal, r.premise, r.metrics, r.final) for r in ruleset.all_positive()
        ]

    base_view = criteria_view(base_rules)
    print(f"{'factor':>7} {'records':>9} {'seconds':>8} {'rules':>6} invariant")
    ok = True
    for factor in factors:
        scaled = replicate(base, factor)
        started = time.perf_counter()
        ruleset = mine(scaled, config, threads=args.threads)
        seconds = time.perf_counter() - started
        counts_scaled = all(
            r.sup_k == b.sup_k * factor and r.sup == b.sup * factor
            for r, b in zip(ruleset.all_positive(), base_rules.all_positive())
        )
        invariant = criteria_view(ruleset) == base_view and counts_scaled
        ok = ok and invariant
        print(
            f"{factor:>7} {scaled.total:>9} {seconds:>8.3f} "
            f"{len(ruleset.all_positive()):>6} {'yes' if invariant else 'NO'}"
        )
    if not ok:
        print("rule criteria changed under duplication", file=sys.stderr)
        return 1
    return 0


def cmd_synth(args: argparse.Namespace) -> int:
    try:
        rows, description = synthetic_tables(
            rows=args.rows,
            continuous=args.continuous,
            categorical=args.categorical,
            classes=args.classes,
            goals=args.goals,
            seed=args.seed,
        )
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc
    save_tables(rows, description, args.out_db, args.out_dbd)
    print(f"wrote {len(rows)} rows to {args.out_db} and description to {args.out_dbd}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="goalrules",
        description="Mine goal-directed association rules from relational tables.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("preprocess", help="encode a table and report the property catalog")
    _add_input_args(p)
    p.add_argument("--out", default=None, help="write the encoded-database JSON dump here")
    p.set_defaults(func=cmd_preprocess)

    p = sub.add_parser("mine", help="mine rules from a table")
    _add_input_args(p)
    _add_mining_args(p)
    p.add_argument("--negative", action="store_true", help="also report negative rules")
    p.add_argument("--format", choices=("table", "json", "csv"), default="table")
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("bench", help="duplication-scaling benchmark")
    _add_input_args(p)
    _add_mining_args(p)
    p.add_argument("--factors", default="10,100", help="comma-separated duplication factors")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("synth", help="generate a synthetic table and description")
    p.add_argument("--rows", type=int, default=300)
    p.add_argument("--continuous", type=int, default=3)
    p.add_argument("--categorical", type=int, default=1)
    p.add_argument("--classes", type=int, default=3)
    p.add_argument("--goals", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out-db", required=True)
    p.add_argument("--out-dbd", required=True)
    p.set_defaults(func=cmd_synth)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except DataError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


def run() -> None:
    sys.exit(main())

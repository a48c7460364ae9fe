"""Command-line front end.

Subcommands: ``tables`` (size-model CSV, including the published evaluation
tables), ``fpr`` (empirical false-positive measurement), ``oracle``
(variant-vs-reference equivalence experiment), ``analyze`` (dump
characterization and variant recommendation), ``bench`` (lookup throughput).

Exit codes: 0 success, 1 oracle law violation, 2 usage or parse error.
The default seed comes from the CCNFIB_SEED environment variable.
"""

from __future__ import annotations

import argparse
import contextlib
import csv
import os
import sys
from dataclasses import asdict

from . import experiments
from .dumps import DumpFormatError, parse_dump, prefix_length_histogram, profile, recommend
from .sizemodel import ModelConfig, breakeven_prefix_len, model_sizes, size_difference

SEED_ENV_VAR = "CCNFIB_SEED"

_EVAL_FACES = range(10, 16)
_EVAL_PREFIX_BYTES = 15
_EVAL_FPP = 1e-6


def _default_seed() -> int:
    return int(os.environ.get(SEED_ENV_VAR, "0"))


def _parse_ints(text: str) -> list[int]:
    """Accept '10,11,12' or an inclusive '10:15' range."""
    if ":" in text:
        lo, hi = text.split(":", 1)
        return list(range(int(lo), int(hi) + 1))
    return [int(item) for item in text.split(",")]


@contextlib.contextmanager
def _open_output(path: str | None):
    if path is None or path == "-":
        yield sys.stdout
    else:
        with open(path, "w", encoding="utf-8", newline="") as handle:
            yield handle


def _writer(stream):
    return csv.writer(stream, lineterminator="\n")


# ---------------------------------------------------------------------------
# tables


def _emit_table4(out) -> None:
    w = _writer(out)
    w.writerow(["variant", "N", "F", "N_BF", "L_bytes", "bits"])
    for variant, n in (
        ("FIB", 60),
        ("FIB", 50),
        ("FIB-CBF", 50),
        ("FIB-BF", 60),
        ("FIB-BF", 50),
    ):
        for f in _EVAL_FACES:
            cfg = ModelConfig(n, f, _EVAL_PREFIX_BYTES, _EVAL_FPP)
            report = model_sizes(cfg)
            if variant == "FIB":
                nbf, bits = "", report.fib_bits
            elif variant == "FIB-BF":
                nbf, bits = cfg.capacity, report.fib_bf_bits
            else:
                nbf, bits = cfg.capacity, report.fib_cbf_bits
            w.writerow([variant, n, f, nbf, _EVAL_PREFIX_BYTES, bits])


def _emit_table5(out) -> None:
    w = _writer(out)
    w.writerow(["variant", "F", "bits_difference"])
    for variant, key in (("FIB", "fib"), ("FIB-BF", "fib_bf")):
        for f in _EVAL_FACES:
            high = ModelConfig(60, f, _EVAL_PREFIX_BYTES, _EVAL_FPP)
            low = ModelConfig(50, f, _EVAL_PREFIX_BYTES, _EVAL_FPP)
            w.writerow([variant, f, size_difference(high, low, key)])


def _emit_table6(out) -> None:
    w = _writer(out)
    w.writerow(["variant", "N", "N_BF", "F", "bits"])
    for f in _EVAL_FACES:
        cfg = ModelConfig(50, f, _EVAL_PREFIX_BYTES, _EVAL_FPP)
        w.writerow(["FIB", 50, "", f, model_sizes(cfg).fib_bits])
    for nbf in (25, 10, 5):
        for f in _EVAL_FACES:
            cfg = ModelConfig(50, f, _EVAL_PREFIX_BYTES, _EVAL_FPP, filter_capacity=nbf)
            w.writerow(["FIB-BF", 50, nbf, f, model_sizes(cfg).fib_bf_bits])


def _emit_table7(out) -> None:
    w = _writer(out)
    w.writerow(["variant", "N", "N_BF", "F", "breakeven_bytes"])
    for variant, counting in (("FIB-CBF", True), ("FIB-BF", False)):
        for nbf in (10, 5):
            for f in _EVAL_FACES:
                length = breakeven_prefix_len(50, f, nbf, _EVAL_FPP, counting=counting)
                w.writerow([variant, 50, nbf, f, length])


def _emit_table8(out) -> None:
    w = _writer(out)
    w.writerow(["variant", "N", "F", "N_BF", "L_bytes", "ratio"])
    for n, f, nbf in ((30, 10, 3), (50, 15, 4), (50, 10, 5)):
        for length in (4, 6, 8, 10):
            cfg = ModelConfig(n, f, length, _EVAL_FPP, filter_capacity=nbf)
            ratio = model_sizes(cfg).fib_bf_bits / model_sizes(cfg).fib_bits
            w.writerow(["FIB-BF", n, f, nbf, length, f"{ratio:.3f}"])


_TABLE_EMITTERS = {
    4: _emit_table4,
    5: _emit_table5,
    6: _emit_table6,
    7: _emit_table7,
    8: _emit_table8,
}


def _cmd_tables(args) -> int:
    with _open_output(args.output) as out:
        if args.table is not None:
            _TABLE_EMITTERS[args.table](out)
            return 0
        w = _writer(out)
        w.writerow(["variant", "N", "F", "N_BF", "L_bytes", "bits"])
        capacity = None if args.capacity == "auto" else int(args.capacity)
        for n in _parse_ints(args.prefix_counts):
            for f in _parse_ints(args.faces):
                cfg = ModelConfig(
                    n, f, args.prefix_bytes, args.p_fp, filter_capacity=capacity
                )
                report = model_sizes(cfg)
                rows = (
                    ("FIB", "", report.fib_bits),
                    ("FIB-Hash", "", report.fib_hash_bits),
                    ("FIB-BF", cfg.capacity, report.fib_bf_bits),
                    ("FIB-CBF", cfg.capacity, report.fib_cbf_bits),
                )
                for variant, nbf, bits in rows:
                    w.writerow([variant, n, f, nbf, args.prefix_bytes, bits])
    return 0


# ---------------------------------------------------------------------------
# fpr / oracle / bench


def _emit_report(report, out, as_csv: bool) -> None:
    data = asdict(report)
    if as_csv:
        w = _writer(out)
        w.writerow(data.keys())
        w.writerow(data.values())
    else:
        for key, value in data.items():
            print(f"{key}: {value}", file=out)


def _cmd_fpr(args) -> int:
    report = experiments.measure_fpr(
        kind=args.kind,
        capacity=args.capacity,
        target_fpp=args.p_fp,
        fill=args.capacity if args.fill is None else args.fill,
        probes=args.probes,
        seed=args.seed,
    )
    with _open_output(args.output) as out:
        _emit_report(report, out, args.csv)
    return 0


def _cmd_oracle(args) -> int:
    if args.variant == "hash":
        report = experiments.run_hash_oracle(
            trials=args.trials,
            prefix_count=args.prefix_count,
            face_count=args.face_count,
            seed=args.seed,
        )
    else:
        report = experiments.run_bloom_oracle(
            trials=args.trials,
            prefix_count=args.prefix_count,
            face_count=args.face_count,
            target_fpp=args.p_fp,
            seed=args.seed,
            counting=args.variant == "cbf",
        )
    with _open_output(args.output) as out:
        _emit_report(report, out, args.csv)
        if not report.lawful:
            print(
                f"law violation: {report.violations} of {report.trials} trials",
                file=sys.stderr,
            )
            return 1
    return 0


def _cmd_bench(args) -> int:
    report = experiments.run_bench(
        variant=args.variant,
        prefix_count=args.prefix_count,
        face_count=args.face_count,
        interests=args.interests,
        seed=args.seed,
    )
    with _open_output(args.output) as out:
        _emit_report(report, out, args.csv)
    return 0


# ---------------------------------------------------------------------------
# analyze


def _cmd_analyze(args) -> int:
    try:
        with open(args.dump, "r", encoding="utf-8") as handle:
            text = handle.read()
    except OSError as exc:
        print(f"cannot read {args.dump}: {exc}", file=sys.stderr)
        return 2
    label = os.path.splitext(os.path.basename(args.dump))[0]
    try:
        dump = parse_dump(text, label=label)
    except DumpFormatError as exc:
        print(f"{args.dump}: {exc}", file=sys.stderr)
        return 2
    mapping = profile(dump)
    verdict = recommend(
        mapping, removal_required=args.removal_required, target_fpp=args.p_fp
    )
    histogram = prefix_length_histogram(dump, args.bin_width)
    with _open_output(args.output) as out:
        if args.csv:
            w = _writer(out)
            w.writerow(["metric", "key", "value"])
            w.writerow(["node_label", "", dump.node_label])
            w.writerow(["prefix_count", "", mapping.prefix_count])
            w.writerow(["face_count", "", mapping.face_count])
            w.writerow(["classification", "", mapping.classification])
            for key in sorted(mapping.faces_per_prefix):
                w.writerow(["faces_per_prefix", key, mapping.faces_per_prefix[key]])
            for key in sorted(mapping.prefixes_per_face):
                w.writerow(["prefixes_per_face", key, mapping.prefixes_per_face[key]])
            for key in sorted(histogram):
                w.writerow(["prefix_length_bin", key, histogram[key]])
            w.writerow(["recommendation", "", verdict.variant])
            w.writerow(["rationale", "", verdict.rationale])
        else:
            print(f"node: {dump.node_label}", file=out)
            print(f"prefixes (N): {mapping.prefix_count}", file=out)
            print(f"faces (F): {mapping.face_count}", file=out)
            print(f"classification: {mapping.classification}", file=out)
            print(
                "faces per prefix: "
                + _format_hist(mapping.faces_per_prefix),
                file=out,
            )
            print(
                "prefixes per face: "
                + _format_hist(mapping.prefixes_per_face),
                file=out,
            )
            print(
                f"prefix length histogram (bin {args.bin_width} B): "
                + _format_hist(histogram),
                file=out,
            )
            print(f"recommendation: {verdict.variant}", file=out)
            print(f"rationale: {verdict.rationale}", file=out)
    return 0


def _format_hist(hist: dict[int, int]) -> str:
    if not hist:
        return "(empty)"
    return ", ".join(f"{key}:{hist[key]}" for key in sorted(hist))


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fib",
        description="Memory-efficient FIB structures: size tables, "
        "false-positive measurements, oracle checks, dump analysis.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    tables = sub.add_parser("tables", help="emit size-model CSV")
    tables.add_argument("--table", type=int, choices=sorted(_TABLE_EMITTERS))
    tables.add_argument("--prefix-counts", default="50,60", metavar="N[,N...]")
    tables.add_argument("--faces", default="10:15", metavar="LO:HI|F[,F...]")
    tables.add_argument("--prefix-bytes", type=int, default=_EVAL_PREFIX_BYTES)
    tables.add_argument("--p-fp", type=float, default=_EVAL_FPP)
    tables.add_argument("--capacity", default="auto", metavar="auto|N_BF")
    tables.add_argument("--output", "-o")
    tables.set_defaults(func=_cmd_tables)

    fpr = sub.add_parser("fpr", help="measure a filter's false-positive rate")
    fpr.add_argument("--kind", choices=("bf", "cbf"), default="bf")
    fpr.add_argument("--capacity", type=int, default=2000, metavar="N_BF")
    fpr.add_argument("--p-fp", type=float, default=0.01)
    fpr.add_argument("--fill", type=int, default=None)
    fpr.add_argument("--probes", type=int, default=1_000_000)
    fpr.add_argument("--seed", type=int, default=_default_seed())
    fpr.add_argument("--csv", action="store_true")
    fpr.add_argument("--output", "-o")
    fpr.set_defaults(func=_cmd_fpr)

    oracle = sub.add_parser(
        "oracle", help="compare a variant's lookups against the reference FIB"
    )
    oracle.add_argument("--variant", choices=("hash", "bf", "cbf"), required=True)
    oracle.add_argument("--trials", type=int, default=100_000)
    oracle.add_argument("--prefix-count", type=int, default=50)
    oracle.add_argument("--face-count", type=int, default=10)
    oracle.add_argument("--p-fp", type=float, default=_EVAL_FPP)
    oracle.add_argument("--seed", type=int, default=_default_seed())
    oracle.add_argument("--csv", action="store_true")
    oracle.add_argument("--output", "-o")
    oracle.set_defaults(func=_cmd_oracle)

    analyze = sub.add_parser("analyze", help="characterize a FIB dump file")
    analyze.add_argument("dump")
    analyze.add_argument("--bin-width", type=int, default=1)
    analyze.add_argument("--removal-required", action="store_true")
    analyze.add_argument("--p-fp", type=float, default=_EVAL_FPP)
    analyze.add_argument("--csv", action="store_true")
    analyze.add_argument("--output", "-o")
    analyze.set_defaults(func=_cmd_analyze)

    bench = sub.add_parser("bench", help="measure lookup throughput")
    bench.add_argument(
        "--variant", choices=("reference", "hash", "bf", "cbf"), default="reference"
    )
    bench.add_argument("--prefix-count", type=int, default=50)
    bench.add_argument("--face-count", type=int, default=10)
    bench.add_argument("--interests", type=int, default=100_000)
    bench.add_argument("--seed", type=int, default=_default_seed())
    bench.add_argument("--csv", action="store_true")
    bench.add_argument("--output", "-o")
    bench.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())

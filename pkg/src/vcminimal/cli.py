"""Command-line interface.

Exit codes: 0 success, 1 verification counterexample, 2 validation or
usage error. Machine output is one JSON object per line; ``--pretty``
switches to human-readable tables.
"""
from __future__ import annotations

import argparse
import csv
import json
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

from .cheese import vertex_complexities
from .errors import InexpressibleError, VCMinimalError
from .extractor import extract
from .formats import (
    CSV_COLUMNS,
    ResultRecord,
    dumps_instance,
    dumps_rectangle,
    loads_instance,
    loads_rectangle,
)
from .generators import KINDS, GeneratorSpec, generate, split_seed
from .oracle import BudgetExceeded, OracleBudget, brute_best_rectangle, verify_rectangle

EXIT_OK, EXIT_COUNTEREXAMPLE, EXIT_INVALID = 0, 1, 2


class UsageError(Exception):
    pass


def _read_instance(path):
    return loads_instance(Path(path).read_text())


def _emit(obj):
    print(json.dumps(obj, separators=(",", ":")))


def _spec_from_args(args, kind, left, right, seed) -> GeneratorSpec:
    return GeneratorSpec(
        kind=kind, left=left, right=right, seed=seed, p=args.p, depth=args.depth,
        max_flips=args.max_flips, nonempty=args.nonempty,
    )


def cmd_gen(args) -> int:
    if args.count is None:
        inst = generate(_spec_from_args(args, args.kind, args.left, args.right, args.seed))
        Path(args.out).write_text(dumps_instance(inst))
        return EXIT_OK
    if args.count < 1:
        raise UsageError("--count must be positive")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    width = max(4, len(str(args.count - 1)))
    for i in range(args.count):
        spec = _spec_from_args(args, args.kind, args.left, args.right, split_seed(args.seed, i))
        (out / f"{i:0{width}d}.json").write_text(dumps_instance(generate(spec)))
    return EXIT_OK


def cmd_complexity(args) -> int:
    inst = _read_instance(args.input)
    try:
        values = vertex_complexities(inst)
    except InexpressibleError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    top = max(values, default=0)
    if args.pretty:
        print(f"{'vertex':>8} {'complexity':>10}")
        for a, c in enumerate(values):
            print(f"{a:>8} {c:>10}")
        print(f"max complexity {top}; least valid N = {top + 1}")
    else:
        for a, c in enumerate(values):
            _emit({"vertex": a, "complexity": c})
        _emit({"max_complexity": top, "least_N": top + 1, "bound": inst.bound})
    return EXIT_OK


def run_one(inst, instance_id, check_claims=False, oracle=False, timing=False, budget=None, debug=False):
    """Extract on one instance and build its result record and rectangle."""
    meta = inst.metadata
    start = time.perf_counter_ns() if timing else None
    rect, trace = extract(inst, check_claims=check_claims, debug=debug)
    micros = (time.perf_counter_ns() - start) // 1000 if timing else None
    if not verify_rectangle(inst, rect):
        raise VCMinimalError("extracted rectangle failed verification")
    best = None
    if oracle:
        try:
            best = brute_best_rectangle(inst, budget or OracleBudget.from_env()).min_side
        except BudgetExceeded:
            best = "inconclusive"
    record = ResultRecord(
        instance_id=str(instance_id),
        kind=meta.get("kind", ""),
        seed=meta.get("seed"),
        n_left=inst.left_size,
        n_right=inst.right_size,
        bound_N=inst.bound,
        out_left=len(rect.left),
        out_right=len(rect.right),
        rect_kind=rect.kind,
        branches=trace.branches,
        oracle_minside=best,
        micros=micros,
    )
    return record, rect, trace


def cmd_extract(args) -> int:
    inst = _read_instance(args.input)
    record, rect, trace = run_one(
        inst, Path(args.input).stem, check_claims=args.check_claims, oracle=args.oracle,
        timing=args.timing, debug=args.debug,
    )
    if args.pretty:
        for key, value in record.to_json().items():
            print(f"{key:>15}: {value}")
    else:
        print(record.to_line())
    if args.trace:
        for i, level in enumerate(trace.to_json()):
            _emit({"level": i, **level})
    if args.rect_out:
        Path(args.rect_out).write_text(dumps_rectangle(rect))
    return EXIT_OK


def cmd_verify(args) -> int:
    inst = _read_instance(args.input)
    rect = loads_rectangle(Path(args.rect).read_text(), inst.right_size)
    verdict = verify_rectangle(inst, rect)
    if verdict:
        _emit({"valid": True})
        return EXIT_OK
    _emit({"valid": False, "counterexample": list(verdict.counterexample)})
    return EXIT_COUNTEREXAMPLE


def _parse_list(text, conv, what):
    try:
        items = [conv(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise UsageError(f"bad {what} list {text!r}") from None
    if not items:
        raise UsageError(f"empty {what} list")
    return items


def _bench_row(job):
    index, spec, check_claims, oracle, timing, budget = job
    try:
        inst = generate(spec)
        record, _, _ = run_one(inst, index, check_claims, oracle, timing, budget)
        return record
    except (VCMinimalError, AssertionError) as exc:
        return ResultRecord(
            instance_id=str(index), kind=spec.kind, seed=spec.seed, n_left=spec.left,
            n_right=spec.right, bound_N=0, out_left=0, out_right=0, rect_kind="error",
            branches=(type(exc).__name__,),
        )


def cmd_bench(args) -> int:
    sizes = _parse_list(args.sizes, int, "size")
    kinds = _parse_list(args.kinds, str, "kind")
    for k in kinds:
        if k not in KINDS:
            raise UsageError(f"unknown kind {k!r}")
    if args.trials < 1 or any(s < 1 for s in sizes):
        raise UsageError("--trials and sizes must be positive")
    budget = OracleBudget.from_env()
    jobs, index = [], 0
    for kind in kinds:
        for size in sizes:
            for _ in range(args.trials):
                spec = _spec_from_args(args, kind, size, size, split_seed(args.seed, index))
                jobs.append((index, spec, args.check_claims, not args.no_oracle, args.timing, budget))
                index += 1
    if args.jobs > 1:
        with ProcessPoolExecutor(args.jobs) as pool:
            records = list(pool.map(_bench_row, jobs))
    else:
        records = [_bench_row(j) for j in jobs]
    with open(args.out, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_COLUMNS)
        for r in records:
            writer.writerow(r.to_row())
    failed = sum(not r.guarantee_ok for r in records)
    print(f"{len(records)} rows, {failed} without guarantee", file=sys.stderr)
    return EXIT_OK


def _add_gen_params(p):
    p.add_argument("--p", type=int, default=2, help="branching / digit base")
    p.add_argument("--depth", type=int, default=4)
    p.add_argument("--max-flips", type=int, default=3)
    p.add_argument("--nonempty", action="store_true", help="resample empty neighborhoods")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="vcminimal", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("gen", help="generate instance file(s)")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--left", type=int, required=True)
    g.add_argument("--right", type=int, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--out", required=True, help="file, or directory with --count")
    g.add_argument("--count", type=int)
    _add_gen_params(g)
    g.set_defaults(func=cmd_gen)

    c = sub.add_parser("complexity", help="per-vertex minimal complexity")
    c.add_argument("-i", "--input", required=True)
    c.add_argument("--pretty", action="store_true")
    c.set_defaults(func=cmd_complexity)

    e = sub.add_parser("extract", help="extract a homogeneous rectangle")
    e.add_argument("-i", "--input", required=True)
    e.add_argument("--trace", action="store_true")
    e.add_argument("--check-claims", action="store_true")
    e.add_argument("--oracle", action="store_true")
    e.add_argument("--rect-out")
    e.add_argument("--timing", action="store_true", help="record wall time (non-deterministic)")
    e.add_argument("--debug", action="store_true")
    e.add_argument("--pretty", action="store_true")
    e.set_defaults(func=cmd_extract)

    v = sub.add_parser("verify", help="check a rectangle file against an instance")
    v.add_argument("-i", "--input", required=True)
    v.add_argument("-r", "--rect", required=True)
    v.set_defaults(func=cmd_verify)

    b = sub.add_parser("bench", help="CSV of result records over generated instances")
    b.add_argument("--trials", type=int, required=True)
    b.add_argument("--sizes", required=True, help="comma-separated side sizes")
    b.add_argument("--kinds", default=",".join(KINDS))
    b.add_argument("--seed", type=int, required=True)
    b.add_argument("--out", required=True)
    b.add_argument("--check-claims", action="store_true")
    b.add_argument("--no-oracle", action="store_true")
    b.add_argument("--timing", action="store_true", help="fill the micros column (non-deterministic)")
    b.add_argument("--jobs", type=int, default=1)
    _add_gen_params(b)
    b.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.error(str(exc))
    except (VCMinimalError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())

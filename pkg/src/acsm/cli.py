"""Command-line front end: compare, retrieve, bench, and gen."""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path
from typing import List, Optional

from .core import SimilarityReport, SymbolMatrix
from .ingest import gen_planted_pair, gen_random, quantize, read_matrix_file, render_csv
from .measures import MeasureKind, parse_metric


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="acsm",
        description="Average common submatrix similarity between square symbol matrices.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_measure_flags(p: argparse.ArgumentParser) -> None:
        p.add_argument("--measure", choices=("acsm", "approx", "eacsm"), default="acsm")
        p.add_argument("--alpha", type=int, default=1, help="minimum matched area (default 1)")
        p.add_argument("--interval", type=int, help="sampling step, approx only")
        p.add_argument("--epsilon", type=int, help="odd neighborhood side, eacsm only")
        p.add_argument(
            "--metric",
            help="window distance for eacsm: hamming, mad, or nmad (full names accepted)",
        )
        p.add_argument("--tau", type=float, help="strict distance threshold, eacsm only")
        p.add_argument("--p0", type=float, help="frequency gate threshold, eacsm only")
        p.add_argument("--quantize", type=int, metavar="L", help="requantize inputs to L symbols")
        p.add_argument(
            "--alphabet", type=int, help="alphabet size for CSV inputs (default: inferred)"
        )

    cmp_p = sub.add_parser("compare", help="compare two matrix files")
    cmp_p.add_argument("path_a")
    cmp_p.add_argument("path_b")
    add_measure_flags(cmp_p)
    cmp_p.add_argument("--dump-w", action="store_true", help="include the per-anchor match map")
    cmp_p.add_argument("--output", choices=("json", "plain"), default="json")
    cmp_p.set_defaults(func=cmd_compare)

    ret_p = sub.add_parser("retrieve", help="rank a label-foldered corpus against a query")
    ret_p.add_argument("query")
    ret_p.add_argument("corpus_root")
    ret_p.add_argument("--k", type=int, default=5, help="neighbors to keep (default 5)")
    add_measure_flags(ret_p)
    ret_p.set_defaults(func=cmd_retrieve)

    ben_p = sub.add_parser("bench", help="time the measures on seeded random pairs")
    ben_p.add_argument("--sizes", default="32,64", help="comma separated matrix sides")
    ben_p.add_argument("--epsilons", default="5,9", help="comma separated eacsm neighborhoods")
    ben_p.add_argument("--intervals", default="", help="comma separated approx steps (optional)")
    ben_p.add_argument("--trials", type=int, default=3)
    ben_p.add_argument("--seed", type=int, default=0)
    ben_p.add_argument("--alpha", type=int, default=1)
    ben_p.add_argument("--alphabet", type=int, default=8)
    ben_p.add_argument("--metric", default="hamming")
    ben_p.add_argument("--tau", type=float, default=0.1)
    ben_p.add_argument("--p0", type=float, default=0.0)
    ben_p.set_defaults(func=cmd_bench)

    gen_p = sub.add_parser("gen", help="write seeded random CSV matrices")
    gen_p.add_argument("--n", type=int, required=True)
    gen_p.add_argument("--m", type=int, help="side of the second matrix (default n)")
    gen_p.add_argument("--alphabet", type=int, required=True)
    gen_p.add_argument("--seed", type=int, required=True)
    gen_p.add_argument("--plant", type=int, metavar="K", help="side of a shared planted block")
    gen_p.add_argument("--out", help="output path (single matrix)")
    gen_p.add_argument("--out-a", help="output path for the first of a planted pair")
    gen_p.add_argument("--out-b", help="output path for the second of a planted pair")
    gen_p.set_defaults(func=cmd_gen)

    return parser


def _reject(condition: bool, message: str) -> None:
    if condition:
        raise ValueError(message)


def measure_from_args(args: argparse.Namespace) -> MeasureKind:
    """Build the measure, rejecting flags that do not belong to it."""
    name = args.measure
    if name == "acsm":
        for flag in ("interval", "epsilon", "metric", "tau", "p0"):
            _reject(getattr(args, flag) is not None, f"--{flag} is not valid with --measure acsm")
        return MeasureKind.acsm(args.alpha)
    if name == "approx":
        _reject(args.interval is None, "--measure approx requires --interval")
        for flag in ("epsilon", "metric", "tau", "p0"):
            _reject(getattr(args, flag) is not None, f"--{flag} is not valid with --measure approx")
        return MeasureKind.approx(args.alpha, args.interval)
    _reject(args.interval is not None, "--interval is not valid with --measure eacsm")
    for flag in ("epsilon", "metric", "tau"):
        _reject(getattr(args, flag) is None, f"--measure eacsm requires --{flag}")
    return MeasureKind.eacsm(
        args.alpha,
        args.epsilon,
        parse_metric(args.metric),
        args.tau,
        args.p0 if args.p0 is not None else 0.0,
    )


def _load_pair(args: argparse.Namespace) -> tuple:
    a = read_matrix_file(args.path_a, args.alphabet)
    b = read_matrix_file(args.path_b, args.alphabet)
    a, b = _harmonize(a, b)
    if args.quantize is not None:
        a = quantize(a, args.quantize)
        b = quantize(b, args.quantize)
    return a, b


def _harmonize(a: SymbolMatrix, b: SymbolMatrix) -> tuple:
    # Inferred alphabets rarely agree between independent files; reading both
    # against the larger one changes no symbol and makes them comparable.
    common = max(a.alphabet_size, b.alphabet_size)
    if a.alphabet_size != common:
        a = a.with_alphabet(common)
    if b.alphabet_size != common:
        b = b.with_alphabet(common)
    return a, b


def _w_map_payload(report: SimilarityReport) -> List[List[dict]]:
    rows = []
    for row in report.w_map:
        cells = []
        for cell in row:
            if cell.anchor is None:
                cells.append({"w": cell.w, "k": None, "h": None, "s": None})
            else:
                k, h, s = cell.anchor
                cells.append({"w": cell.w, "k": k, "h": h, "s": s})
        rows.append(cells)
    return rows


def cmd_compare(args: argparse.Namespace) -> int:
    measure = measure_from_args(args)
    a, b = _load_pair(args)
    report = measure.compute(a, b)
    doc = {
        "measure": measure.name,
        "params": measure.describe(),
        "n": a.rows,
        "m": b.rows,
        "s_numerator": report.s_numerator,
        "s_denominator": report.s_denominator,
        "s_normalized": report.s_normalized,
        "dissimilarity": report.dissimilarity,
        "p1": report.p1,
        "p2": report.p2,
        "gated": report.gated,
        "elapsed_ms": report.elapsed * 1000.0,
    }
    if args.dump_w:
        doc["w_map"] = _w_map_payload(report)
    if args.output == "json":
        print(json.dumps(doc))
    else:
        for key, value in doc.items():
            if key == "w_map":
                print("w_map", json.dumps(value))
            elif key == "params":
                print("params", json.dumps(value))
            else:
                print(key, value)
    return 0


def cmd_retrieve(args: argparse.Namespace) -> int:
    if args.k < 1:
        raise ValueError(f"--k must be >= 1, got {args.k}")
    measure = measure_from_args(args)
    query = read_matrix_file(args.query, args.alphabet)
    if args.quantize is not None:
        query = quantize(query, args.quantize)
    root = Path(args.corpus_root)
    if not root.is_dir():
        raise ValueError(f"corpus root {root} is not a directory")
    scored = []
    skipped = 0
    for label_dir in sorted(p for p in root.iterdir() if p.is_dir()):
        for item in sorted(p for p in label_dir.iterdir() if p.is_file()):
            rel = item.relative_to(root).as_posix()
            try:
                mat = read_matrix_file(item, args.alphabet)
                if args.quantize is not None:
                    mat = quantize(mat, args.quantize)
                q, mat = _harmonize(query, mat)
                report = measure.compute(q, mat)
            except (ValueError, OSError) as exc:
                print(f"warning: skipping {rel}: {exc}", file=sys.stderr)
                skipped += 1
                continue
            scored.append((report.dissimilarity, rel, label_dir.name))
    if not scored and skipped == 0:
        raise ValueError(f"corpus root {root} holds no matrix files")
    scored.sort(key=lambda t: (t[0], t[1]))
    top = scored[: args.k]
    majority = None
    if top:
        counts: dict = {}
        for _, _, label in top:
            counts[label] = counts.get(label, 0) + 1
        best = max(counts.values())
        majority = min(label for label, count in counts.items() if count == best)
    doc = {
        "query": args.query,
        "k": args.k,
        "measure": measure.name,
        "params": measure.describe(),
        "results": [
            {"path": rel, "label": label, "dissimilarity": d} for d, rel, label in top
        ],
        "majority_label": majority,
        "skipped": skipped,
    }
    print(json.dumps(doc))
    return 0


def _int_list(text: str, what: str) -> List[int]:
    if not text.strip():
        return []
    try:
        return [int(tok) for tok in text.split(",") if tok.strip()]
    except ValueError:
        raise ValueError(f"invalid {what} list {text!r}") from None


def cmd_bench(args: argparse.Namespace) -> int:
    sizes = _int_list(args.sizes, "sizes")
    epsilons = _int_list(args.epsilons, "epsilons")
    intervals = _int_list(args.intervals, "intervals")
    if not sizes:
        raise ValueError("bench needs at least one size")
    if args.trials < 1:
        raise ValueError(f"--trials must be >= 1, got {args.trials}")
    metric = parse_metric(args.metric)
    print("measure,n,m,epsilon,interval,trial,elapsed_ms")
    for idx, n in enumerate(sizes):
        a = gen_random(n, args.alphabet, [args.seed, idx, 0])
        b = gen_random(n, args.alphabet, [args.seed, idx, 1])
        plans = [(MeasureKind.acsm(args.alpha), "", "")]
        plans += [
            (MeasureKind.eacsm(args.alpha, eps, metric, args.tau, args.p0), eps, "")
            for eps in epsilons
        ]
        plans += [(MeasureKind.approx(args.alpha, step), "", step) for step in intervals]
        for measure, eps_col, int_col in plans:
            measure.compute(a, b)  # warm-up, excluded from the rows
            for trial in range(1, args.trials + 1):
                report = measure.compute(a, b)
                print(
                    f"{measure.name},{n},{n},{eps_col},{int_col},{trial},"
                    f"{report.elapsed * 1000.0!r}"
                )
    return 0


def cmd_gen(args: argparse.Namespace) -> int:
    if args.plant is not None:
        if not (args.out_a and args.out_b):
            raise ValueError("--plant needs both --out-a and --out-b")
        if args.out:
            raise ValueError("--out is not valid with --plant; use --out-a and --out-b")
        m = args.m if args.m is not None else args.n
        pair = gen_planted_pair(args.n, m, args.alphabet, args.plant, args.seed)
        i, j = pair.anchor
        meta = (
            f"# seed={args.seed} n={args.n} m={m} alphabet={args.alphabet} "
            f"plant={args.plant} anchor_i={i} anchor_j={j}"
        )
        Path(args.out_a).write_text(meta + " role=a\n" + render_csv(pair.a))
        Path(args.out_b).write_text(meta + " role=b\n" + render_csv(pair.b))
        return 0
    if args.m is not None:
        raise ValueError("--m only applies to planted pairs; use --plant")
    if args.out_a or args.out_b:
        raise ValueError("--out-a/--out-b only apply to planted pairs; use --out")
    if not args.out:
        raise ValueError("gen requires --out")
    matrix = gen_random(args.n, args.alphabet, args.seed)
    meta = f"# seed={args.seed} n={args.n} alphabet={args.alphabet}"
    Path(args.out).write_text(meta + "\n" + render_csv(matrix))
    return 0


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Exception as exc:
        print(f"internal error: {exc!r}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())

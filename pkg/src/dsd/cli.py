"""``dsd`` command line: stats, peel, cbds, exact and bench.

Exit codes: 0 success, 2 input error, 3 precondition error, 4 internal
invariant violation.
"""

from __future__ import annotations

import argparse
import csv
import json
import os
import sys
import time
from dataclasses import asdict, dataclass
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from ._parallel import default_workers
from .augment import augment
from .coredec import decompose
from .errors import DSDError, EmptyGraphError, GraphSizeError, InvariantError, ParseError
from .exact import BRUTE_FORCE_CAP, brute_force_densest, flow_exact_densest
from .graph import DensityValue, Graph, load_edge_list
from .peel import PeelConfig, as_epsilon, peel_densest

EXIT_OK, EXIT_INPUT, EXIT_PRECONDITION, EXIT_INVARIANT = 0, 2, 3, 4

BENCH_COLUMNS = (
    "dataset", "algorithm", "epsilon", "workers", "density", "vertices", "edges",
    "passes", "eligible", "legit", "ms", "density_num", "density_den", "error",
)


class PreconditionError(DSDError):
    pass


@dataclass
class RunRecord:
    dataset: str
    algorithm: str
    epsilon: float | None
    workers: int
    density: float | None
    density_num: int | None
    density_den: int | None
    vertices: int | None
    edges: int | float | None
    passes: int | None
    eligible: int | None
    legit: int | None
    max_density_core: int | None
    ms: float | None

    def as_json(self, members: list[int] | None = None) -> dict:
        out = asdict(self)
        if members is not None:
            out["members"] = members
        return out

    def csv_row(self, error: str = "") -> dict:
        row = {c: getattr(self, c, "") for c in BENCH_COLUMNS if c != "error"}
        if self.density is not None:
            row["density"] = f"{self.density:.6g}"
        if self.ms is not None:
            row["ms"] = f"{self.ms:.3f}"
        row["error"] = error
        return {k: ("" if v is None else v) for k, v in row.items()}


def dataset_label(path: str | os.PathLike) -> str:
    name = Path(path).name
    for suffix in (".gz", ".txt", ".csv", ".tsv", ".edges"):
        if name.endswith(suffix):
            name = name[: -len(suffix)]
    return name


def _density_fields(d: DensityValue) -> tuple[float, int, int]:
    f = d.as_fraction()
    return d.value, f.numerator, f.denominator


def _edges_out(edges: int | Fraction) -> int | float:
    return int(edges) if Fraction(edges).denominator == 1 else float(edges)


def _labels(graph: Graph, members: np.ndarray) -> list[int]:
    return sorted(int(x) for x in graph.labels[members])


# --------------------------------------------------------------------------
# runners, shared by single commands and bench


def run_peel(graph: Graph, label: str, epsilon, workers: int):
    eps = as_epsilon(epsilon)
    t0 = time.perf_counter()
    res = peel_densest(graph, PeelConfig(eps, workers))
    ms = (time.perf_counter() - t0) * 1000
    val, num, den = _density_fields(res.best_density)
    rec = RunRecord(label, "peel", float(eps), workers, val, num, den,
                    res.best_density.vertices, _edges_out(res.best_density.edges),
                    res.passes_executed, None, None, None, ms)
    return rec, res.members()


def run_cbds(graph: Graph, label: str, workers: int):
    t0 = time.perf_counter()
    dec = decompose(graph, workers)
    aug = augment(graph, dec, workers)
    ms = (time.perf_counter() - t0) * 1000
    val, num, den = _density_fields(aug.final_density)
    rec = RunRecord(label, "cbds", None, workers, val, num, den,
                    aug.final_density.vertices, _edges_out(aug.final_density.edges),
                    dec.levels_executed, aug.eligible_count, aug.legit_count,
                    dec.max_density_core, ms)
    return rec, aug.members()


def run_exact(graph: Graph, label: str, method: str, cap: int, workers: int = 1):
    t0 = time.perf_counter()
    if method == "bruteforce":
        res = brute_force_densest(graph, cap)
    else:
        res = flow_exact_densest(graph)
    ms = (time.perf_counter() - t0) * 1000
    val, num, den = _density_fields(res.density)
    rec = RunRecord(label, f"exact-{method}", None, workers, val, num, den,
                    res.density.vertices, _edges_out(res.density.edges),
                    res.search_iterations, None, None, None, ms)
    return rec, res.members


# --------------------------------------------------------------------------
# commands


def _load(args, path: str) -> Graph:
    return load_edge_list(path, retain_self_loops=args.self_loops, skip_header=args.skip_header)


def _emit(args, rec: RunRecord, graph: Graph, members: np.ndarray) -> None:
    if args.format == "csv":
        w = csv.DictWriter(sys.stdout, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerow(rec.csv_row())
        return
    out = rec.as_json(_labels(graph, members) if args.members else None)
    if rec.algorithm.startswith("exact"):
        out["rational"] = f"{rec.density_num}/{rec.density_den}"
    print(json.dumps(out, indent=2))


def cmd_stats(args) -> int:
    g = _load(args, args.input)
    print(json.dumps({
        "dataset": dataset_label(args.input),
        "num_vertices": g.num_vertices,
        "num_edges": g.num_edges,
        "raw_line_count": g.raw_line_count,
        "max_degree": g.max_degree(),
        "self_loops": g.self_loop_count,
    }, indent=2))
    return EXIT_OK


def cmd_peel(args) -> int:
    if args.epsilon < 0:
        raise PreconditionError(f"epsilon must be >= 0, got {args.epsilon}")
    g = _load(args, args.input)
    rec, members = run_peel(g, dataset_label(args.input), args.epsilon, args.threads)
    _emit(args, rec, g, members)
    return EXIT_OK


def cmd_cbds(args) -> int:
    g = _load(args, args.input)
    rec, members = run_cbds(g, dataset_label(args.input), args.threads)
    _emit(args, rec, g, members)
    return EXIT_OK


def cmd_exact(args) -> int:
    g = _load(args, args.input)
    rec, members = run_exact(g, dataset_label(args.input), args.method, args.cap, args.threads)
    _emit(args, rec, g, members)
    return EXIT_OK


def cmd_bench(args) -> int:
    if not args.input:
        raise ParseError("bench needs at least one --input")
    for eps in args.epsilon:
        if eps < 0:
            raise PreconditionError(f"epsilon must be >= 0, got {eps}")
    rows: list[dict] = []
    status = EXIT_OK
    for path in args.input:
        label = dataset_label(path)
        try:
            g = _load(args, path)
        except (OSError, DSDError) as exc:
            rows.append({**{c: "" for c in BENCH_COLUMNS}, "dataset": label, "error": str(exc)})
            continue
        for algo in args.algorithms:
            variants = args.epsilon if algo == "peel" else [None]
            for eps in variants:
                ref = None
                for workers in args.threads:
                    try:
                        if algo == "peel":
                            rec, _ = run_peel(g, label, eps, workers)
                        elif algo == "cbds":
                            rec, _ = run_cbds(g, label, workers)
                        else:
                            rec, _ = run_exact(g, label, "flow", BRUTE_FORCE_CAP, workers)
                    except DSDError as exc:
                        row = {c: "" for c in BENCH_COLUMNS}
                        row.update(dataset=label, algorithm=algo, workers=workers,
                                   epsilon="" if eps is None else eps, error=str(exc))
                        rows.append(row)
                        continue
                    rows.append(rec.csv_row())
                    key = (rec.density_num, rec.density_den, rec.vertices)
                    if ref is None:
                        ref = key
                    elif key != ref:
                        print(f"error: {label}/{algo}: result differs between worker counts",
                              file=sys.stderr)
                        status = EXIT_INVARIANT
                        break
                if status:
                    break
            if status:
                break
        if status:
            break
    with open(args.csv, "w", newline="", encoding="utf-8") as fh:
        w = csv.DictWriter(fh, fieldnames=BENCH_COLUMNS, lineterminator="\n")
        w.writeheader()
        w.writerows(rows)
    return status


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="dsd", description="Densest subgraph discovery")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, multi: bool = False):
        if multi:
            sp.add_argument("--input", nargs="+", default=[], help="edge-list files (.gz ok)")
        else:
            sp.add_argument("--input", required=True, help="edge-list file (.gz ok)")
        sp.add_argument("--self-loops", action="store_true", help="retain self-loops")
        sp.add_argument("--skip-header", action="store_true",
                        help="ignore the first non-comment line (CSV exports)")

    def single(sp):
        common(sp)
        sp.add_argument("--threads", type=int, default=default_workers())
        sp.add_argument("--format", choices=("json", "csv"), default="json")
        sp.add_argument("--members", action="store_true",
                        help="include sorted original vertex labels")

    sp = sub.add_parser("stats", help="dataset summary")
    common(sp)
    sp.set_defaults(func=cmd_stats)

    sp = sub.add_parser("peel", help="batch peeling (P-Bahmani)")
    single(sp)
    sp.add_argument("--epsilon", type=float, default=0.0)
    sp.set_defaults(func=cmd_peel)

    sp = sub.add_parser("cbds", help="densest core + augmentation (CBDS-P)")
    single(sp)
    sp.set_defaults(func=cmd_cbds)

    sp = sub.add_parser("exact", help="exact densest subgraph")
    single(sp)
    sp.add_argument("--method", choices=("flow", "bruteforce"), default="flow")
    sp.add_argument("--cap", type=int, default=BRUTE_FORCE_CAP,
                    help="vertex limit for brute force")
    sp.set_defaults(func=cmd_exact)

    sp = sub.add_parser("bench", help="timed cross-product runs to CSV")
    common(sp, multi=True)
    sp.add_argument("--algorithms", nargs="+", choices=("peel", "cbds", "exact"),
                    default=["peel", "cbds"])
    sp.add_argument("--threads", type=int, nargs="+", default=[1])
    sp.add_argument("--epsilon", type=float, nargs="+", default=[0.0])
    sp.add_argument("--csv", required=True, help="output CSV path")
    sp.set_defaults(func=cmd_bench)
    return p


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None) is not None:
        threads = args.threads if isinstance(args.threads, list) else [args.threads]
        if any(t < 1 for t in threads):
            print("error: --threads must be >= 1", file=sys.stderr)
            return EXIT_PRECONDITION
    try:
        return args.func(args)
    except (GraphSizeError, PreconditionError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InvariantError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (OSError, ParseError, EmptyGraphError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())

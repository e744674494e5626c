"""Command-line front end: ``gals detect | eval | nmi | gen | bench | summarize``.

Exit codes: 0 success, 1 usage error, 2 unreadable or malformed input,
3 internal error.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from .bench import SweepSpec, read_rows, run_sweep, summarize, write_rows
from .benchgen import NewmanParams, newman_graph
from .engine import GaConfig, run_many
from .graph import GraphParseError, load_network, load_partition, to_edge_list
from .metrics import nmi
from .modularity import modularity_q

EXIT_OK, EXIT_USAGE, EXIT_INPUT, EXIT_INTERNAL = 0, 1, 2, 3

log = logging.getLogger("gals")


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _floats(text: str) -> list[float]:
    try:
        return [float(v) for v in text.split(",") if v.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")


def _add_ga_flags(p: argparse.ArgumentParser):
    p.add_argument("--iterations", "-L", type=_positive, default=500,
                   help="generations per run (default: 500)")
    p.add_argument("--mu", type=int, default=80, help="parent population size (default: 80)")
    p.add_argument("--lambda", dest="lam", type=_positive, default=60,
                   help="offspring per generation (default: 60)")
    p.add_argument("--seed", type=int, default=None,
                   help="RNG seed; runs are reproducible only when given")
    p.add_argument("--trace-every", type=_positive, default=1,
                   help="record the best Q every N generations (default: 1)")
    p.add_argument("--stagnation", type=_positive, default=None,
                   help="stop a run after N generations without improvement (default: off)")


def _config(args) -> GaConfig:
    try:
        return GaConfig(iterations=args.iterations, mu=args.mu, lam=args.lam, seed=args.seed,
                        trace_every=args.trace_every, stagnation=args.stagnation)
    except ValueError as exc:
        raise UsageError(str(exc))


def cmd_detect(args) -> int:
    net = load_network(args.network, args.format)
    summary = run_many(net, _config(args), runs=args.runs, workers=args.workers)
    best = summary.best
    out = args.out or Path(args.network).stem
    part_path = Path(f"{out}.partition.txt")
    json_path = Path(f"{out}.result.json")
    part_path.write_text(best.best_partition.to_text(net.node_names))
    payload = best.to_dict(net)
    if args.runs > 1:
        payload["runs"] = {
            "count": args.runs, "mean_q": summary.mean_q, "min_q": summary.min_q,
            "max_q": summary.max_q, "std_q": summary.std_q,
            "mean_elapsed_ms": summary.mean_elapsed * 1000.0,
            "q": [r.best_q for r in summary.results],
        }
    json_path.write_text(json.dumps(payload, indent=1) + "\n")

    print(f"Q = {best.best_q:.6f}  communities = {best.best_partition.community_count}")
    if args.runs > 1:
        print(f"runs = {args.runs}  mean Q = {summary.mean_q:.6f}  std = {summary.std_q:.6f}"
              f"  min = {summary.min_q:.6f}  max = {summary.max_q:.6f}")
    if args.ground_truth:
        truth = load_partition(args.ground_truth, net)
        print(f"NMI = {nmi(best.best_partition, truth):.6f}")
    print(f"wrote {part_path} and {json_path}")
    return EXIT_OK


def cmd_eval(args) -> int:
    net = load_network(args.network, args.format)
    part = load_partition(args.partition, net)
    print(f"{modularity_q(net, part):.6f}")
    return EXIT_OK


def _read_labels(path: str) -> dict[str, str]:
    out: dict[str, str] = {}
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(f"{path}: expected 'node community'", lineno)
        if tokens[0] in out:
            raise GraphParseError(f"{path}: duplicate node {tokens[0]!r}", lineno)
        out[tokens[0]] = tokens[1]
    return out


def cmd_nmi(args) -> int:
    a = _read_labels(args.a)
    b = _read_labels(args.b)
    if set(a) != set(b):
        diff = sorted(set(a) ^ set(b))
        raise GraphParseError(f"partitions cover different nodes (e.g. {diff[0]!r})")
    nodes = sorted(a)
    ids_a: dict[str, int] = {}
    ids_b: dict[str, int] = {}
    la = [ids_a.setdefault(a[v], len(ids_a)) for v in nodes]
    lb = [ids_b.setdefault(b[v], len(ids_b)) for v in nodes]
    print(f"{nmi(la, lb):.6f}")
    return EXIT_OK


def cmd_gen(args) -> int:
    params = NewmanParams(groups=args.groups, group_size=args.group_size, z_in=args.z_in,
                          z_out=args.z_out, seed=args.seed)
    try:
        params.validate()
    except ValueError as exc:
        raise UsageError(str(exc))
    net, truth = newman_graph(params)
    edges_path = Path(f"{args.out}.txt")
    truth_path = Path(f"{args.out}.truth.txt")
    header = (f"# planted partition: groups={params.groups} group_size={params.group_size}"
              f" z_in={params.z_in} z_out={params.z_out} seed={params.seed}\n")
    edges_path.write_text(header + to_edge_list(net))
    # an edge list cannot carry isolated vertices, so the truth file skips them too
    listed = net.degrees > 0
    truth_path.write_text("".join(f"{net.node_names[i]} {truth.labels[i]}\n"
                                  for i in range(net.node_count) if listed[i]))
    isolated = int((~listed).sum())
    print(f"n = {net.node_count}  m = {net.edge_count}  isolated = {isolated}")
    if isolated:
        print(f"warning: {isolated} isolated vertices are left out of both files",
              file=sys.stderr)
    print(f"wrote {edges_path} and {truth_path}")
    return EXIT_OK


def cmd_bench(args) -> int:
    base = NewmanParams(groups=args.groups, group_size=args.group_size, z_in=args.z_in,
                        z_out=args.z_out)
    try:
        spec = SweepSpec(args.param, tuple(args.values), args.graphs, args.runs, base,
                         total_degree=args.total_degree)
        for value in spec.values:
            spec.params_at(value, 0).validate()
    except ValueError as exc:
        raise UsageError(str(exc))
    cfg = _config(args)
    rows = run_sweep(spec, cfg)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            count = write_rows(rows, fh)
        print(f"wrote {count} rows to {args.out}", file=sys.stderr)
    else:
        write_rows(rows, sys.stdout)
    return EXIT_OK


def cmd_summarize(args) -> int:
    try:
        rows = read_rows(args.csv)
    except (KeyError, ValueError) as exc:
        raise GraphParseError(f"{args.csv}: {exc}")
    print("point,rows,nmi,q,elapsed_ms,n")
    for s in summarize(rows):
        print(f"{s['point']:g},{s['rows']},{s['nmi']:.6f},{s['q']:.6f},"
              f"{s['elapsed_ms']:.3f},{s['n']:g}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="gals", description="Community detection by genetic local search.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("detect", help="find communities in a network")
    p.add_argument("network")
    p.add_argument("--format", choices=["edgelist", "gml"], default=None,
                   help="input format (default: from extension, .gml or edge list)")
    _add_ga_flags(p)
    p.add_argument("--runs", type=_positive, default=1, help="independent runs (default: 1)")
    p.add_argument("--workers", type=_positive, default=1, help="parallel processes for --runs")
    p.add_argument("--ground-truth", help="partition file to score the result against (NMI)")
    p.add_argument("--out", help="output prefix (default: network file stem)")
    p.set_defaults(func=cmd_detect)

    p = sub.add_parser("eval", help="modularity of a given partition")
    p.add_argument("network")
    p.add_argument("partition")
    p.add_argument("--format", choices=["edgelist", "gml"], default=None)
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("nmi", help="normalized mutual information of two partition files")
    p.add_argument("a")
    p.add_argument("b")
    p.set_defaults(func=cmd_nmi)

    p = sub.add_parser("gen", help="write a planted-partition benchmark graph")
    p.add_argument("--groups", type=int, default=4)
    p.add_argument("--group-size", type=int, default=32)
    p.add_argument("--z-in", type=float, default=16.0)
    p.add_argument("--z-out", type=float, default=0.0)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output prefix")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("bench", help="sweep planted-partition graphs, write CSV rows")
    p.add_argument("--param", choices=["z_out", "groups"], required=True)
    p.add_argument("--values", type=_floats, required=True, help="comma-separated sweep values")
    p.add_argument("--graphs", type=_positive, default=10, help="graphs per point (default: 10)")
    p.add_argument("--runs", type=_positive, default=1, help="runs per graph (default: 1)")
    p.add_argument("--groups", type=int, default=4)
    p.add_argument("--group-size", type=int, default=32)
    p.add_argument("--z-in", type=float, default=16.0)
    p.add_argument("--z-out", type=float, default=0.0)
    p.add_argument("--total-degree", type=float, default=None,
                   help="z_out sweeps: keep z_in + z_out fixed at this value")
    _add_ga_flags(p)
    p.add_argument("--out", default="-", help="CSV path (default: stdout)")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("summarize", help="per-point means of a bench CSV")
    p.add_argument("csv")
    p.set_defaults(func=cmd_summarize)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"gals {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (GraphParseError, OSError, UnicodeDecodeError) as exc:
        print(f"gals {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ValueError as exc:
        print(f"gals {args.command}: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except Exception as exc:  # noqa: BLE001
        log.exception("internal error")
        print(f"gals {args.command}: internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())

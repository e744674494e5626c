"""Benchmark sweeps over planted-partition graphs and their CSV output."""
from __future__ import annotations

import csv
import statistics
from collections import defaultdict
from dataclasses import dataclass, replace
from pathlib import Path
from typing import Iterator, Sequence, TextIO

import numpy as np

from .benchgen import NewmanParams, newman_graph
from .engine import GaConfig, run_gals
from .metrics import nmi

CSV_HEADER = ["point", "graph_idx", "run_idx", "nmi", "q", "elapsed_ms", "n", "m"]
SWEEP_PARAMETERS = ("z_out", "groups")


@dataclass(frozen=True)
class SweepSpec:
    parameter: str
    values: tuple[float, ...]
    graphs_per_point: int = 10
    runs_per_graph: int = 1
    base: NewmanParams = NewmanParams()
    total_degree: float | None = None
    """For z_out sweeps: hold z_in + z_out at this value (z_in follows z_out)."""

    def __post_init__(self):
        if self.parameter not in SWEEP_PARAMETERS:
            raise ValueError(f"sweep parameter must be one of {SWEEP_PARAMETERS}")
        if not self.values:
            raise ValueError("sweep needs at least one value")
        if self.graphs_per_point < 1 or self.runs_per_graph < 1:
            raise ValueError("graph and run counts must be positive")

    def params_at(self, value: float, seed: int) -> NewmanParams:
        if self.parameter == "z_out":
            z_in = self.base.z_in if self.total_degree is None else self.total_degree - value
            p = replace(self.base, z_out=float(value), z_in=float(z_in))
        else:
            p = replace(self.base, groups=int(value))
        return replace(p, seed=seed)


def run_sweep(spec: SweepSpec, cfg: GaConfig) -> Iterator[dict]:
    """Yield one CSV row per (point, graph, run) in a fixed order.

    Graph and run seeds derive from ``cfg.seed`` and the row coordinates only,
    so any row can be reproduced on its own.
    """
    root = np.random.SeedSequence(cfg.seed)
    for p_idx, value in enumerate(spec.values):
        for g in range(spec.graphs_per_point):
            graph_seed = int(np.random.SeedSequence([root.entropy, p_idx, g]).generate_state(1)[0])
            params = spec.params_at(value, graph_seed)
            net, truth = newman_graph(params)
            for r in range(spec.runs_per_graph):
                run_seed = int(np.random.SeedSequence([root.entropy, p_idx, g, r, 1])
                               .generate_state(1)[0])
                result = run_gals(net, replace(cfg, seed=run_seed))
                yield {
                    "point": value,
                    "graph_idx": g,
                    "run_idx": r,
                    "nmi": nmi(result.best_partition, truth),
                    "q": result.best_q,
                    "elapsed_ms": result.elapsed * 1000.0,
                    "n": net.node_count,
                    "m": net.edge_count,
                }


def write_rows(rows, out: TextIO) -> int:
    writer = csv.DictWriter(out, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    count = 0
    for row in rows:
        writer.writerow({k: repr(v) if isinstance(v, float) else v for k, v in row.items()})
        out.flush()
        count += 1
    return count


def read_rows(path: str | Path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if reader.fieldnames != CSV_HEADER:
            raise ValueError(f"unexpected CSV header {reader.fieldnames}")
        return [
            {"point": float(r["point"]), "graph_idx": int(r["graph_idx"]),
             "run_idx": int(r["run_idx"]), "nmi": float(r["nmi"]), "q": float(r["q"]),
             "elapsed_ms": float(r["elapsed_ms"]), "n": int(r["n"]), "m": int(r["m"])}
            for r in reader
        ]


def summarize(rows: Sequence[dict]) -> list[dict]:
    """Per-point means of nmi, q, elapsed_ms and n, in first-seen point order."""
    groups: dict[float, list[dict]] = defaultdict(list)
    for row in rows:
        groups[float(row["point"])].append(row)
    out = []
    for point, members in groups.items():
        out.append({
            "point": point,
            "rows": len(members),
            "nmi": statistics.fmean(r["nmi"] for r in members),
            "q": statistics.fmean(r["q"] for r in members),
            "elapsed_ms": statistics.fmean(r["elapsed_ms"] for r in members),
            "n": statistics.fmean(r["n"] for r in members),
        })
    return out


def linear_fit(x: Sequence[float], y: Sequence[float]) -> tuple[float, float, float]:
    """Least-squares ``y = slope * x + intercept``; returns ``(slope, intercept, r_squared)``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    total = np.sum((y - y.mean()) ** 2)
    r2 = 1.0 - np.sum(resid ** 2) / total if total > 0 else 1.0
    return float(slope), float(intercept), float(r2)

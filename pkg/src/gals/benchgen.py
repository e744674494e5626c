"""Planted-partition (Newman-Girvan) benchmark graphs."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .encoding import Partition
from .graph import Network


@dataclass(frozen=True)
class NewmanParams:
    groups: int = 4
    group_size: int = 32
    z_in: float = 16.0
    z_out: float = 0.0
    seed: int | None = None

    @property
    def node_count(self) -> int:
        return self.groups * self.group_size

    @property
    def p_in(self) -> float:
        return self.z_in / (self.group_size - 1)

    @property
    def p_out(self) -> float:
        return self.z_out / (self.group_size * (self.groups - 1))

    def validate(self):
        if self.groups < 2:
            raise ValueError("need at least 2 groups")
        if self.group_size < 2:
            raise ValueError("group_size must be >= 2")
        if self.z_in < 0 or self.z_out < 0:
            raise ValueError("expected degrees must be non-negative")
        if self.z_in + self.z_out > self.node_count - 1:
            raise ValueError("z_in + z_out exceeds n - 1")
        for name, p in (("p_in", self.p_in), ("p_out", self.p_out)):
            if not 0.0 <= p <= 1.0:
                raise ValueError(f"{name} = {p:.4f} is outside [0, 1]")


def newman_graph(params: NewmanParams,
                 rng: np.random.Generator | None = None) -> tuple[Network, Partition]:
    """Independent Bernoulli edges: ``p_in`` within a group, ``p_out`` between groups.

    Returns the graph and its planted partition. Isolated vertices are kept.
    """
    params.validate()
    if rng is None:
        rng = np.random.default_rng(params.seed)
    n = params.node_count
    truth = np.repeat(np.arange(params.groups), params.group_size)
    edges = []
    # pair enumeration block by block keeps memory at O(group_size^2)
    s = params.group_size
    iu = np.triu_indices(s, k=1)
    for g in range(params.groups):
        hits = rng.random(len(iu[0])) < params.p_in
        edges.append(np.column_stack([iu[0][hits], iu[1][hits]]) + g * s)
        for h in range(g + 1, params.groups):
            hits = rng.random((s, s)) < params.p_out
            u, v = np.nonzero(hits)
            edges.append(np.column_stack([u + g * s, v + h * s]))
    pairs = np.concatenate(edges) if edges else np.empty((0, 2), dtype=np.int64)
    net = Network.from_edges(n, pairs)
    return net, Partition.from_labels(truth, net)


def ground_truth_text(net: Network, truth: Partition) -> str:
    return truth.to_text(net.node_names)

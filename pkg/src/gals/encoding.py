"""Locus-based adjacency chromosomes and the partitions they decode to.

A chromosome is a length-``n`` int64 array where ``alleles[i] = j`` links
node ``i`` to node ``j``; communities are the connected components of the
resulting (undirected) genotype graph. ``alleles[i] = i`` is allowed and
means gene ``i`` carries no link.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import TYPE_CHECKING, Sequence

import numpy as np

from . import _kernels

if TYPE_CHECKING:
    from .graph import Network


def as_chromosome(alleles: Sequence[int] | np.ndarray, n: int | None = None) -> np.ndarray:
    """Validate and convert to a contiguous int64 allele array."""
    chrom = np.ascontiguousarray(alleles, dtype=np.int64)
    if chrom.ndim != 1:
        raise ValueError("chromosome must be one-dimensional")
    if n is not None and len(chrom) != n:
        raise ValueError(f"chromosome has {len(chrom)} genes, network has {n} nodes")
    if len(chrom) and (chrom.min() < 0 or chrom.max() >= len(chrom)):
        raise ValueError("allele out of range 0..n-1")
    return chrom


@dataclass(frozen=True, eq=False)
class Partition:
    """Hard assignment of nodes to communities ``0..k-1``.

    ``community_degree_sum`` is only present when the partition was built
    against a network; it caches the summed degree of each community.
    """

    labels: np.ndarray
    community_count: int
    community_degree_sum: np.ndarray | None = None

    @classmethod
    def from_labels(cls, labels, net: "Network | None" = None) -> "Partition":
        """Compact arbitrary non-negative labels to first-appearance order."""
        raw = np.ascontiguousarray(labels, dtype=np.int64)
        if raw.ndim != 1 or len(raw) == 0:
            raise ValueError("labels must be a non-empty 1-d sequence")
        if raw.min() < 0:
            raise ValueError("labels must be non-negative")
        compact, k = _kernels.compact_labels(raw)
        sums = None
        if net is not None:
            if net.node_count != len(compact):
                raise ValueError("partition and network sizes differ")
            sums = np.bincount(compact, weights=net.degrees, minlength=k).astype(np.int64)
        compact.setflags(write=False)
        return cls(compact, int(k), sums)

    @classmethod
    def singletons(cls, n: int, net: "Network | None" = None) -> "Partition":
        return cls.from_labels(np.arange(n), net)

    @classmethod
    def whole(cls, n: int, net: "Network | None" = None) -> "Partition":
        return cls.from_labels(np.zeros(n, dtype=np.int64), net)

    @property
    def node_count(self) -> int:
        return len(self.labels)

    @property
    def community_members(self) -> list[np.ndarray]:
        order = np.argsort(self.labels, kind="stable")
        bounds = np.cumsum(np.bincount(self.labels, minlength=self.community_count))[:-1]
        return np.split(order, bounds)

    def degree_sums(self, net: "Network") -> np.ndarray:
        if self.community_degree_sum is not None:
            return self.community_degree_sum
        return np.bincount(self.labels, weights=net.degrees,
                           minlength=self.community_count).astype(np.int64)

    def with_network(self, net: "Network") -> "Partition":
        return Partition.from_labels(self.labels, net)

    def same_grouping(self, other: "Partition") -> bool:
        """True when both partitions put the same node pairs together."""
        return np.array_equal(self.labels, other.labels)

    def communities(self, names: Sequence[str] | None = None) -> list[list]:
        groups = self.community_members
        if names is None:
            return [g.tolist() for g in groups]
        return [[names[i] for i in g] for g in groups]

    def to_text(self, names: Sequence[str]) -> str:
        """``node community`` lines, the same format the ground-truth reader takes."""
        return "".join(f"{names[i]} {lab}\n" for i, lab in enumerate(self.labels))

    def to_json(self, names: Sequence[str], q: float | None = None) -> str:
        return json.dumps({"communities": self.communities(names), "q": q})

    def __eq__(self, other):
        if not isinstance(other, Partition):
            return NotImplemented
        return self.same_grouping(other)

    def __repr__(self):
        return f"Partition(n={self.node_count}, k={self.community_count})"


def decode(chrom, net: "Network | None" = None) -> Partition:
    """Connected components of the genotype graph, labelled by first appearance."""
    alleles = as_chromosome(chrom)
    labels, k = _kernels.decode_labels(alleles)
    sums = None
    if net is not None:
        sums = np.bincount(labels, weights=net.degrees, minlength=k).astype(np.int64)
    labels.setflags(write=False)
    return Partition(labels, int(k), sums)


def is_safe(chrom, net: "Network") -> bool:
    """Every allele is the gene itself or one of its neighbors in ``net``."""
    alleles = np.ascontiguousarray(chrom, dtype=np.int64)
    if len(alleles) != net.node_count:
        return False
    if len(alleles) and (alleles.min() < 0 or alleles.max() >= net.node_count):
        return False
    return bool(_kernels.is_safe(net.indptr, net.indices, alleles))


def marginal_genes(chrom) -> np.ndarray:
    """Nodes that no gene's allele points at (a self-allele counts as pointing)."""
    alleles = as_chromosome(chrom)
    return np.flatnonzero(_kernels.in_degrees(alleles) == 0)


def marginal_fraction(chrom) -> float:
    alleles = as_chromosome(chrom)
    return float(np.count_nonzero(_kernels.in_degrees(alleles) == 0)) / len(alleles)


def expected_marginal_fraction(n: int) -> float:
    """Probability that a given gene is marginal in a uniformly random chromosome."""
    return (1.0 - 1.0 / n) ** n


def upstream(chrom, j: int) -> np.ndarray:
    """Nodes whose allele chain passes through ``j``, including ``j``.

    This is the node set that cutting ``j``'s link (``alleles[j] = j``)
    separates from the rest of its community, unless ``j`` sits on the
    component's cycle, in which case nothing separates. A marginal node's
    upstream set is just itself.
    """
    alleles = as_chromosome(chrom)
    children: dict[int, list[int]] = {}
    for i, a in enumerate(alleles.tolist()):
        if i != a:
            children.setdefault(a, []).append(i)
    seen = {int(j)}
    stack = [int(j)]
    while stack:
        for child in children.get(stack.pop(), ()):
            if child not in seen:
                seen.add(child)
                stack.append(child)
    return np.array(sorted(seen), dtype=np.int64)

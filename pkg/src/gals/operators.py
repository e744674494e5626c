"""Genetic operators over locus-based chromosomes.

Randomness always comes from an explicit :class:`numpy.random.Generator`;
the compiled kernels only ever see pre-drawn uniforms, so a seed fixes every
output bit for bit.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import _kernels
from .encoding import Partition, as_chromosome, is_safe
from .graph import Network


class UnsafeChromosomeError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Individual:
    """A chromosome with its cached community labels and modularity.

    ``labels`` is always a valid decoding of ``alleles`` but is not
    necessarily numbered in first-appearance order.
    """

    alleles: np.ndarray
    labels: np.ndarray
    q: float

    @classmethod
    def evaluate(cls, net: Network, alleles: np.ndarray) -> "Individual":
        labels, _ = _kernels.decode_labels(alleles)
        return cls(alleles, labels, _q(net, labels))

    def partition(self, net: Network | None = None) -> Partition:
        return Partition.from_labels(self.labels, net)


def _q(net: Network, labels: np.ndarray) -> float:
    return float(_kernels.modularity_from_labels(net.indptr, net.indices, net.degrees, labels))


def mrw_init(net: Network, rng: np.random.Generator) -> np.ndarray:
    """Each gene takes one random-walk step: neighbor ``j`` with probability ``1/k_i``."""
    return _kernels.mrw_alleles(net.indptr, net.indices, rng.random(net.node_count))


def uniform_crossover(a, b, rng: np.random.Generator | None = None,
                      mask: np.ndarray | None = None) -> np.ndarray:
    """Child takes gene ``i`` from ``a`` where ``mask[i]`` is set, else from ``b``.

    ``mask`` is drawn as fair coin flips when not given.
    """
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    if a.shape != b.shape:
        raise ValueError(f"parent lengths differ: {len(a)} vs {len(b)}")
    if mask is None:
        if rng is None:
            raise ValueError("need either rng or mask")
        mask = rng.random(len(a)) < 0.5
    return np.where(np.asarray(mask, dtype=bool), a, b)


def lsma_individual(net: Network, alleles: np.ndarray, rng: np.random.Generator,
                    labels: np.ndarray | None = None) -> Individual:
    """Run the local-search mutation on a copy of ``alleles`` and score the result."""
    if net.edge_count == 0:
        raise ValueError("local search needs at least one edge")
    alleles = np.array(alleles, dtype=np.int64)
    if labels is None:
        labels, _ = _kernels.decode_labels(alleles)
    else:
        labels = np.array(labels, dtype=np.int64)
    _kernels.lsma(net.indptr, net.indices, net.degrees, alleles, labels,
                  rng.random(net.node_count))
    return Individual(alleles, labels, _q(net, labels))


def lsma_mutate(net: Network, chrom, rng: np.random.Generator | None = None) -> np.ndarray:
    """Move every marginal gene to the neighboring community that maximizes its ``f_i``.

    Genes are visited in ascending id order and each move is visible to the
    genes after it. Ties keep the first candidate, and the node's current
    community is always the first candidate. The modularity of the decoded
    partition never decreases.
    """
    alleles = as_chromosome(chrom, net.node_count)
    if not is_safe(alleles, net):
        raise UnsafeChromosomeError("chromosome links nodes that are not adjacent")
    if rng is None:
        rng = np.random.default_rng()
    return lsma_individual(net, alleles, rng).alleles


def mu_plus_lambda_select(parents: list[Individual], offspring: list[Individual],
                          mu: int) -> list[Individual]:
    """The ``mu`` fittest of parents and offspring together.

    Sorting is stable over ``parents + offspring``, so ties go to parents
    first and then to the lower index.
    """
    pool = list(parents) + list(offspring)
    return [pool[k] for k in survivor_indices(np.array([ind.q for ind in pool]), mu)]


def survivor_indices(qs: np.ndarray, mu: int) -> np.ndarray:
    """Indices of the ``mu`` largest values, best first; earlier index wins ties."""
    if mu > len(qs):
        raise ValueError(f"cannot select {mu} individuals from {len(qs)}")
    return np.argsort(-np.asarray(qs), kind="stable")[:mu]


def breed(net: Network, parents: np.ndarray, rng: np.random.Generator, lam: int):
    """``lam`` offspring of the ``(mu, n)`` parent matrix.

    Equivalent to, for each child in turn: two parents drawn uniformly with
    replacement, :func:`uniform_crossover`, then :func:`lsma_individual`.
    All random draws for the generation are made up front.
    Returns ``(alleles, labels, q)`` arrays.
    """
    n = net.node_count
    pairs = rng.integers(len(parents), size=(lam, 2))
    masks = rng.random((lam, n)) < 0.5
    uniforms = rng.random((lam, n))
    return _kernels.breed(net.indptr, net.indices, net.degrees, parents, pairs, masks, uniforms)

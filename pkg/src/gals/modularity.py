"""Newman-Girvan modularity and its per-node decomposition.

``local_f(i)`` is node ``i``'s share of ``2m * Q``: the sum of
``A_ij - k_i k_j / 2m`` over every ``j`` in ``i``'s community, ``j = i``
included. When only node ``i`` changes community, ``Q`` changes by exactly
``delta_f / m``, which is what :func:`delta_q_move` returns.
"""
from __future__ import annotations

import numpy as np

from . import _kernels
from .encoding import Partition
from .graph import Network

NEW_COMMUNITY = -1
"""Target label meaning "move the node into a fresh community of its own"."""


def _check(net: Network, part: Partition):
    if net.edge_count == 0:
        raise ValueError("modularity is undefined for a network without edges")
    if part.node_count != net.node_count:
        raise ValueError(f"partition covers {part.node_count} nodes, network has {net.node_count}")


def modularity_q(net: Network, part: Partition) -> float:
    _check(net, part)
    return float(_kernels.modularity_from_labels(net.indptr, net.indices, net.degrees,
                                                 np.ascontiguousarray(part.labels)))


def _f(net: Network, links: int, ki: int, others_degree: float) -> float:
    # others_degree excludes i; the j = i term contributes -k_i^2 / 2m
    return links - ki * (others_degree + ki) / (2.0 * net.edge_count)


def local_f(net: Network, part: Partition, i: int) -> float:
    _check(net, part)
    c = part.labels[i]
    ki = int(net.degrees[i])
    links = int(np.count_nonzero(part.labels[net.neighbors(i)] == c))
    return _f(net, links, ki, part.degree_sums(net)[c] - ki)


def _validate_move(part: Partition, i: int, new_label: int):
    if not 0 <= i < part.node_count:
        raise IndexError(f"node {i} out of range")
    if new_label != NEW_COMMUNITY and not 0 <= new_label < part.community_count:
        raise ValueError(f"community {new_label} does not exist")


def local_f_if_moved(net: Network, part: Partition, i: int, new_label: int) -> float:
    """``f_i`` after moving ``i`` alone to ``new_label`` (all other nodes fixed)."""
    _validate_move(part, i, new_label)
    ki = int(net.degrees[i])
    if new_label == NEW_COMMUNITY:
        return _f(net, 0, ki, 0.0)
    if new_label == part.labels[i]:
        return local_f(net, part, i)
    links = int(np.count_nonzero(part.labels[net.neighbors(i)] == new_label))
    return _f(net, links, ki, float(part.degree_sums(net)[new_label]))


def delta_q_move(net: Network, part: Partition, i: int, new_label: int) -> float:
    """``Q(after) - Q(before)`` for moving node ``i`` alone to ``new_label``."""
    _check(net, part)
    _validate_move(part, i, new_label)
    if new_label == part.labels[i]:
        return 0.0
    before = local_f(net, part, i)
    after = local_f_if_moved(net, part, i, new_label)
    return (after - before) / net.edge_count


def apply_move(part: Partition, i: int, new_label: int, net: Network | None = None) -> Partition:
    """New partition with node ``i`` moved; empty communities vanish and labels are compacted.

    Pass ``net`` to carry the cached community degree sums over.
    """
    _validate_move(part, i, new_label)
    labels = np.array(part.labels, dtype=np.int64)
    labels[i] = part.community_count if new_label == NEW_COMMUNITY else new_label
    return Partition.from_labels(labels, net)

"""Normalized mutual information between two hard partitions."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .encoding import Partition


@dataclass(frozen=True)
class ConfusionTable:
    """Sparse contingency counts.

    ``counts[c]`` nodes carry row label ``rows[c]`` and column label ``cols[c]``.
    """

    rows: np.ndarray
    cols: np.ndarray
    counts: np.ndarray
    row_sums: np.ndarray
    col_sums: np.ndarray
    total: int

    @classmethod
    def from_labels(cls, a, b) -> "ConfusionTable":
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if a.shape != b.shape:
            raise ValueError(f"partitions cover different node counts: {len(a)} vs {len(b)}")
        _, a = np.unique(a, return_inverse=True)
        _, b = np.unique(b, return_inverse=True)
        width = int(b.max()) + 1 if len(b) else 1
        cells, counts = np.unique(a * width + b, return_counts=True)
        return cls(cells // width, cells % width, counts,
                   np.bincount(a), np.bincount(b), len(a))


def _labels(p) -> np.ndarray:
    return p.labels if isinstance(p, Partition) else np.asarray(p)


def nmi(a: Partition, b: Partition) -> float:
    """Danon et al. NMI with natural logs; 1 for identical groupings, 0 for independent ones.

    When both partitions are a single community the value is 1.
    """
    t = ConfusionTable.from_labels(_labels(a), _labels(b))
    n = float(t.total)
    # fsum is exactly rounded, which makes the result independent of argument order
    expected = t.row_sums[t.rows] * t.col_sums[t.cols]
    num = -2.0 * math.fsum(t.counts * np.log(t.counts * n / expected))
    den = (math.fsum(t.row_sums * np.log(t.row_sums / n))
           + math.fsum(t.col_sums * np.log(t.col_sums / n)))
    if den == 0.0:
        return 1.0
    return float(min(max(num / den, 0.0), 1.0))

import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gals.encoding import Partition
from gals.metrics import ConfusionTable, nmi

labelings = st.integers(1, 60).flatmap(lambda n: st.tuples(
    st.lists(st.integers(0, 6), min_size=n, max_size=n),
    st.lists(st.integers(0, 6), min_size=n, max_size=n)))


def oracle_nmi(a, b):
    """2 I(A;B) / (H(A) + H(B)) from empirical probabilities."""
    n = len(a)
    pa, pb, pab = Counter(a), Counter(b), Counter(zip(a, b))
    ha = -sum(c / n * math.log(c / n) for c in pa.values())
    hb = -sum(c / n * math.log(c / n) for c in pb.values())
    mi = sum(c / n * math.log((c / n) / ((pa[x] / n) * (pb[y] / n))) for (x, y), c in pab.items())
    if ha + hb == 0:
        return 1.0
    return 2 * mi / (ha + hb)


def test_identical_partitions():
    p = Partition.from_labels([0, 0, 1, 1, 2])
    assert nmi(p, p) == pytest.approx(1.0, abs=1e-15)


def test_singletons_against_one_community():
    assert nmi(Partition.singletons(10), Partition.whole(10)) == 0.0


def test_both_trivial():
    assert nmi(Partition.whole(5), Partition.whole(5)) == 1.0


def test_size_mismatch():
    with pytest.raises(ValueError):
        nmi([0, 1], [0, 1, 1])


def test_random_labelings_match_oracle():
    rng = np.random.default_rng(0)
    for _ in range(200):
        a = rng.integers(0, rng.integers(1, 12), size=100).tolist()
        b = rng.integers(0, rng.integers(1, 12), size=100).tolist()
        assert abs(nmi(a, b) - oracle_nmi(a, b)) <= 1e-10


@settings(max_examples=300, deadline=None)
@given(labelings)
def test_properties(pair):
    a, b = pair
    value = nmi(a, b)
    assert 0.0 <= value <= 1.0 + 1e-12
    assert value == nmi(b, a)
    assert abs(value - oracle_nmi(a, b)) <= 1e-10
    perm = {x: 10 - x for x in set(a)}
    assert nmi([perm[x] for x in a], b) == pytest.approx(value, abs=1e-12)


def test_confusion_table_margins():
    t = ConfusionTable.from_labels([0, 0, 1, 1, 1], [5, 6, 6, 6, 5])
    assert t.counts.sum() == t.total == 5
    assert t.row_sums.tolist() == [2, 3]
    assert t.col_sums.tolist() == [2, 3]

import os
from pathlib import Path

import numpy as np
import pytest

from gals.graph import Network, karate, parse_edge_list

REPO = Path(__file__).resolve().parent.parent
DATA_DIR = Path(os.environ.get("GALS_DATA_DIR", REPO / "data"))

# 1-based edges; two triangles {1,2,3} and {4,5,6} joined by the bridge 3-4
TWO_TRIANGLES = "1 2\n1 3\n2 3\n3 4\n4 5\n4 6\n5 6\n"

# 1-based chromosome printed for the 11-node example network
EXAMPLE_CHROMOSOME = [3, 6, 6, 3, 4, 3, 11, 8, 7, 7, 8]
# every link the chromosome uses, plus two links between the groups and one extra inside
EXAMPLE_EDGES = "1 3\n2 6\n3 6\n3 4\n4 5\n7 11\n8 11\n7 9\n7 10\n5 6\n6 7\n2 9\n9 10\n"


def data_file(name: str) -> Path:
    """Path of an external dataset, failing the test when it is not installed."""
    path = DATA_DIR / name
    if not path.exists():
        pytest.fail(f"dataset {name!r} not found in {DATA_DIR} (set GALS_DATA_DIR)", pytrace=False)
    return path


@pytest.fixture
def two_triangles() -> Network:
    return parse_edge_list(TWO_TRIANGLES)


@pytest.fixture
def example_net() -> Network:
    return parse_edge_list(EXAMPLE_EDGES)


@pytest.fixture
def example_chrom() -> np.ndarray:
    return np.array(EXAMPLE_CHROMOSOME) - 1


@pytest.fixture(scope="session")
def karate_net() -> Network:
    return karate()


def random_graph(rng: np.random.Generator, n: int, p: float) -> Network:
    """Erdos-Renyi graph with at least one edge."""
    while True:
        iu = np.triu_indices(n, k=1)
        hits = rng.random(len(iu[0])) < p
        if hits.any():
            return Network.from_edges(n, np.column_stack([iu[0][hits], iu[1][hits]]))


def random_safe_chromosome(rng: np.random.Generator, net: Network) -> np.ndarray:
    """Each gene picks a neighbor or itself uniformly (self-alleles included)."""
    out = np.empty(net.node_count, dtype=np.int64)
    for i in range(net.node_count):
        options = np.append(net.neighbors(i), i)
        out[i] = options[rng.integers(len(options))]
    return out


# ---- independent oracles ------------------------------------------------------------------

def brute_q(net: Network, labels) -> float:
    """Modularity by the full double sum over node pairs."""
    a = net.adjacency_matrix().astype(float)
    k = a.sum(axis=1)
    two_m = k.sum()
    labels = np.asarray(labels)
    same = labels[:, None] == labels[None, :]
    return float(((a - np.outer(k, k) / two_m) * same).sum() / two_m)


def brute_f(net: Network, labels, i: int) -> float:
    a = net.adjacency_matrix().astype(float)
    k = a.sum(axis=1)
    two_m = k.sum()
    labels = np.asarray(labels)
    members = np.flatnonzero(labels == labels[i])
    return float(sum(a[i, j] - k[i] * k[j] / two_m for j in members))


def set_partitions(n: int):
    """Every partition of ``range(n)`` as a restricted-growth label list."""
    def grow(prefix, top):
        if len(prefix) == n:
            yield list(prefix)
            return
        for lab in range(top + 2):
            yield from grow(prefix + [lab], max(top, lab))
    yield from grow([0], 0)


def components_oracle(chrom) -> list[frozenset]:
    """Connected components of the undirected genotype graph via breadth-first search."""
    n = len(chrom)
    adj = [set() for _ in range(n)]
    for i, j in enumerate(chrom):
        if i != j:
            adj[i].add(int(j))
            adj[int(j)].add(i)
    seen, comps = set(), []
    for s in range(n):
        if s in seen:
            continue
        comp, frontier = {s}, [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u] - comp:
                    comp.add(v)
                    nxt.append(v)
            frontier = nxt
        seen |= comp
        comps.append(frozenset(comp))
    return comps


def groups(labels) -> set[frozenset]:
    labels = np.asarray(labels)
    return {frozenset(np.flatnonzero(labels == c).tolist()) for c in np.unique(labels)}


# ---- acceptance reporting -----------------------------------------------------------------

_criteria: list[tuple[str, str]] = []
_details: dict[str, str] = {}


@pytest.fixture
def measured(request):
    """Callable that attaches the measured values to this criterion's summary line."""
    def note(text: str):
        _details[request.node.nodeid] = text
        print(text)
    return note


def pytest_runtest_logreport(report):
    if "acceptance" not in report.keywords:
        return
    if report.when == "call" or (report.when == "setup" and report.failed):
        _criteria.append((report.nodeid, report.outcome))
        if report.failed and report.nodeid not in _details:
            lines = report.longreprtext.strip().splitlines()
            _details[report.nodeid] = lines[-1] if lines else "failed"


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for nodeid, outcome in _criteria:
        verdict = "PASS" if outcome == "passed" else "FAIL"
        detail = _details.get(nodeid, "")
        terminalreporter.write_line(f"{verdict}  {nodeid.split('::')[-1]}: {detail}")

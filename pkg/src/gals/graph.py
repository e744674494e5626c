"""Undirected simple networks and the text formats they are read from.

Nodes are remapped to contiguous ids ``0..n-1``; the original tokens are kept
in ``Network.node_names`` and used for every piece of output.
"""
from __future__ import annotations

import logging
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Sequence

import numpy as np

logger = logging.getLogger(__name__)


class GraphParseError(ValueError):
    """Raised for malformed network or partition files."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def _as_text(data: str | bytes) -> str:
    if isinstance(data, bytes):
        return data.decode("utf-8")
    return data


def _token_key(token: str):
    # integers sort numerically and before any non-numeric token
    try:
        return (0, int(token), "")
    except ValueError:
        return (1, 0, token)


@dataclass(frozen=True, eq=False)
class Network:
    """Immutable undirected simple graph stored in CSR form.

    ``indptr``/``indices`` hold the sorted neighbor lists, so the neighbors of
    node ``i`` are ``indices[indptr[i]:indptr[i + 1]]``.
    """

    indptr: np.ndarray
    indices: np.ndarray
    node_names: tuple[str, ...]
    degrees: np.ndarray = field(init=False)
    edge_count: int = field(init=False)

    def __post_init__(self):
        indptr = np.ascontiguousarray(self.indptr, dtype=np.int64)
        indices = np.ascontiguousarray(self.indices, dtype=np.int64)
        degrees = np.diff(indptr)
        if len(self.node_names) != len(degrees):
            raise ValueError("node_names length does not match node count")
        if degrees.sum() % 2:
            raise ValueError("adjacency is not symmetric")
        for arr in (indptr, indices, degrees):
            arr.setflags(write=False)
        object.__setattr__(self, "indptr", indptr)
        object.__setattr__(self, "indices", indices)
        object.__setattr__(self, "degrees", degrees)
        object.__setattr__(self, "edge_count", int(degrees.sum()) // 2)
        object.__setattr__(self, "node_names", tuple(self.node_names))

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]],
                   node_names: Sequence[str] | None = None) -> "Network":
        """Build from 0-based index pairs; duplicates collapse, self-loops raise."""
        pairs = np.asarray(list(edges), dtype=np.int64).reshape(-1, 2)
        if len(pairs) and (pairs.min() < 0 or pairs.max() >= n):
            raise ValueError("edge endpoint out of range")
        if np.any(pairs[:, 0] == pairs[:, 1]):
            raise ValueError("self-loops are not allowed")
        both = np.concatenate([pairs, pairs[:, ::-1]])
        both = np.unique(both, axis=0) if len(both) else both
        indptr = np.zeros(n + 1, dtype=np.int64)
        np.add.at(indptr, both[:, 0] + 1, 1)
        np.cumsum(indptr, out=indptr)
        if node_names is None:
            node_names = [str(i) for i in range(n)]
        # np.unique sorts rows lexicographically, so neighbor lists come out sorted
        return cls(indptr, both[:, 1].copy(), tuple(node_names))

    @property
    def node_count(self) -> int:
        return len(self.degrees)

    @property
    def adjacency(self) -> list[np.ndarray]:
        return [self.neighbors(i) for i in range(self.node_count)]

    def neighbors(self, i: int) -> np.ndarray:
        return self.indices[self.indptr[i]:self.indptr[i + 1]]

    def edges(self) -> np.ndarray:
        """All edges as an ``(m, 2)`` array with ``u < v``."""
        src = np.repeat(np.arange(self.node_count), self.degrees)
        keep = src < self.indices
        return np.column_stack([src[keep], self.indices[keep]])

    def node_index(self) -> dict[str, int]:
        return {name: i for i, name in enumerate(self.node_names)}

    def adjacency_matrix(self) -> np.ndarray:
        n = self.node_count
        a = np.zeros((n, n), dtype=np.int64)
        src = np.repeat(np.arange(n), self.degrees)
        a[src, self.indices] = 1
        return a

    def __eq__(self, other):
        if not isinstance(other, Network):
            return NotImplemented
        return (self.node_names == other.node_names
                and np.array_equal(self.indptr, other.indptr)
                and np.array_equal(self.indices, other.indices))

    def __hash__(self):
        return hash((self.node_names, self.indices.tobytes()))

    def __repr__(self):
        return f"Network(n={self.node_count}, m={self.edge_count})"


def _build(named_edges: list[tuple[str, str]], extra_nodes: Iterable[str] = ()) -> Network:
    names = set(extra_nodes)
    for pair in named_edges:
        names.update(pair)
    names = sorted(names, key=_token_key)
    if not names:
        raise GraphParseError("network has no nodes")
    index = {name: i for i, name in enumerate(names)}
    edges = [(index[a], index[b]) for a, b in named_edges]
    return Network.from_edges(len(names), edges, names)


def parse_edge_list(data: str | bytes) -> Network:
    """Parse whitespace-separated ``u v`` lines; ``#`` starts a comment."""
    named = []
    for lineno, raw in enumerate(_as_text(data).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(f"expected 2 node tokens, got {len(tokens)}", lineno)
        if tokens[0] == tokens[1]:
            raise GraphParseError(f"self-loop on node {tokens[0]!r}", lineno)
        named.append((tokens[0], tokens[1]))
    if not named:
        raise GraphParseError("empty edge list")
    return _build(named)


_GML_TOKEN = re.compile(r'#[^\n]*|(\[)|(\])|"([^"]*)"|([^\s\[\]"#]+)')


def _gml_tokens(text: str):
    lineno, last = 1, 0
    for match in _GML_TOKEN.finditer(text):
        lineno += text.count("\n", last, match.start())
        last = match.start()
        open_, close, quoted, word = match.groups()
        if open_:
            yield "[", lineno
        elif close:
            yield "]", lineno
        elif quoted is not None:
            yield ("str", quoted), lineno
        elif word is not None:
            yield ("word", word), lineno


def _gml_tree(text: str) -> list:
    """Nested ``[(key, value), ...]`` lists; values are strings or sub-lists."""
    stack: list[list] = [[]]
    key = None
    lineno = 0
    for tok, lineno in _gml_tokens(text):
        if tok == "[":
            if key is None:
                raise GraphParseError("list without a key", lineno)
            child: list = []
            stack[-1].append((key, child))
            stack.append(child)
            key = None
        elif tok == "]":
            if key is not None:
                raise GraphParseError(f"key {key!r} has no value", lineno)
            if len(stack) == 1:
                raise GraphParseError("unbalanced ']'", lineno)
            stack.pop()
        elif key is None:
            key = tok[1]
        else:
            stack[-1].append((key, tok[1]))
            key = None
    if len(stack) != 1:
        raise GraphParseError("unbalanced '[': missing closing bracket", lineno)
    if key is not None:
        raise GraphParseError(f"key {key!r} has no value", lineno)
    return stack[0]


def _gml_graph(text: str) -> list:
    graphs = [v for k, v in _gml_tree(_as_text(text)) if k == "graph" and isinstance(v, list)]
    if not graphs:
        raise GraphParseError("no 'graph [ ... ]' block found")
    return graphs[0]


def _gml_field(entry: list, key: str, what: str) -> str:
    for k, v in entry:
        if k == key and not isinstance(v, list):
            return v
    raise GraphParseError(f"{what} is missing '{key}'")


def parse_gml(data: str | bytes) -> Network:
    """Parse the ``graph [ node [ id ] edge [ source target ] ]`` subset of GML.

    Node ids become the node names. Unknown keys are ignored; a ``directed 1``
    flag is warned about and the edges are symmetrized; edge weights are
    ignored with a warning.
    """
    graph = _gml_graph(data)
    nodes: list[str] = []
    named: list[tuple[str, str]] = []
    weighted = False
    for key, value in graph:
        if key == "directed" and value not in ("0",):
            logger.warning("GML graph is marked directed; edges are symmetrized")
        elif key == "node" and isinstance(value, list):
            nodes.append(_gml_field(value, "id", "node"))
        elif key == "edge" and isinstance(value, list):
            src = _gml_field(value, "source", "edge")
            dst = _gml_field(value, "target", "edge")
            if src == dst:
                raise GraphParseError(f"self-loop on node {src!r}")
            weighted = weighted or any(k in ("weight", "value") for k, _ in value)
            named.append((src, dst))
    if weighted:
        logger.warning("GML edge weights are ignored; the network is treated as unweighted")
    unknown = {a for e in named for a in e} - set(nodes)
    if nodes and unknown:
        raise GraphParseError(f"edge refers to undeclared node {sorted(unknown)[0]!r}")
    return _build(named, nodes)


def gml_node_attribute(data: str | bytes, key: str) -> dict[str, str]:
    """Map node id to the value of ``key`` for every GML node that carries it."""
    out = {}
    for k, value in _gml_graph(data):
        if k == "node" and isinstance(value, list):
            attrs = dict(item for item in value if not isinstance(item[1], list))
            if key in attrs:
                out[_gml_field(value, "id", "node")] = attrs[key]
    return out


def parse_ground_truth(data: str | bytes, net: Network):
    """Read ``node community`` lines into a :class:`~gals.encoding.Partition`."""
    from .encoding import Partition

    index = net.node_index()
    labels = np.full(net.node_count, -1, dtype=np.int64)
    community_ids: dict[str, int] = {}
    for lineno, raw in enumerate(_as_text(data).splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tokens = line.split()
        if len(tokens) != 2:
            raise GraphParseError(f"expected 'node community', got {len(tokens)} tokens", lineno)
        node, comm = tokens
        if node not in index:
            raise GraphParseError(f"unknown node {node!r}", lineno)
        i = index[node]
        if labels[i] >= 0:
            raise GraphParseError(f"duplicate entry for node {node!r}", lineno)
        labels[i] = community_ids.setdefault(comm, len(community_ids))
    missing = np.flatnonzero(labels < 0)
    if len(missing):
        raise GraphParseError(f"no community given for node {net.node_names[missing[0]]!r}"
                              f" ({len(missing)} missing)")
    return Partition.from_labels(labels, net)


def to_edge_list(net: Network) -> str:
    """Canonical edge-list text: one ``u v`` line per edge, ``u < v`` by id."""
    names = net.node_names
    return "".join(f"{names[u]} {names[v]}\n" for u, v in net.edges())


def detect_format(path: str | Path) -> str:
    return "gml" if Path(path).suffix.lower() == ".gml" else "edgelist"


def load_network(path: str | Path, fmt: str | None = None) -> Network:
    fmt = fmt or detect_format(path)
    data = Path(path).read_bytes()
    if fmt == "gml":
        return parse_gml(data)
    if fmt == "edgelist":
        return parse_edge_list(data)
    raise ValueError(f"unknown network format {fmt!r}")


def load_partition(path: str | Path, net: Network):
    return parse_ground_truth(Path(path).read_bytes(), net)


def bundled(name: str) -> bytes:
    """Raw bytes of a data file shipped inside the package."""
    return resources.files("gals").joinpath("data", name).read_bytes()


def karate() -> Network:
    return parse_edge_list(bundled("karate.txt"))

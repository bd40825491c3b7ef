"""Graph data model, induced subgraphs, edge ablation, and dataset I/O.

A :class:`Graph` is a node feature matrix plus an edge list; a
:class:`Subgraph` is a node subset of a parent graph together with the
edges the parent induces on it, reindexed to local node numbering.  Both
are immutable after construction and safe to share across workers.

Graphs serialize to a JSON object::

    {"num_nodes": int, "directed": bool, "edges": [[int, int], ...],
     "features": [[float, ...], ...], "label": int|null, "num_classes": int}

A dataset is a directory of such files plus a ``manifest.json`` listing
filenames with ``"train"`` / ``"test"`` split tags.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np

from .errors import (
    EmptyNodeSet,
    FormatError,
    InvalidNodeSet,
    NotAnEdge,
    ValidationError,
)

__all__ = [
    "Graph",
    "Subgraph",
    "DatasetEntry",
    "induced_subgraph",
    "edge_removed",
    "load_graph",
    "save_graph",
    "load_dataset",
]


def _canonical_edges(edges, num_nodes: int, directed: bool) -> tuple[tuple[int, int], ...]:
    """Validate and canonicalize an edge list.

    Undirected edges are stored once per unordered pair as (min, max); the
    whole list is sorted so equal graphs have identical edge tuples.
    """
    out = []
    for e in edges:
        if len(e) != 2:
            raise ValidationError(f"edge {e!r} is not a pair")
        i, j = int(e[0]), int(e[1])
        if not (0 <= i < num_nodes) or not (0 <= j < num_nodes):
            raise ValidationError(f"edge ({i}, {j}) out of range for {num_nodes} nodes")
        if i == j:
            raise ValidationError(f"self-loop on node {i} is not allowed")
        if not directed and i > j:
            i, j = j, i
        out.append((i, j))
    out.sort()
    for a, b in zip(out, out[1:]):
        if a == b:
            raise ValidationError(f"duplicate edge {a}")
    return tuple(out)


@dataclass(frozen=True)
class Graph:
    """An attributed graph: N nodes, an edge list, and an N x d feature matrix.

    Invariants enforced at construction: all endpoints in range, no
    self-loops, no duplicates, undirected pairs stored once, features have
    exactly one row per node.
    """

    num_nodes: int
    edges: tuple[tuple[int, int], ...]
    features: np.ndarray
    directed: bool = False
    label: int | None = None
    num_classes: int = 2

    def __post_init__(self):
        if int(self.num_nodes) < 1:
            raise ValidationError("num_nodes must be a positive integer")
        object.__setattr__(self, "num_nodes", int(self.num_nodes))
        object.__setattr__(self, "directed", bool(self.directed))
        object.__setattr__(
            self, "edges", _canonical_edges(self.edges, self.num_nodes, self.directed)
        )
        feats = np.array(self.features, dtype=float)
        if feats.ndim != 2:
            raise ValidationError("features must be a 2-D matrix")
        if feats.shape[0] != self.num_nodes:
            raise ValidationError(
                f"features have {feats.shape[0]} rows, expected {self.num_nodes}"
            )
        if feats.shape[1] < 1:
            raise ValidationError("feature dimension must be >= 1")
        if not np.all(np.isfinite(feats)):
            raise ValidationError("features must be finite")
        feats.flags.writeable = False
        object.__setattr__(self, "features", feats)
        if int(self.num_classes) < 1:
            raise ValidationError("num_classes must be a positive integer")
        object.__setattr__(self, "num_classes", int(self.num_classes))
        if self.label is not None:
            label = int(self.label)
            if not (0 <= label < self.num_classes):
                raise ValidationError(f"label {label} outside [0, {self.num_classes})")
            object.__setattr__(self, "label", label)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (
            self.num_nodes == other.num_nodes
            and self.directed == other.directed
            and self.edges == other.edges
            and self.features.shape == other.features.shape
            and bool(np.all(self.features == other.features))
            and self.label == other.label
            and self.num_classes == other.num_classes
        )

    def __hash__(self):
        return hash((self.num_nodes, self.directed, self.edges, self.features.tobytes()))

    @property
    def num_edges(self) -> int:
        return len(self.edges)

    @property
    def feature_dim(self) -> int:
        return self.features.shape[1]

    @cached_property
    def adjacency(self) -> np.ndarray:
        """Dense 0/1 adjacency; symmetric when undirected. Read-only."""
        a = np.zeros((self.num_nodes, self.num_nodes))
        for i, j in self.edges:
            a[i, j] = 1.0
            if not self.directed:
                a[j, i] = 1.0
        a.flags.writeable = False
        return a

    def has_edge(self, i: int, j: int) -> bool:
        if self.directed:
            return (i, j) in self._edge_set
        return (min(i, j), max(i, j)) in self._edge_set

    @cached_property
    def _edge_set(self) -> frozenset:
        return frozenset(self.edges)

    def neighbors(self, i: int) -> tuple[int, ...]:
        """Nodes j with (i, j) an edge; for undirected graphs, either endpoint."""
        if not (0 <= i < self.num_nodes):
            raise InvalidNodeSet(f"node {i} out of range")
        out = []
        for a, b in self.edges:
            if a == i:
                out.append(b)
            elif not self.directed and b == i:
                out.append(a)
        return tuple(sorted(out))


@dataclass(frozen=True)
class Subgraph:
    """A node subset of a parent graph with the induced, locally reindexed edges.

    ``node_ids`` is strictly increasing; local node k corresponds to parent
    node ``node_ids[k]``.  Construct through :func:`induced_subgraph`.
    """

    parent: Graph
    node_ids: tuple[int, ...]
    induced_edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        ids = tuple(int(v) for v in self.node_ids)
        if len(ids) < 1:
            raise EmptyNodeSet("a subgraph needs at least one node")
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise ValidationError("node_ids must be strictly increasing")
        object.__setattr__(self, "node_ids", ids)
        object.__setattr__(
            self, "induced_edges", tuple((int(i), int(j)) for i, j in self.induced_edges)
        )

    @property
    def num_nodes(self) -> int:
        return len(self.node_ids)

    @property
    def num_edges(self) -> int:
        return len(self.induced_edges)

    @property
    def edges(self) -> tuple[tuple[int, int], ...]:
        return self.induced_edges

    @property
    def directed(self) -> bool:
        return self.parent.directed

    @property
    def num_classes(self) -> int:
        return self.parent.num_classes

    @property
    def features(self) -> np.ndarray:
        return self.parent.features[list(self.node_ids), :]

    @property
    def feature_dim(self) -> int:
        return self.parent.feature_dim

    @cached_property
    def adjacency(self) -> np.ndarray:
        a = np.zeros((self.num_nodes, self.num_nodes))
        for i, j in self.induced_edges:
            a[i, j] = 1.0
            if not self.directed:
                a[j, i] = 1.0
        a.flags.writeable = False
        return a


def induced_subgraph(g: Graph, nodes) -> Subgraph:
    """Extract the subgraph of ``g`` induced by ``nodes``.

    Keeps exactly the parent edges with both endpoints in ``nodes`` and
    reindexes them to local positions in the sorted node list.
    """
    ids = sorted({int(v) for v in nodes})
    if not ids:
        raise EmptyNodeSet("cannot induce a subgraph on an empty node set")
    if ids[0] < 0 or ids[-1] >= g.num_nodes:
        raise InvalidNodeSet(
            f"node ids {ids[0]}..{ids[-1]} outside [0, {g.num_nodes})"
        )
    local = {v: k for k, v in enumerate(ids)}
    kept = tuple(
        (local[i], local[j]) for i, j in g.edges if i in local and j in local
    )
    return Subgraph(parent=g, node_ids=tuple(ids), induced_edges=kept)


def edge_removed(g: Graph, i: int, j: int) -> Graph:
    """Copy of ``g`` without edge (i, j).

    For undirected graphs the unordered pair is removed; for directed
    graphs only (i, j) is removed and any reverse edge survives.
    """
    target = (i, j) if g.directed else (min(i, j), max(i, j))
    if target not in g._edge_set:
        raise NotAnEdge(f"({i}, {j}) is not an edge")
    remaining = tuple(e for e in g.edges if e != target)
    return Graph(
        num_nodes=g.num_nodes,
        edges=remaining,
        features=g.features,
        directed=g.directed,
        label=g.label,
        num_classes=g.num_classes,
    )


# --------------------------------------------------------------------------
# Serialization
# --------------------------------------------------------------------------

_REQUIRED_KEYS = {
    "num_nodes": int,
    "directed": bool,
    "edges": list,
    "features": list,
    "num_classes": int,
}


def _graph_from_dict(obj, origin: str = "<graph>") -> Graph:
    if not isinstance(obj, dict):
        raise FormatError(f"{origin}: expected a JSON object")
    for key, typ in _REQUIRED_KEYS.items():
        if key not in obj:
            raise FormatError(f"{origin}: missing key '{key}'")
        if not isinstance(obj[key], typ):
            raise FormatError(f"{origin}: '{key}' must be {typ.__name__}")
    if "label" not in obj:
        raise FormatError(f"{origin}: missing key 'label'")
    label = obj["label"]
    if label is not None and not isinstance(label, int):
        raise FormatError(f"{origin}: 'label' must be int or null")
    for idx, e in enumerate(obj["edges"]):
        if not isinstance(e, list) or len(e) != 2 or not all(isinstance(v, int) for v in e):
            raise FormatError(f"{origin}: 'edges[{idx}]' must be a pair of ints")
    for idx, row in enumerate(obj["features"]):
        if not isinstance(row, list) or not all(isinstance(v, (int, float)) for v in row):
            raise FormatError(f"{origin}: 'features[{idx}]' must be a list of numbers")
    return Graph(
        num_nodes=obj["num_nodes"],
        edges=[tuple(e) for e in obj["edges"]],
        features=obj["features"],
        directed=obj["directed"],
        label=label,
        num_classes=obj["num_classes"],
    )


def _graph_to_dict(g: Graph) -> dict:
    return {
        "num_nodes": g.num_nodes,
        "directed": g.directed,
        "edges": [list(e) for e in g.edges],
        "features": [list(map(float, row)) for row in g.features],
        "label": g.label,
        "num_classes": g.num_classes,
    }


def load_graph(path) -> Graph:
    """Load a graph from its JSON file; load(save(g)) == g field for field."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return _graph_from_dict(obj, origin=str(path))


def save_graph(g: Graph, path) -> None:
    path = Path(path)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(_graph_to_dict(g), fh, sort_keys=True, indent=2)
        fh.write("\n")


@dataclass(frozen=True)
class DatasetEntry:
    name: str
    split: str
    graph: Graph = field(compare=False)


def load_dataset(directory) -> list[DatasetEntry]:
    """Load every graph listed in ``manifest.json`` under ``directory``."""
    directory = Path(directory)
    manifest_path = directory / "manifest.json"
    if not manifest_path.exists():
        raise FormatError(f"{manifest_path}: manifest not found")
    with open(manifest_path, "r", encoding="utf-8") as fh:
        try:
            manifest = json.load(fh)
        except json.JSONDecodeError as exc:
            raise FormatError(f"{manifest_path}: not valid JSON ({exc})") from exc
    if not isinstance(manifest, dict) or "graphs" not in manifest:
        raise FormatError(f"{manifest_path}: missing key 'graphs'")
    entries = []
    for idx, item in enumerate(manifest["graphs"]):
        if not isinstance(item, dict) or "file" not in item or "split" not in item:
            raise FormatError(f"{manifest_path}: 'graphs[{idx}]' needs 'file' and 'split'")
        if item["split"] not in ("train", "test"):
            raise FormatError(
                f"{manifest_path}: 'graphs[{idx}].split' must be 'train' or 'test'"
            )
        graph = load_graph(directory / item["file"])
        entries.append(DatasetEntry(name=os.path.basename(item["file"]), split=item["split"], graph=graph))
    return entries

"""Build graphs, extract induced subgraphs, and measure edge density.

Run: python demos/01_graphs_and_subgraphs.py
"""

import tempfile
from pathlib import Path

import numpy as np

from conceptrank import Graph, edge_density, edge_removed, induced_subgraph, load_graph, save_graph

# A small molecule-ish graph: a 6-ring with one chord and a pendant node.
ring = [(i, (i + 1) % 6) for i in range(6)]
g = Graph(
    num_nodes=7,
    edges=ring + [(0, 3), (2, 6)],
    features=np.random.default_rng(0).normal(size=(7, 3)),
    label=1,
    num_classes=2,
)
print(f"graph: {g.num_nodes} nodes, {g.num_edges} edges, density {edge_density(g):.3f}")

# Induced subgraphs keep exactly the parent edges inside the node set,
# reindexed to local ids.
sub = induced_subgraph(g, {0, 1, 2, 3})
print(f"subgraph on {sub.node_ids}: local edges {sub.induced_edges}")
print(f"subgraph density {edge_density(sub):.3f}")

# Ablating an edge yields a new graph; the original is immutable.
cut = edge_removed(g, 0, 3)
print(f"after removing the chord: {cut.num_edges} edges (was {g.num_edges})")

# Round trip through the JSON interchange format.
with tempfile.TemporaryDirectory() as tmp:
    path = Path(tmp) / "demo_graph.json"
    save_graph(g, path)
    assert load_graph(path) == g
    print(f"serialized round trip ok ({path.stat().st_size} bytes)")

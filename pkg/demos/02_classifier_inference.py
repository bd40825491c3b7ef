"""Evaluate a graph-convolution classifier from its interchange format.

The engine is inference-only: weights come from a JSON file (here built
inline), and every call is a pure function of the model and the graph.

Run: python demos/02_classifier_inference.py
"""

import numpy as np

from conceptrank import Graph, forward, induced_subgraph, masked_forward, model_from_dict

gen = np.random.default_rng(1)

model = model_from_dict({
    "layers": [
        {"weight": (gen.normal(size=(3, 8)) / np.sqrt(3)).tolist(),
         "bias": [0.0] * 8, "activation": "relu"},
        {"weight": (gen.normal(size=(8, 8)) / np.sqrt(8)).tolist(),
         "bias": [0.0] * 8, "activation": "relu"},
    ],
    "pooling": "mean",
    "head": {"weight": (gen.normal(size=(8, 2)) / np.sqrt(8)).tolist(), "bias": [0.0, 0.0]},
    "num_classes": 2,
    "feature_dim": 3,
})

g = Graph(
    num_nodes=8,
    edges=[(i, (i + 1) % 8) for i in range(8)] + [(0, 4), (1, 5)],
    features=gen.normal(size=(8, 3)),
    num_classes=2,
)

probs = forward(model, g)
print(f"class distribution: {np.round(probs, 4)} (sums to {probs.sum():.12f})")

# Node order must not matter: relabel the nodes and compare.
perm = gen.permutation(8)
inv = np.argsort(perm)
relabeled = Graph(
    num_nodes=8,
    edges=[(int(inv[i]), int(inv[j])) for i, j in g.edges],
    features=g.features[perm],
    num_classes=2,
)
print(f"permutation gap: {np.abs(forward(model, relabeled) - probs).max():.2e}")

# Masking zeroes node features while keeping the topology; this is the
# payoff primitive behind the Shapley relevance scores.
concept = induced_subgraph(g, {0, 1, 2, 3})
print(f"concept, all nodes active:  {np.round(masked_forward(model, concept, range(4)), 4)}")
print(f"concept, only node 0 active:{np.round(masked_forward(model, concept, [0]), 4)}")
print(f"concept, nothing active:    {np.round(masked_forward(model, concept, []), 4)}")

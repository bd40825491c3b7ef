"""Shared toy instances for the demo scripts."""

import numpy as np

from conceptrank import Graph, model_from_dict


def demo_graph(n=16, seed=3):
    gen = np.random.default_rng(seed)
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)}
    while len(edges) < n + 8:
        i, j = sorted(gen.choice(n, size=2, replace=False).tolist())
        edges.add((i, j))
    return Graph(
        num_nodes=n,
        edges=sorted(edges),
        features=gen.normal(size=(n, 3)),
        num_classes=3,
    )


def demo_model(seed=3, feature_dim=3, hidden=8, num_classes=3):
    gen = np.random.default_rng(seed)
    dims = [feature_dim, hidden, hidden]
    layers = [
        {
            "weight": (gen.normal(size=(a, b)) / np.sqrt(a)).tolist(),
            "bias": (0.1 * gen.normal(size=b)).tolist(),
            "activation": "relu",
        }
        for a, b in zip(dims, dims[1:])
    ]
    return model_from_dict({
        "layers": layers,
        "pooling": "mean",
        "head": {
            "weight": (gen.normal(size=(hidden, num_classes)) / np.sqrt(hidden)).tolist(),
            "bias": (0.1 * gen.normal(size=num_classes)).tolist(),
        },
        "num_classes": num_classes,
        "feature_dim": feature_dim,
    })

import json
from pathlib import Path

import numpy as np
import pytest

from conceptrank import Graph, ModelSpec, model_from_dict, save_graph


def make_graph(seed=0, n=20, extra_edges=12, d=4, num_classes=3, directed=False) -> Graph:
    """Connected random test graph: a cycle plus random chords."""
    gen = np.random.default_rng(seed)
    edges = {(i, (i + 1) % n) if i < (i + 1) % n else ((i + 1) % n, i) for i in range(n)}
    target = min(len(edges) + extra_edges, n * (n - 1) // 2)
    while len(edges) < target:
        i, j = sorted(gen.choice(n, size=2, replace=False).tolist())
        edges.add((i, j))
    feats = gen.normal(size=(n, d))
    return Graph(
        num_nodes=n,
        edges=sorted(edges),
        features=feats,
        directed=directed,
        label=int(gen.integers(num_classes)),
        num_classes=num_classes,
    )


def make_model(seed=0, feature_dim=4, hidden=8, num_classes=3, num_layers=2,
               pooling="mean", activation="relu") -> ModelSpec:
    """Random-weight classifier with sane (1/sqrt d_in) scaling."""
    gen = np.random.default_rng(seed)
    dims = [feature_dim] + [hidden] * num_layers
    layers = []
    for d_in, d_out in zip(dims, dims[1:]):
        layers.append({
            "weight": (gen.normal(size=(d_in, d_out)) / np.sqrt(d_in)).tolist(),
            "bias": (0.1 * gen.normal(size=d_out)).tolist(),
            "activation": activation,
        })
    head_in = dims[-1] * (2 if pooling == "mean_concat_max" else 1)
    return model_from_dict({
        "layers": layers,
        "pooling": pooling,
        "head": {
            "weight": (gen.normal(size=(head_in, num_classes)) / np.sqrt(head_in)).tolist(),
            "bias": (0.1 * gen.normal(size=num_classes)).tolist(),
        },
        "num_classes": num_classes,
        "feature_dim": feature_dim,
    })


def model_to_dict(m: ModelSpec) -> dict:
    return {
        "layers": [
            {"weight": l.weight.tolist(), "bias": l.bias.tolist(), "activation": l.activation}
            for l in m.layers
        ],
        "pooling": m.pooling,
        "head": {"weight": m.head.weight.tolist(), "bias": m.head.bias.tolist()},
        "num_classes": m.num_classes,
        "feature_dim": m.feature_dim,
    }


@pytest.fixture()
def toy_graph() -> Graph:
    return make_graph(seed=7)


@pytest.fixture()
def toy_model() -> ModelSpec:
    return make_model(seed=7)


@pytest.fixture()
def toy_files(tmp_path, toy_graph, toy_model):
    """Model + graph JSON files for driving the CLI."""
    graph_path = tmp_path / "toy_graph.json"
    model_path = tmp_path / "toy_model.json"
    save_graph(toy_graph, graph_path)
    model_path.write_text(json.dumps(model_to_dict(toy_model)), encoding="utf-8")
    return model_path, graph_path


@pytest.fixture()
def toy_dataset(tmp_path, toy_model) -> Path:
    """Small on-disk dataset with a manifest, for sweep/benchmark commands."""
    root = tmp_path / "toyset"
    root.mkdir()
    manifest = []
    for k in range(4):
        g = make_graph(seed=100 + k, n=14, extra_edges=6)
        name = f"g{k}.json"
        save_graph(g, root / name)
        manifest.append({"file": name, "split": "train" if k < 2 else "test"})
    (root / "manifest.json").write_text(json.dumps({"graphs": manifest}), encoding="utf-8")
    return root

"""Serialization into the inference engine's interchange formats.

Exports are pure functions of the checkpoint: re-exporting the same
checkpoint yields byte-identical files.  ``fixtures.json`` records
trainer-side class probabilities for held-out graphs so the consumer can
verify the round trip numerically.
"""

from __future__ import annotations

import json
from pathlib import Path

from .data import GraphRecord
from .model import GcnClassifier
from .train import Checkpoint


def _dump(obj, path: Path) -> None:
    path.write_text(json.dumps(obj, sort_keys=True, indent=2) + "\n", encoding="utf-8")


def model_payload(model: GcnClassifier) -> dict:
    return {
        "layers": [
            {
                "weight": conv.weight.detach().numpy().tolist(),
                "bias": conv.bias.detach().numpy().tolist(),
                "activation": conv.activation,
            }
            for conv in model.convs
        ],
        "pooling": model.pooling,
        "head": {
            "weight": model.head_weight.detach().numpy().tolist(),
            "bias": model.head_bias.detach().numpy().tolist(),
        },
        "num_classes": model.num_classes,
        "feature_dim": model.feature_dim,
    }


def export_model(ckpt: Checkpoint, path) -> Path:
    path = Path(path)
    _dump(model_payload(ckpt.model), path)
    return path


def graph_payload(rec: GraphRecord) -> dict:
    return {
        "num_nodes": int(rec.features.shape[0]),
        "directed": False,
        "edges": [list(e) for e in rec.edges],
        "features": [[float(v) for v in row] for row in rec.features],
        "label": int(rec.label),
        "num_classes": int(rec.num_classes),
    }


def export_dataset(train_records, test_records, directory) -> Path:
    """Write graph files plus the manifest with train/test split tags."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    manifest = []
    for split, records in (("train", train_records), ("test", test_records)):
        for k, rec in enumerate(records):
            name = f"{split}_{k:04d}.json"
            _dump(graph_payload(rec), directory / name)
            manifest.append({"file": name, "split": split})
    _dump({"graphs": manifest}, directory / "manifest.json")
    return directory


def export_fixtures(ckpt: Checkpoint, records, directory, count: int = 10) -> Path:
    """Held-out graphs plus trainer-side probabilities for round-trip checks."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    fixtures = []
    for k, rec in enumerate(records[:count]):
        name = f"fixture_{k:04d}.json"
        _dump(graph_payload(rec), directory / name)
        probs = ckpt.model.predict_proba(rec.features, rec.edges)
        fixtures.append({"graph": name, "probs": [float(v) for v in probs]})
    _dump(fixtures, directory / "fixtures.json")
    return directory / "fixtures.json"


def export_manifest_entry(ckpt: Checkpoint, name: str) -> dict:
    """Reproducibility record pinned at fixture-build time."""
    return {
        "name": name,
        "hidden": ckpt.config.hidden,
        "num_layers": ckpt.config.num_layers,
        "activation": ckpt.config.activation,
        "pooling": ckpt.config.pooling,
        "learning_rate": ckpt.config.learning_rate,
        "epochs": ckpt.epochs_run,
        "seed": ckpt.config.seed,
        "train_accuracy": ckpt.train_accuracy,
        "test_accuracy": ckpt.test_accuracy,
    }

"""Training and export side of the graph-classifier explanation toolkit.

Trains graph-convolution classifiers (synthetic toy data out of the box,
TU-format benchmarks when available locally) and exports models, datasets,
and round-trip fixtures in the interchange formats the explanation engine
consumes.
"""

from .data import (
    DatasetUnavailable,
    GraphRecord,
    download_tu_dataset,
    load_tu_dataset,
    split_records,
    toy_cycles_vs_stars,
)
from .export import (
    export_dataset,
    export_fixtures,
    export_manifest_entry,
    export_model,
    graph_payload,
    model_payload,
)
from .model import GcnClassifier, GraphConv, normalized_adjacency
from .train import Checkpoint, TrainConfig, accuracy, train

__version__ = "0.1.0"

__all__ = [
    "Checkpoint",
    "DatasetUnavailable",
    "GcnClassifier",
    "GraphConv",
    "GraphRecord",
    "TrainConfig",
    "accuracy",
    "download_tu_dataset",
    "export_dataset",
    "export_fixtures",
    "export_manifest_entry",
    "export_model",
    "graph_payload",
    "load_tu_dataset",
    "model_payload",
    "normalized_adjacency",
    "split_records",
    "toy_cycles_vs_stars",
    "train",
]

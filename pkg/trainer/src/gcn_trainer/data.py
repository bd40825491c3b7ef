"""Dataset handling: a synthetic toy set, TU-format benchmark parsing, and
a best-effort downloader for the public benchmark archives."""

from __future__ import annotations

import io
import urllib.request
import zipfile
from dataclasses import dataclass
from pathlib import Path

import numpy as np

TU_BASE_URL = "https://www.chrsmrrs.com/graphkerneldatasets"


class DatasetUnavailable(RuntimeError):
    pass


@dataclass
class GraphRecord:
    """One labeled graph in trainer-internal form (0-based, deduplicated)."""

    edges: list[tuple[int, int]]
    features: np.ndarray
    label: int
    num_classes: int


def toy_cycles_vs_stars(count: int = 200, seed: int = 0) -> list[GraphRecord]:
    """Cycles (label 0) vs stars (label 1), 6..14 nodes each.

    Features are [1, degree / max_degree], which keeps the two families
    linearly separable after one round of neighborhood aggregation.
    """
    gen = np.random.default_rng(seed)
    records = []
    for k in range(count):
        n = int(gen.integers(6, 15))
        if k % 2 == 0:
            edges = [(i, (i + 1) % n) for i in range(n)]
            label = 0
        else:
            edges = [(0, i) for i in range(1, n)]
            label = 1
        deg = np.zeros(n)
        for i, j in edges:
            deg[i] += 1
            deg[j] += 1
        feats = np.stack([np.ones(n), deg / deg.max()], axis=1)
        records.append(GraphRecord(edges=edges, features=feats, label=label, num_classes=2))
    return records


def split_records(records, train_fraction: float = 0.75, seed: int = 0):
    gen = np.random.default_rng(seed)
    order = gen.permutation(len(records))
    cut = int(round(train_fraction * len(records)))
    train = [records[i] for i in order[:cut]]
    test = [records[i] for i in order[cut:]]
    return train, test


# ---------------------------------------------------------------------------
# TU benchmark format (PROTEINS, MSRC_9, MSRC_21, ...)
# ---------------------------------------------------------------------------

def load_tu_dataset(root, name: str) -> list[GraphRecord]:
    """Parse a TU-format dataset directory ``root/name``.

    Expects the standard files ``<name>_A.txt``, ``<name>_graph_indicator.txt``
    and ``<name>_graph_labels.txt``; node attributes or one-hot node labels
    become features, with a constant feature as fallback.
    """
    base = Path(root) / name
    if not base.is_dir():
        raise DatasetUnavailable(
            f"dataset '{name}' not found under {root}; run download_tu_dataset('{name}', "
            f"'{root}') or fetch {TU_BASE_URL}/{name}.zip manually and unzip it there"
        )

    def rows(fname):
        path = base / fname
        if not path.exists():
            raise DatasetUnavailable(f"{path} is missing; the archive may be incomplete")
        return path.read_text().strip().splitlines()

    indicator = np.array([int(v) for v in rows(f"{name}_graph_indicator.txt")])
    labels_raw = np.array([int(v) for v in rows(f"{name}_graph_labels.txt")])
    classes = sorted(set(labels_raw.tolist()))
    label_map = {c: i for i, c in enumerate(classes)}

    num_nodes_total = len(indicator)
    node_feats = None
    attr_path = base / f"{name}_node_attributes.txt"
    label_path = base / f"{name}_node_labels.txt"
    if attr_path.exists():
        node_feats = np.array([
            [float(v) for v in line.replace(" ", "").split(",")]
            for line in attr_path.read_text().strip().splitlines()
        ])
    elif label_path.exists():
        node_labels = np.array([int(v) for v in label_path.read_text().strip().splitlines()])
        values = sorted(set(node_labels.tolist()))
        node_feats = np.zeros((num_nodes_total, len(values)))
        for row, v in enumerate(node_labels):
            node_feats[row, values.index(v)] = 1.0
    else:
        node_feats = np.ones((num_nodes_total, 1))

    first_node = np.zeros(labels_raw.size + 1, dtype=int)
    counts = np.bincount(indicator)
    for gid in range(1, labels_raw.size + 1):
        first_node[gid] = first_node[gid - 1] + (counts[gid - 1] if gid > 1 else 0)

    edges_per_graph: dict[int, set] = {gid: set() for gid in range(1, labels_raw.size + 1)}
    for line in rows(f"{name}_A.txt"):
        a, b = (int(v) for v in line.replace(" ", "").split(","))
        gid = int(indicator[a - 1])
        i = a - 1 - first_node[gid]
        j = b - 1 - first_node[gid]
        if i == j:
            continue
        edges_per_graph[gid].add((min(i, j), max(i, j)))

    records = []
    for gid in range(1, labels_raw.size + 1):
        n = int(counts[gid])
        lo = first_node[gid]
        records.append(GraphRecord(
            edges=sorted(edges_per_graph[gid]),
            features=node_feats[lo:lo + n],
            label=label_map[int(labels_raw[gid - 1])],
            num_classes=len(classes),
        ))
    return records


def download_tu_dataset(name: str, root) -> Path:
    """Fetch and unzip a TU archive; raises DatasetUnavailable on failure."""
    root = Path(root)
    target = root / name
    if target.is_dir():
        return target
    url = f"{TU_BASE_URL}/{name}.zip"
    try:
        with urllib.request.urlopen(url, timeout=60) as resp:
            payload = resp.read()
    except Exception as exc:
        raise DatasetUnavailable(
            f"could not download {url} ({exc}); download it manually and unzip "
            f"into {root} so that {target} exists"
        ) from exc
    root.mkdir(parents=True, exist_ok=True)
    with zipfile.ZipFile(io.BytesIO(payload)) as zf:
        zf.extractall(root)
    return target

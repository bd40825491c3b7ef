"""Forward-pass evaluation of a trained graph-convolution classifier.

The engine consumes a model interchange file and evaluates it on graphs or
subgraphs.  Each convolution layer computes

    H' = act( D^{-1/2} (A + I) D^{-1/2} H W + b )

with D the degree matrix of A + I (self-loops give every node degree >= 1).
Node states are pooled (mean, max, or their concatenation), passed through a
dense head, and squashed with a softmax.  A small probability floor is
applied after the softmax and the result renormalized, so every returned
distribution is strictly positive and KL divergences between outputs stay
finite.

Model file schema::

    {"layers": [{"weight": [[...]], "bias": [...],
                 "activation": "relu"|"tanh"|"identity"}, ...],
     "pooling": "mean"|"max"|"mean_concat_max",
     "head": {"weight": [[...]], "bias": [...]},
     "num_classes": int, "feature_dim": int}

Weight matrices are row-major, input-dim x output-dim.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, FormatError, InvalidNodeSet

__all__ = [
    "GcnLayer",
    "DenseHead",
    "ModelSpec",
    "PROB_FLOOR",
    "load_model",
    "model_from_dict",
    "forward",
    "masked_forward",
    "kl_divergence",
]

# Post-softmax probability floor; keeps every KL divergence finite.
PROB_FLOOR = 1e-10

_ACTIVATIONS = {
    "relu": lambda x: np.maximum(x, 0.0),
    "tanh": np.tanh,
    "identity": lambda x: x,
}

_POOLINGS = ("mean", "max", "mean_concat_max")


@dataclass(frozen=True)
class GcnLayer:
    weight: np.ndarray  # d_in x d_out
    bias: np.ndarray  # d_out
    activation: str

    def __post_init__(self):
        w = np.array(self.weight, dtype=float)
        b = np.array(self.bias, dtype=float)
        if w.ndim != 2:
            raise DimensionMismatch("layer weight must be a matrix")
        if b.ndim != 1 or b.shape[0] != w.shape[1]:
            raise DimensionMismatch(
                f"bias length {b.shape} does not match weight columns {w.shape[1]}"
            )
        if self.activation not in _ACTIVATIONS:
            raise FormatError(f"unknown activation '{self.activation}'")
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bias", b)

    @property
    def d_in(self) -> int:
        return self.weight.shape[0]

    @property
    def d_out(self) -> int:
        return self.weight.shape[1]


@dataclass(frozen=True)
class DenseHead:
    weight: np.ndarray  # d_in x num_classes
    bias: np.ndarray

    def __post_init__(self):
        w = np.array(self.weight, dtype=float)
        b = np.array(self.bias, dtype=float)
        if w.ndim != 2:
            raise DimensionMismatch("head weight must be a matrix")
        if b.ndim != 1 or b.shape[0] != w.shape[1]:
            raise DimensionMismatch("head bias length does not match weight columns")
        w.flags.writeable = False
        b.flags.writeable = False
        object.__setattr__(self, "weight", w)
        object.__setattr__(self, "bias", b)


@dataclass(frozen=True)
class ModelSpec:
    """An immutable, inference-only classifier specification."""

    layers: tuple[GcnLayer, ...]
    pooling: str
    head: DenseHead
    num_classes: int
    feature_dim: int

    def __post_init__(self):
        if not self.layers:
            raise DimensionMismatch("model needs at least one convolution layer")
        if self.pooling not in _POOLINGS:
            raise FormatError(f"unknown pooling '{self.pooling}'")
        if self.layers[0].d_in != self.feature_dim:
            raise DimensionMismatch(
                f"first layer expects d_in={self.layers[0].d_in}, "
                f"feature_dim says {self.feature_dim}"
            )
        for k, (a, b) in enumerate(zip(self.layers, self.layers[1:])):
            if a.d_out != b.d_in:
                raise DimensionMismatch(
                    f"layer {k} outputs {a.d_out} but layer {k + 1} expects {b.d_in}"
                )
        pooled_dim = self.layers[-1].d_out
        if self.pooling == "mean_concat_max":
            pooled_dim *= 2
        if self.head.weight.shape[0] != pooled_dim:
            raise DimensionMismatch(
                f"head expects input {self.head.weight.shape[0]}, pooling yields {pooled_dim}"
            )
        if self.head.weight.shape[1] != self.num_classes:
            raise DimensionMismatch(
                f"head outputs {self.head.weight.shape[1]}, num_classes is {self.num_classes}"
            )


def model_from_dict(obj, origin: str = "<model>") -> ModelSpec:
    """Build a validated ModelSpec from a parsed JSON object."""
    if not isinstance(obj, dict):
        raise FormatError(f"{origin}: expected a JSON object")
    for key in ("layers", "pooling", "head", "num_classes", "feature_dim"):
        if key not in obj:
            raise FormatError(f"{origin}: missing key '{key}'")
    if not isinstance(obj["layers"], list) or not obj["layers"]:
        raise FormatError(f"{origin}: 'layers' must be a non-empty list")
    layers = []
    for idx, layer in enumerate(obj["layers"]):
        if not isinstance(layer, dict):
            raise FormatError(f"{origin}: 'layers[{idx}]' must be an object")
        for key in ("weight", "bias", "activation"):
            if key not in layer:
                raise FormatError(f"{origin}: 'layers[{idx}]' missing '{key}'")
        layers.append(
            GcnLayer(weight=layer["weight"], bias=layer["bias"], activation=layer["activation"])
        )
    head = obj["head"]
    if not isinstance(head, dict) or "weight" not in head or "bias" not in head:
        raise FormatError(f"{origin}: 'head' needs 'weight' and 'bias'")
    return ModelSpec(
        layers=tuple(layers),
        pooling=obj["pooling"],
        head=DenseHead(weight=head["weight"], bias=head["bias"]),
        num_classes=int(obj["num_classes"]),
        feature_dim=int(obj["feature_dim"]),
    )


def load_model(path) -> ModelSpec:
    """Load and validate a classifier from its interchange file."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as fh:
            obj = json.load(fh)
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    return model_from_dict(obj, origin=str(path))


def _normalized_adjacency(g) -> np.ndarray:
    """Symmetrically renormalized adjacency with self-loops added."""
    a = np.array(g.adjacency)
    n = a.shape[0]
    a[np.diag_indices(n)] += 1.0
    inv_sqrt = 1.0 / np.sqrt(a.sum(axis=1))
    return a * inv_sqrt[:, None] * inv_sqrt[None, :]


def _softmax_floored(logits: np.ndarray) -> np.ndarray:
    z = logits - logits.max()
    e = np.exp(z)
    p = e / e.sum()
    p = np.maximum(p, PROB_FLOOR)
    return p / p.sum()


def _forward_features(m: ModelSpec, g, feats: np.ndarray) -> np.ndarray:
    if feats.shape[1] != m.feature_dim:
        raise DimensionMismatch(
            f"graph features have width {feats.shape[1]}, model expects {m.feature_dim}"
        )
    a_hat = _normalized_adjacency(g)
    h = feats
    for layer in m.layers:
        h = _ACTIVATIONS[layer.activation](a_hat @ h @ layer.weight + layer.bias)
    if m.pooling == "mean":
        pooled = h.mean(axis=0)
    elif m.pooling == "max":
        pooled = h.max(axis=0)
    else:
        pooled = np.concatenate([h.mean(axis=0), h.max(axis=0)])
    logits = pooled @ m.head.weight + m.head.bias
    return _softmax_floored(logits)


def forward(m: ModelSpec, g) -> np.ndarray:
    """Class probability distribution of ``g`` under ``m``.

    ``g`` may be a Graph or a Subgraph; a Subgraph is evaluated on its own
    reindexed topology.  The result sums to 1 and every entry is at least
    the probability floor.
    """
    return _forward_features(m, g, np.array(g.features, dtype=float))


def masked_forward(m: ModelSpec, sg, active) -> np.ndarray:
    """Forward pass with the features of every node outside ``active`` zeroed.

    The topology is untouched, so masking changes the signal but not the
    normalization of the propagation operator.  ``active`` may be empty.
    """
    n = sg.num_nodes
    active = sorted({int(v) for v in active})
    if active and (active[0] < 0 or active[-1] >= n):
        raise InvalidNodeSet(f"active nodes outside [0, {n})")
    feats = np.zeros_like(np.asarray(sg.features, dtype=float))
    if active:
        src = np.asarray(sg.features, dtype=float)
        feats[active, :] = src[active, :]
    return _forward_features(m, sg, feats)


def kl_divergence(p, q) -> float:
    """Kullback-Leibler divergence sum(p * log(p / q)) in nats.

    Zero entries of ``p`` contribute nothing (0 log 0 := 0).  Inputs coming
    from :func:`forward` are floored away from zero, so the result is
    finite.  Rounding can drive the sum a few ulp below zero for
    near-identical inputs; it is clamped to the mathematical lower bound.
    """
    p = np.asarray(p, dtype=float)
    q = np.asarray(q, dtype=float)
    if p.shape != q.shape:
        raise DimensionMismatch("distributions must have the same shape")
    mask = p > 0.0
    with np.errstate(divide="ignore"):
        terms = p[mask] * (np.log(p[mask]) - np.log(q[mask]))
    return max(float(terms.sum()), 0.0)

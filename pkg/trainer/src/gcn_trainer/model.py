"""Torch graph-convolution classifier, kept weight-compatible with the
inference engine's interchange format.

Each convolution computes act(A_hat (H W) + b) with the symmetrically
renormalized, self-looped adjacency; the bias is added after aggregation so
an exported (W, b) pair reproduces the layer bit-for-bit on the consumer
side.  Everything runs in float64 so exported weights and fixture
probabilities carry full precision.
"""

from __future__ import annotations

import numpy as np
import torch
from torch import nn

ACTIVATIONS = {"relu": torch.relu, "tanh": torch.tanh, "identity": lambda x: x}


def normalized_adjacency(num_nodes: int, edges) -> torch.Tensor:
    a = torch.zeros((num_nodes, num_nodes), dtype=torch.float64)
    for i, j in edges:
        a[i, j] = 1.0
        a[j, i] = 1.0
    a += torch.eye(num_nodes, dtype=torch.float64)
    inv_sqrt = a.sum(dim=1).rsqrt()
    return a * inv_sqrt[:, None] * inv_sqrt[None, :]


class GraphConv(nn.Module):
    def __init__(self, d_in: int, d_out: int, activation: str):
        super().__init__()
        self.weight = nn.Parameter(torch.empty(d_in, d_out, dtype=torch.float64))
        self.bias = nn.Parameter(torch.zeros(d_out, dtype=torch.float64))
        nn.init.xavier_uniform_(self.weight)
        self.activation = activation

    def forward(self, x: torch.Tensor, a_hat: torch.Tensor) -> torch.Tensor:
        return ACTIVATIONS[self.activation](a_hat @ (x @ self.weight) + self.bias)


class GcnClassifier(nn.Module):
    """Chained graph convolutions, global pooling, dense softmax head."""

    def __init__(self, feature_dim: int, hidden: int, num_classes: int,
                 num_layers: int = 2, activation: str = "relu", pooling: str = "mean"):
        super().__init__()
        if pooling not in ("mean", "max", "mean_concat_max"):
            raise ValueError(f"unknown pooling '{pooling}'")
        dims = [feature_dim] + [hidden] * num_layers
        self.convs = nn.ModuleList(
            GraphConv(a, b, activation) for a, b in zip(dims, dims[1:])
        )
        self.pooling = pooling
        head_in = hidden * (2 if pooling == "mean_concat_max" else 1)
        self.head_weight = nn.Parameter(torch.empty(head_in, num_classes, dtype=torch.float64))
        self.head_bias = nn.Parameter(torch.zeros(num_classes, dtype=torch.float64))
        nn.init.xavier_uniform_(self.head_weight)
        self.activation = activation
        self.feature_dim = feature_dim
        self.num_classes = num_classes

    def forward(self, features: torch.Tensor, a_hat: torch.Tensor) -> torch.Tensor:
        h = features
        for conv in self.convs:
            h = conv(h, a_hat)
        if self.pooling == "mean":
            pooled = h.mean(dim=0)
        elif self.pooling == "max":
            pooled = h.max(dim=0).values
        else:
            pooled = torch.cat([h.mean(dim=0), h.max(dim=0).values])
        return pooled @ self.head_weight + self.head_bias

    @torch.no_grad()
    def predict_proba(self, features: np.ndarray, edges) -> np.ndarray:
        x = torch.as_tensor(np.asarray(features, dtype=np.float64))
        a_hat = normalized_adjacency(x.shape[0], edges)
        return torch.softmax(self.forward(x, a_hat), dim=0).numpy()

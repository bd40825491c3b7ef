"""Node-importance prior and concept (subgraph) sampling.

The prior scores each node by how much the classifier's output moves, in KL
divergence, when one of its incident edges is ablated, averaged uniformly
over the node's neighbors.  Normalizing those scores gives a sampling
distribution from which L concepts of fixed size floor(N * p) are drawn,
each by weighted sampling without replacement.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ConceptSizeZero, TooFewConcepts, ValidationError
from .graphs import Graph, Subgraph, edge_removed, induced_subgraph
from .model import ModelSpec, forward, kl_divergence
from .util import parallel_map

__all__ = [
    "NodePrior",
    "ConceptSet",
    "node_disturbance",
    "compute_prior",
    "sample_concepts",
]


@dataclass(frozen=True)
class NodePrior:
    """Raw per-node disturbance scores and their normalized distribution."""

    alpha: np.ndarray
    probs: np.ndarray

    def __post_init__(self):
        alpha = np.asarray(self.alpha, dtype=float)
        probs = np.asarray(self.probs, dtype=float)
        if alpha.shape != probs.shape or alpha.ndim != 1:
            raise ValidationError("alpha and probs must be equal-length vectors")
        if not np.all(np.isfinite(alpha)) or np.any(alpha < 0):
            raise ValidationError("alpha must be finite and non-negative")
        if np.any(probs < 0) or abs(probs.sum() - 1.0) > 1e-9:
            raise ValidationError("probs must be a probability vector")
        object.__setattr__(self, "alpha", alpha)
        object.__setattr__(self, "probs", probs)


@dataclass(frozen=True)
class ConceptSet:
    """L independently sampled concepts of identical size floor(N * p)."""

    concepts: tuple[Subgraph, ...]
    p: float
    L: int
    seed: int

    def __post_init__(self):
        if len(self.concepts) != self.L:
            raise ValidationError("concept count does not match L")
        sizes = {c.num_nodes for c in self.concepts}
        if len(sizes) > 1:
            raise ValidationError("concepts must all have the same size")


def node_disturbance(m: ModelSpec, g: Graph, i: int, j: int) -> float:
    """Output shift caused by removing edge (i, j).

    Returns KL(f(g) || f(g without (i, j))), which is non-negative and, by
    the engine's probability floor, always finite.
    """
    base = forward(m, g)
    ablated = forward(m, edge_removed(g, i, j))
    return kl_divergence(base, ablated)


def compute_prior(m: ModelSpec, g: Graph, workers: int = 1) -> NodePrior:
    """Per-node prior: mean edge-ablation disturbance over each node's neighbors.

    Isolated nodes get score 0.  If every score is 0 (for example under a
    topology-blind model) the distribution falls back to uniform.
    """
    base = forward(m, g)

    def edge_score(edge):
        return kl_divergence(base, forward(m, edge_removed(g, *edge)))

    scores = parallel_map(edge_score, g.edges, workers=workers)

    alpha = np.zeros(g.num_nodes)
    degree = np.zeros(g.num_nodes, dtype=int)
    for (i, j), s in zip(g.edges, scores):
        alpha[i] += s
        degree[i] += 1
        if not g.directed:
            alpha[j] += s
            degree[j] += 1
    nonzero = degree > 0
    alpha[nonzero] /= degree[nonzero]

    total = alpha.sum()
    if total > 0.0:
        probs = alpha / total
    else:
        probs = np.full(g.num_nodes, 1.0 / g.num_nodes)
    return NodePrior(alpha=alpha, probs=probs)


def _draw_without_replacement(probs: np.ndarray, k: int, gen: np.random.Generator) -> list[int]:
    """k sequential draws from ``probs``, renormalizing after each removal."""
    remaining = probs.astype(float).copy()
    chosen = []
    for _ in range(k):
        total = remaining.sum()
        if total <= 0.0:
            raise ValidationError(
                "prior support is smaller than the concept size; "
                "cannot draw without replacement"
            )
        idx = int(gen.choice(len(remaining), p=remaining / total))
        chosen.append(idx)
        remaining[idx] = 0.0
    return chosen


def sample_concepts(prior: NodePrior, g: Graph, L: int, p: float, seed: int) -> ConceptSet:
    """Sample L concepts of size floor(N * p) from the prior.

    Within a concept, nodes are drawn without replacement; across concepts
    the draws are independent.  Concept l uses a generator derived from
    (seed, l), so the result is reproducible and independent of evaluation
    order or worker count.
    """
    if prior.probs.shape[0] != g.num_nodes:
        raise ValidationError("prior length does not match graph size")
    if not (0.0 < p <= 1.0):
        raise ValidationError(f"p must lie in (0, 1], got {p}")
    size = math.floor(g.num_nodes * p)
    if size < 1:
        raise ConceptSizeZero(
            f"floor({g.num_nodes} * {p}) = 0; increase p or use a larger graph"
        )
    if L < 2:
        raise TooFewConcepts("at least two concepts are required for the concept graph")

    concepts = []
    for l in range(L):
        gen = rng.derived_rng(seed, rng.CONCEPT_STREAM, l)
        nodes = _draw_without_replacement(prior.probs, size, gen)
        concepts.append(induced_subgraph(g, nodes))
    return ConceptSet(concepts=tuple(concepts), p=float(p), L=int(L), seed=int(seed))

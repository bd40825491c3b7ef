"""Global concept ordering via eigencentrality of a similarity graph.

The L sampled concepts become nodes of a complete weighted directed graph.
The weight from concept i to concept j combines a domain term, the ratio of
their edge densities, with a signal term, the KL divergence between the
classifier's outputs on the two concepts.  Row-normalizing the weight
matrix yields a transition matrix whose stationary distribution ranks the
concepts globally.

Degeneracies are repaired rather than rejected, and every repair is
recorded in the returned report: a concept with an all-zero row gets a
uniform off-diagonal row, zero densities are floored at one virtual edge,
and a small damping mix with the uniform matrix guarantees a unique
stationary vector even when the raw chain is reducible or periodic.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .concepts import ConceptSet
from .errors import NotStochastic, TooFewConcepts
from .model import ModelSpec, forward, kl_divergence
from .util import parallel_map

__all__ = [
    "ConceptGraph",
    "DEFAULT_DAMPING",
    "edge_density",
    "concept_signal_similarity",
    "concept_graph_from_weights",
    "build_concept_graph",
    "eigencentrality",
]

DEFAULT_DAMPING = 1e-3

POWER_ITERATION_TOL = 1e-10
POWER_ITERATION_MAX_STEPS = 100_000


@dataclass(frozen=True)
class ConceptGraph:
    """Pairwise concept similarities and the resulting global ranking.

    ``weights`` holds the raw non-negative similarity matrix with zero
    diagonal; ``transition`` is its row-stochastic version after degenerate
    row repair and damping; ``centrality`` is the stationary vector of
    ``transition`` (non-negative, sums to 1).  ``report`` records every
    repair plus the iteration count and the final fixed-point residual.
    """

    weights: np.ndarray
    transition: np.ndarray
    centrality: np.ndarray
    report: dict


def edge_density(g) -> float:
    """Fraction of realizable edges present: (2 or 1) * M / (N (N - 1)).

    The factor is 2 for undirected graphs (each stored pair occupies two
    ordered slots) and 1 for directed ones.  Graphs with fewer than two
    nodes have no realizable edge and return 0 by convention.
    """
    n = g.num_nodes
    if n < 2:
        return 0.0
    factor = 1.0 if g.directed else 2.0
    return factor * g.num_edges / (n * (n - 1))


def concept_signal_similarity(m: ModelSpec, ci, cj) -> float:
    """Behavioral divergence KL(f(ci) || f(cj)) between two concepts."""
    return kl_divergence(forward(m, ci), forward(m, cj))


def _floored_density(g) -> tuple[float, bool]:
    """Edge density, floored at one virtual edge so ratios stay defined."""
    d = edge_density(g)
    if d > 0.0:
        return d, False
    n = g.num_nodes
    if n < 2:
        # Single-node concepts have no realizable edge at all; any two
        # same-size concepts then share this value, so ratios collapse to 1.
        return 1.0, True
    return 1.0 / (n * (n - 1)), True


def build_concept_graph(
    m: ModelSpec,
    cs: ConceptSet,
    damping: float = DEFAULT_DAMPING,
    workers: int = 1,
) -> ConceptGraph:
    """Assemble the concept similarity graph and rank concepts by centrality.

    Off-diagonal entry (i, j) is density(c_i) / density(c_j) times the KL
    divergence of the model outputs on c_i and c_j.  Rows are normalized to
    sum to 1 (a row of zeros is first replaced by a uniform off-diagonal
    row), the matrix is damped toward uniform, and the stationary vector is
    found by power iteration.
    """
    L = cs.L
    concepts = cs.concepts

    outputs = parallel_map(lambda c: forward(m, c), concepts, workers=workers)
    densities = []
    floored = []
    for idx, c in enumerate(concepts):
        d, was_floored = _floored_density(c)
        densities.append(d)
        if was_floored:
            floored.append(idx)

    pairs = [(i, j) for i in range(L) for j in range(L) if i != j]
    kls = parallel_map(lambda ij: kl_divergence(outputs[ij[0]], outputs[ij[1]]), pairs, workers=workers)

    weights = np.zeros((L, L))
    for (i, j), kl in zip(pairs, kls):
        weights[i, j] = (densities[i] / densities[j]) * kl

    cg = concept_graph_from_weights(weights, damping=damping)
    cg.report["density_floored"] = floored
    return cg


def concept_graph_from_weights(weights, damping: float = DEFAULT_DAMPING) -> ConceptGraph:
    """Rank directly from a raw similarity-weight matrix.

    Normalizes each row to sum to 1 (an all-zero row becomes a uniform
    off-diagonal row first and is reported), mixes with the uniform matrix
    by ``damping``, and solves for the stationary vector.
    """
    weights = np.array(weights, dtype=float)
    L = weights.shape[0]
    if weights.ndim != 2 or weights.shape[1] != L:
        raise NotStochastic("weight matrix must be square")
    if L < 2:
        raise TooFewConcepts("concept graph needs at least two concepts")
    if np.any(weights < 0) or np.any(np.diag(weights) != 0):
        raise NotStochastic("weights must be non-negative with a zero diagonal")
    if not (0.0 <= damping < 1.0):
        raise ValueError(f"damping must lie in [0, 1), got {damping}")

    transition = weights.copy()
    repaired_rows = []
    row_sums = transition.sum(axis=1)
    for i in range(L):
        if row_sums[i] <= 0.0:
            transition[i, :] = 1.0 / (L - 1)
            transition[i, i] = 0.0
            repaired_rows.append(i)
        else:
            transition[i, :] /= row_sums[i]

    if damping > 0.0:
        transition = (1.0 - damping) * transition + damping / L

    centrality, steps, residual = _power_iteration(
        transition, tol=POWER_ITERATION_TOL, max_steps=POWER_ITERATION_MAX_STEPS
    )
    report = {
        "repaired_rows": repaired_rows,
        "density_floored": [],
        "damping": float(damping),
        "power_iteration_steps": steps,
        "fixed_point_residual": residual,
    }
    return ConceptGraph(
        weights=weights, transition=transition, centrality=centrality, report=report
    )


def _power_iteration(
    transition: np.ndarray, tol: float, max_steps: int
) -> tuple[np.ndarray, int, float]:
    """Stationary vector of a row-stochastic matrix, from a uniform start.

    Iterates r <- transition^T r with L1 renormalization until successive
    iterates agree to ``tol`` in the max norm, or ``max_steps`` is reached;
    the last iterate is returned either way, with the fixed-point residual.
    """
    L = transition.shape[0]
    r = np.full(L, 1.0 / L)
    steps = 0
    for steps in range(1, max_steps + 1):
        nxt = transition.T @ r
        nxt /= nxt.sum()
        delta = np.abs(nxt - r).max()
        r = nxt
        if delta < tol:
            break
    residual = float(np.abs(transition.T @ r - r).max())
    return r, steps, residual


def eigencentrality(transition: np.ndarray, tol: float = POWER_ITERATION_TOL,
                    max_steps: int = POWER_ITERATION_MAX_STEPS) -> np.ndarray:
    """Stationary vector r with transition^T r = r, by power iteration.

    ``transition`` must be row-stochastic with non-negative entries.  The
    result is non-negative and sums to 1.
    """
    t = np.asarray(transition, dtype=float)
    if t.ndim != 2 or t.shape[0] != t.shape[1]:
        raise NotStochastic("transition matrix must be square")
    if np.any(t < 0) or np.any(np.abs(t.sum(axis=1) - 1.0) > 1e-9):
        raise NotStochastic("rows must be non-negative and sum to 1")
    r, _, _ = _power_iteration(t, tol=tol, max_steps=max_steps)
    return r

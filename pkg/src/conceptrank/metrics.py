"""Objective scores for explanations: infidelity and entropy.

Infidelity measures how well the relevance map linearly predicts the
model's reaction to input perturbations: for a perturbation tensor I of the
feature matrix's shape, the score is the squared gap between the inner
product of I with the (feature-broadcast) relevance map and the drop in
predicted-class probability when I is subtracted from the features.
Gaussian perturbations are averaged over many draws; the unit perturbation
is a single deterministic draw of all ones.

Entropy is the Shannon entropy of the normalized absolute relevance
vector: low entropy means the explanation concentrates on few nodes.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import rng
from .errors import ShapeMismatch
from .graphs import Graph
from .model import ModelSpec, forward, _forward_features
from .util import parallel_map, tree_sum

__all__ = [
    "MetricReport",
    "DEFAULT_INFIDELITY_SAMPLES",
    "ENTROPY_EPS",
    "entropy",
    "infidelity",
    "evaluate_relevance",
    "REFERENCE_SCORES",
]

DEFAULT_INFIDELITY_SAMPLES = 1000

# Additive smoothing under the normalization; guards log(0) for nodes with
# exactly zero relevance while leaving one-hot entropy below 1e-9.
ENTROPY_EPS = 1e-12

# Published reference magnitudes of these metrics on common graph
# benchmarks.  They depend on the trained checkpoint and are shipped for
# orientation only, never as test targets.
REFERENCE_SCORES = {
    "MNISTSuperpixels": {"entropy": 9.41e-01, "infidelity_gaussian": 5.69e00, "infidelity_unit": 5.69e00},
    "PROTEINS": {"entropy": 9.37e-01, "infidelity_gaussian": 2.38e-01, "infidelity_unit": 2.78e-01},
    "MSRC-9": {"entropy": 9.02e-01, "infidelity_gaussian": 2.29e-05, "infidelity_unit": 9.68e-08},
    "MSRC-21": {"entropy": 8.54e-01, "infidelity_gaussian": 2.02e00, "infidelity_unit": 2.05e00},
}


@dataclass(frozen=True)
class MetricReport:
    """Scores of one explanation; stderr accompanies the sampled metric."""

    entropy: float
    infidelity_gaussian: float | None
    infidelity_gaussian_stderr: float | None
    infidelity_unit: float | None
    samples: int
    seed: int

    def to_dict(self) -> dict:
        return {
            "entropy": self.entropy,
            "infidelity_gaussian": self.infidelity_gaussian,
            "infidelity_gaussian_stderr": self.infidelity_gaussian_stderr,
            "infidelity_unit": self.infidelity_unit,
            "samples": self.samples,
            "seed": self.seed,
        }


def entropy(node_relevance) -> float:
    """Shannon entropy (nats) of the normalized absolute relevance vector.

    Values lie in [0, ln N]: ln N for uniform relevance, near 0 for a
    one-hot vector.  Monte-Carlo Shapley relevance can be negative, so
    magnitudes are taken before normalizing.
    """
    rel = np.abs(np.asarray(node_relevance, dtype=float)) + ENTROPY_EPS
    q = rel / rel.sum()
    return float(-(q * np.log(q)).sum())


def _perturbation_score(m: ModelSpec, g: Graph, xi_broadcast: np.ndarray,
                        base_prob: float, target: int, draw: np.ndarray) -> float:
    inner = float((draw * xi_broadcast).sum())
    perturbed = _forward_features(m, g, np.asarray(g.features, dtype=float) - draw)
    delta = base_prob - float(perturbed[target])
    return (inner - delta) ** 2


def infidelity(
    m: ModelSpec,
    g: Graph,
    node_relevance,
    perturbation: str = "gaussian",
    samples: int = DEFAULT_INFIDELITY_SAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> tuple[float, float]:
    """Expected squared mismatch between relevance and perturbation response.

    Returns (value, stderr).  ``perturbation`` is "gaussian" (i.i.d. standard
    normal entries, averaged over ``samples`` draws) or "unit" (the all-ones
    tensor, a single deterministic draw with stderr 0).  The relevance
    vector is broadcast over feature columns as rel / d, so the inner
    product reduces to the plain dot product when d = 1.
    """
    rel = np.asarray(node_relevance, dtype=float)
    if rel.shape != (g.num_nodes,):
        raise ShapeMismatch(
            f"relevance has shape {rel.shape}, graph has {g.num_nodes} nodes"
        )
    n, d = g.features.shape
    xi_broadcast = np.repeat(rel[:, None], d, axis=1) / d

    probs = forward(m, g)
    target = int(np.argmax(probs))
    base_prob = float(probs[target])

    if perturbation == "unit":
        score = _perturbation_score(m, g, xi_broadcast, base_prob, target, np.ones((n, d)))
        return score, 0.0
    if perturbation != "gaussian":
        raise ValueError(f"unknown perturbation '{perturbation}'")
    if samples < 1:
        raise ValueError("samples must be >= 1 for gaussian perturbation")

    def one_draw(t: int) -> float:
        draws = rng.derived_rng(seed, rng.PERTURBATION_STREAM, t).standard_normal((n, d))
        return _perturbation_score(m, g, xi_broadcast, base_prob, target, draws)

    scores = parallel_map(one_draw, range(samples), workers=workers)
    mean = tree_sum(scores) / samples
    if samples > 1:
        var = tree_sum((s - mean) ** 2 for s in scores) / (samples - 1)
        stderr = float(np.sqrt(var / samples))
    else:
        stderr = float("nan")
    return mean, stderr


def evaluate_relevance(
    m: ModelSpec,
    g: Graph,
    node_relevance,
    perturbation: str = "both",
    samples: int = DEFAULT_INFIDELITY_SAMPLES,
    seed: int = 0,
    workers: int = 1,
) -> MetricReport:
    """Full metric report for one relevance vector.

    ``perturbation`` selects which infidelity variants to compute:
    "gaussian", "unit", or "both".
    """
    gauss = gauss_err = unit = None
    if perturbation in ("gaussian", "both"):
        gauss, gauss_err = infidelity(
            m, g, node_relevance, "gaussian", samples=samples, seed=seed, workers=workers
        )
    if perturbation in ("unit", "both"):
        unit, _ = infidelity(m, g, node_relevance, "unit", samples=1, seed=seed)
    if perturbation not in ("gaussian", "unit", "both"):
        raise ValueError(f"unknown perturbation '{perturbation}'")
    return MetricReport(
        entropy=entropy(node_relevance),
        infidelity_gaussian=gauss,
        infidelity_gaussian_stderr=gauss_err,
        infidelity_unit=unit,
        samples=samples if gauss is not None else 0,
        seed=seed,
    )

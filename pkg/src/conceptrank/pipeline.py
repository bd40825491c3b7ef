"""End-to-end explanation pipeline.

Runs prior estimation, concept sampling, global concept ranking, and
per-concept Shapley relevance, then assembles the relevance matrix: row l
of the matrix is the centrality weight of concept l times the scatter of
that concept's Shapley values over the parent graph's nodes.  Column sums
project the matrix to a single per-node relevance vector.

The run is fully determined by the model, the graph, and the config seed;
worker count and scheduling never change any number.  The serialized
explanation is therefore byte-identical across repeated runs.  Wallclock
stage timings are kept on the in-memory result (``meta["stage_seconds"]``)
and logged, but deliberately left out of the file.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import rng
from .concepts import ConceptSet, compute_prior, sample_concepts
from .errors import FormatError, ShapeMismatch
from .graphs import Graph
from .model import ModelSpec, forward
from .ranking import DEFAULT_DAMPING, build_concept_graph
from .shapley import CoalitionGame, ShapleyConfig, ShapleyResult, concept_relevance
from .util import canonical_json, parallel_map

__all__ = [
    "ExplainConfig",
    "ExplanationMap",
    "assemble_xbar",
    "explain",
    "save_explanation",
    "load_explanation",
]

log = logging.getLogger("conceptrank")

FILE_FORMAT = "conceptrank-explanation-v1"


@dataclass(frozen=True)
class ExplainConfig:
    """Knobs of one explanation run; defaults follow the benchmark setup."""

    L: int = 15
    p: float = 0.2
    seed: int = 0
    shapley_exact_max: int = 12
    shapley_samples: int = 200
    damping: float = DEFAULT_DAMPING
    workers: int = 1


@dataclass(frozen=True)
class ExplanationMap:
    """The L x N relevance matrix ``xi`` and its per-node projection.

    ``xbar`` scatters each concept's Shapley values into parent-node rows
    (column l belongs to concept l; rows of nodes outside the concept stay
    zero); ``xi`` is ``diag(r) @ xbar.T`` and ``node_relevance`` its column
    sum over concepts.
    """

    xi: np.ndarray
    node_relevance: np.ndarray
    xbar: np.ndarray
    r: np.ndarray
    concepts: tuple[tuple[int, ...], ...]
    meta: dict = field(compare=False)


def assemble_xbar(cs: ConceptSet, shapleys: list[ShapleyResult]) -> np.ndarray:
    """Scatter per-concept Shapley values into an N x L matrix.

    Entry (n, l) is concept l's Shapley value for parent node n, or 0 when
    the concept does not contain n.  Overlapping concepts keep independent
    columns; nothing is summed here.
    """
    if len(shapleys) != cs.L:
        raise ShapeMismatch(f"{len(shapleys)} Shapley results for {cs.L} concepts")
    n = cs.concepts[0].parent.num_nodes
    xbar = np.zeros((n, cs.L))
    for l, (concept, res) in enumerate(zip(cs.concepts, shapleys)):
        if len(res.values) != concept.num_nodes:
            raise ShapeMismatch(
                f"concept {l} has {concept.num_nodes} nodes but {len(res.values)} values"
            )
        xbar[list(concept.node_ids), l] = res.values
    return xbar


def _stage(meta: dict, name: str):
    log.info("stage %s: start", name)
    return _StageTimer(meta, name)


class _StageTimer:
    def __init__(self, meta, name):
        self.meta = meta
        self.name = name

    def __enter__(self):
        self.t0 = time.perf_counter()
        return self

    def __exit__(self, exc_type, exc, tb):
        dt = time.perf_counter() - self.t0
        self.meta["stage_seconds"][self.name] = dt
        if exc is None:
            log.info("stage %s: done in %.3fs", self.name, dt)
        else:
            log.error("stage %s: failed (%s)", self.name, exc)
            if isinstance(exc, Exception) and not hasattr(exc, "stage"):
                exc.stage = self.name
        return False


def explain(m: ModelSpec, g: Graph, cfg: ExplainConfig | None = None) -> ExplanationMap:
    """Produce the full explanation of the model's prediction on ``g``.

    Deterministic given (m, g, cfg.seed); on failure the raised exception
    carries the failing stage name in its ``stage`` attribute.
    """
    cfg = cfg or ExplainConfig()
    meta = {
        "format": FILE_FORMAT,
        "seed": int(cfg.seed),
        "L": int(cfg.L),
        "p": float(cfg.p),
        "damping": float(cfg.damping),
        "shapley": {"exact_max": int(cfg.shapley_exact_max), "samples": int(cfg.shapley_samples)},
        "stage_seconds": {},
    }

    with _stage(meta, "prior"):
        prior = compute_prior(m, g, workers=cfg.workers)
        meta["prior_uniform_fallback"] = bool(prior.alpha.sum() == 0.0)

    with _stage(meta, "concepts"):
        cs = sample_concepts(prior, g, L=cfg.L, p=cfg.p, seed=cfg.seed)
        meta["concept_size"] = cs.concepts[0].num_nodes

    with _stage(meta, "global_order"):
        cg = build_concept_graph(m, cs, damping=cfg.damping, workers=cfg.workers)
        meta["concept_graph"] = dict(cg.report)

    with _stage(meta, "local_order"):
        target = int(np.argmax(forward(m, g)))
        meta["target_class"] = target

        def solve(l: int) -> ShapleyResult:
            game = CoalitionGame(concept=cs.concepts[l], model=m, target_class=target)
            child_seed = int(rng.derived_rng(cfg.seed, rng.SHAPLEY_STREAM, l).integers(2**63))
            local_cfg = ShapleyConfig(
                exact_max=cfg.shapley_exact_max, samples=cfg.shapley_samples, seed=child_seed
            )
            return concept_relevance(game, local_cfg)

        shapleys = parallel_map(solve, range(cs.L), workers=cfg.workers)
        meta["shapley"]["methods"] = [s.method for s in shapleys]

    with _stage(meta, "assemble"):
        xbar = assemble_xbar(cs, shapleys)
        xi = cg.centrality[:, None] * xbar.T
        node_relevance = xi.sum(axis=0)

    return ExplanationMap(
        xi=xi,
        node_relevance=node_relevance,
        xbar=xbar,
        r=cg.centrality,
        concepts=tuple(c.node_ids for c in cs.concepts),
        meta=meta,
    )


def _serializable_meta(meta: dict) -> dict:
    # Timings vary run to run; everything written to disk must not.
    return {k: v for k, v in meta.items() if k != "stage_seconds"}


def save_explanation(em: ExplanationMap, path) -> None:
    """Write the explanation JSON; byte-identical for identical runs."""
    payload = {
        "xi": em.xi,
        "node_relevance": em.node_relevance,
        "r": em.r,
        "concepts": [list(c) for c in em.concepts],
        "meta": _serializable_meta(em.meta),
    }
    Path(path).write_text(canonical_json(payload), encoding="utf-8")


def load_explanation(path) -> dict:
    """Parse an explanation file, checking the required keys are present."""
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise FormatError(f"{path}: not valid JSON ({exc})") from exc
    for key in ("xi", "node_relevance", "r", "concepts", "meta"):
        if key not in obj:
            raise FormatError(f"{path}: missing key '{key}'")
    return obj

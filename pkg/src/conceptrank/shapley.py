"""Per-concept node relevance through Shapley values.

Each concept defines a cooperative game: the players are the concept's
nodes and the payoff of a coalition is the classifier's probability for the
target class when every node outside the coalition has its features zeroed.
Small games are solved exactly by enumerating all coalitions; larger ones
are approximated by Monte-Carlo permutation sampling with a reported
standard error.

Both solvers accept any object exposing ``K`` (player count) and
``payoff(coalition)``, which keeps them testable against hand-built games.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from . import rng
from .errors import TooLargeForExact
from .graphs import Subgraph
from .model import ModelSpec, forward, masked_forward

__all__ = [
    "CoalitionGame",
    "ShapleyConfig",
    "ShapleyResult",
    "game_for_concept",
    "payoff",
    "shapley_exact",
    "shapley_mc",
    "concept_relevance",
]

DEFAULT_EXACT_MAX = 12
DEFAULT_MC_SAMPLES = 200


@dataclass
class CoalitionGame:
    """Masked-forward coalition game over one concept's nodes.

    ``target_class`` is normally the class the model predicts for the full
    parent graph, tying node relevance to the phenomenon being explained.
    Payoffs are memoized; each coalition is evaluated at most once.
    """

    concept: Subgraph
    model: ModelSpec
    target_class: int
    _cache: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not (0 <= self.target_class < self.model.num_classes):
            raise ValueError(
                f"target_class {self.target_class} outside [0, {self.model.num_classes})"
            )

    @property
    def K(self) -> int:
        return self.concept.num_nodes

    def payoff(self, coalition) -> float:
        key = frozenset(int(v) for v in coalition)
        hit = self._cache.get(key)
        if hit is None:
            hit = float(masked_forward(self.model, self.concept, key)[self.target_class])
            self._cache[key] = hit
        return hit


def game_for_concept(m: ModelSpec, concept: Subgraph) -> CoalitionGame:
    """Game whose target class is the model's prediction on the parent graph."""
    target = int(np.argmax(forward(m, concept.parent)))
    return CoalitionGame(concept=concept, model=m, target_class=target)


def payoff(game, coalition) -> float:
    """Payoff of ``coalition``: target-class probability under the mask."""
    return game.payoff(coalition)


@dataclass(frozen=True)
class ShapleyResult:
    """Shapley estimates: values, how they were computed, and their error.

    For exact results ``samples`` is 0 and ``stderr`` is all zeros; for
    Monte-Carlo results ``stderr`` is the per-player sample standard
    deviation of the marginal contributions divided by sqrt(samples).
    """

    values: np.ndarray
    method: str  # "exact" | "monte_carlo"
    samples: int
    stderr: np.ndarray


@dataclass(frozen=True)
class ShapleyConfig:
    exact_max: int = DEFAULT_EXACT_MAX
    samples: int = DEFAULT_MC_SAMPLES
    seed: int = 0


def shapley_exact(game, exact_max: int = DEFAULT_EXACT_MAX) -> ShapleyResult:
    """Exact Shapley values by full coalition enumeration.

    Player i receives sum over S not containing i of
    |S|! (K - 1 - |S|)! / K! * (payoff(S + i) - payoff(S)); every one of the
    2^K payoffs is computed once and reused across players.
    """
    K = game.K
    if K > exact_max:
        raise TooLargeForExact(f"K={K} exceeds exact enumeration limit {exact_max}")
    players = range(K)
    values = np.zeros(K)
    table = {
        frozenset(s): game.payoff(s)
        for size in range(K + 1)
        for s in combinations(players, size)
    }
    fact = math.factorial
    weight = [fact(j) * fact(K - 1 - j) / fact(K) for j in range(K)]
    for i in players:
        others = [p for p in players if p != i]
        for size in range(K):
            w = weight[size]
            for s in combinations(others, size):
                base = frozenset(s)
                values[i] += w * (table[base | {i}] - table[base])
    return ShapleyResult(values=values, method="exact", samples=0, stderr=np.zeros(K))


def shapley_mc(game, samples: int, seed: int) -> ShapleyResult:
    """Monte-Carlo Shapley values from uniform player permutations.

    Each sampled permutation contributes, for every player, the marginal
    payoff of joining the players placed before it; those marginals
    telescope to payoff(all) - payoff(empty) exactly.  The estimate is the
    per-player mean over ``samples`` permutations and is deterministic
    given (game, samples, seed).
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    K = game.K
    marginals = np.zeros((samples, K))
    for t in range(samples):
        gen = rng.derived_rng(seed, rng.SHAPLEY_STREAM, t)
        order = gen.permutation(K)
        coalition: set[int] = set()
        before = game.payoff(coalition)
        for player in order:
            coalition.add(int(player))
            after = game.payoff(coalition)
            marginals[t, player] = after - before
            before = after
    values = marginals.mean(axis=0)
    if samples > 1:
        stderr = marginals.std(axis=0, ddof=1) / math.sqrt(samples)
    else:
        stderr = np.zeros(K)
    return ShapleyResult(values=values, method="monte_carlo", samples=samples, stderr=stderr)


def concept_relevance(game, cfg: ShapleyConfig) -> ShapleyResult:
    """Exact solver when the game is small enough, Monte-Carlo otherwise."""
    if game.K <= cfg.exact_max:
        return shapley_exact(game, exact_max=cfg.exact_max)
    return shapley_mc(game, samples=cfg.samples, seed=cfg.seed)

"""Per-node relevance inside a concept: exact vs Monte-Carlo Shapley.

Run: python demos/05_shapley_relevance.py
"""

import numpy as np

from conceptrank import (
    ShapleyConfig,
    concept_relevance,
    game_for_concept,
    induced_subgraph,
    shapley_exact,
    shapley_mc,
)
from _demo_common import demo_graph, demo_model

g = demo_graph()
model = demo_model()
concept = induced_subgraph(g, range(8))
game = game_for_concept(model, concept)
print(f"game: {game.K} players, target class {game.target_class}")
print(f"payoff(all)   = {game.payoff(range(8)):.6f}")
print(f"payoff(empty) = {game.payoff([]):.6f}")

exact = shapley_exact(game)
print("\nexact Shapley values:")
print(np.round(exact.values, 6))
print(f"efficiency check: sum = {exact.values.sum():.9f} "
      f"vs v(Q)-v(empty) = {game.payoff(range(8)) - game.payoff([]):.9f}")

for T in (50, 500, 5000):
    mc = shapley_mc(game, samples=T, seed=0)
    gap = np.abs(mc.values - exact.values).max()
    print(f"monte-carlo T={T:5d}: max |error| {gap:.5f}, max stderr {mc.stderr.max():.5f}")

# The dispatcher picks the solver from the coalition size.
print("\ndispatch:", concept_relevance(game, ShapleyConfig(exact_max=12, samples=100, seed=0)).method,
      "for K=8 with exact_max=12;",
      concept_relevance(game, ShapleyConfig(exact_max=4, samples=100, seed=0)).method,
      "with exact_max=4")

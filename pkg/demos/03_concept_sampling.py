"""Prior node importance and concept sampling.

Each node is scored by how much the classifier's output distribution moves
(KL divergence) when one of its incident edges is removed, averaged over
its neighbors.  Concepts are then fixed-size node sets drawn without
replacement from the normalized scores.

Run: python demos/03_concept_sampling.py
"""

from collections import Counter

import numpy as np

from conceptrank import compute_prior, node_disturbance, sample_concepts
from _demo_common import demo_graph, demo_model

g = demo_graph()
model = demo_model()

prior = compute_prior(model, g)
print("node  alpha     prob")
for i in np.argsort(prior.probs)[::-1][:5]:
    print(f"{i:4d}  {prior.alpha[i]:.6f}  {prior.probs[i]:.4f}")
print(f"(prior sums to {prior.probs.sum():.12f})")

i, j = g.edges[0]
print(f"\nsingle edge ({i}, {j}) disturbance: {node_disturbance(model, g, i, j):.6f}")

# L concepts of size floor(N * p); the seed pins the whole draw.
cs = sample_concepts(prior, g, L=8, p=0.25, seed=11)
print(f"\n{cs.L} concepts of size {cs.concepts[0].num_nodes} (p={cs.p}):")
for c in cs.concepts:
    print("  ", c.node_ids)

counts = Counter(v for c in cs.concepts for v in c.node_ids)
print("\nmost sampled nodes:", counts.most_common(4))
print("highest prior nodes:", [int(v) for v in np.argsort(prior.probs)[::-1][:4]])

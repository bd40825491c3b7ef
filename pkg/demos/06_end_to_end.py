"""Full pipeline: explanation map, node relevance, and quality metrics.

Equivalent CLI:
    conceptrank explain --model model.json --graph graph.json --seed 7
    conceptrank metrics --model model.json --graph graph.json \
        --explanation graph.explanation.json

Run: python demos/06_end_to_end.py
"""

import tempfile
from pathlib import Path

import numpy as np

from conceptrank import ExplainConfig, evaluate_relevance, explain, load_explanation, save_explanation
from _demo_common import demo_graph, demo_model

g = demo_graph()
model = demo_model()

cfg = ExplainConfig(L=10, p=0.25, seed=7)
em = explain(model, g, cfg)

print(f"relevance matrix: {em.xi.shape[0]} concepts x {em.xi.shape[1]} nodes")
print("concept centralities:", np.round(em.r, 4))
print("node relevance:")
for node in np.argsort(np.abs(em.node_relevance))[::-1][:6]:
    print(f"  node {node:2d}: {em.node_relevance[node]:+.6f}")

report = evaluate_relevance(model, g, em.node_relevance, samples=500, seed=7)
print(f"\nentropy               {report.entropy:.4f} (max possible {np.log(g.num_nodes):.4f})")
print(f"infidelity (gaussian) {report.infidelity_gaussian:.6f} ± {report.infidelity_gaussian_stderr:.2g}")
print(f"infidelity (unit)     {report.infidelity_unit:.6f}")

with tempfile.TemporaryDirectory() as tmp:
    out = Path(tmp) / "explanation.json"
    save_explanation(em, out)
    again = load_explanation(out)
    print(f"\nsaved {out.stat().st_size} bytes; meta keys: {sorted(again['meta'])}")

"""Concept-based relevance explanations for graph classification models.

The pipeline samples subgraph "concepts" sized to a comprehension fraction
p, orders them globally by eigencentrality over a pairwise similarity
graph and locally by Shapley values of their nodes, and projects the
result to a per-node relevance map.  Explanations are scored with
infidelity (Gaussian and unit perturbations) and Shannon entropy.
"""

from .concepts import (
    ConceptSet,
    NodePrior,
    compute_prior,
    node_disturbance,
    sample_concepts,
)
from .errors import (
    ConceptSizeZero,
    DimensionMismatch,
    EmptyNodeSet,
    ExplainerError,
    FormatError,
    InvalidNodeSet,
    NotAnEdge,
    NotStochastic,
    ShapeMismatch,
    TooFewConcepts,
    TooLargeForExact,
    ValidationError,
)
from .graphs import (
    DatasetEntry,
    Graph,
    Subgraph,
    edge_removed,
    induced_subgraph,
    load_dataset,
    load_graph,
    save_graph,
)
from .metrics import (
    MetricReport,
    REFERENCE_SCORES,
    entropy,
    evaluate_relevance,
    infidelity,
)
from .model import (
    DenseHead,
    GcnLayer,
    ModelSpec,
    PROB_FLOOR,
    forward,
    kl_divergence,
    load_model,
    masked_forward,
    model_from_dict,
)
from .pipeline import (
    ExplainConfig,
    ExplanationMap,
    assemble_xbar,
    explain,
    load_explanation,
    save_explanation,
)
from .ranking import (
    ConceptGraph,
    build_concept_graph,
    concept_graph_from_weights,
    concept_signal_similarity,
    edge_density,
    eigencentrality,
)
from .shapley import (
    CoalitionGame,
    ShapleyConfig,
    ShapleyResult,
    concept_relevance,
    game_for_concept,
    payoff,
    shapley_exact,
    shapley_mc,
)

__version__ = "0.1.0"

__all__ = [
    "ConceptGraph",
    "ConceptSet",
    "ConceptSizeZero",
    "CoalitionGame",
    "DatasetEntry",
    "DenseHead",
    "DimensionMismatch",
    "EmptyNodeSet",
    "ExplainConfig",
    "ExplainerError",
    "ExplanationMap",
    "FormatError",
    "GcnLayer",
    "Graph",
    "InvalidNodeSet",
    "MetricReport",
    "ModelSpec",
    "NodePrior",
    "NotAnEdge",
    "NotStochastic",
    "PROB_FLOOR",
    "REFERENCE_SCORES",
    "ShapeMismatch",
    "ShapleyConfig",
    "ShapleyResult",
    "Subgraph",
    "TooFewConcepts",
    "TooLargeForExact",
    "ValidationError",
    "assemble_xbar",
    "build_concept_graph",
    "compute_prior",
    "concept_graph_from_weights",
    "concept_relevance",
    "concept_signal_similarity",
    "edge_density",
    "edge_removed",
    "eigencentrality",
    "entropy",
    "evaluate_relevance",
    "explain",
    "forward",
    "game_for_concept",
    "induced_subgraph",
    "infidelity",
    "kl_divergence",
    "load_dataset",
    "load_explanation",
    "load_graph",
    "load_model",
    "masked_forward",
    "model_from_dict",
    "node_disturbance",
    "payoff",
    "sample_concepts",
    "save_explanation",
    "save_graph",
    "shapley_exact",
    "shapley_mc",
]

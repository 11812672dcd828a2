"""Laminar ball families, Swiss cheese complexity, and homogeneous
rectangle extraction for bipartite graphs of bounded VC-minimal
complexity."""

from .cheese import (
    CheeseDecomposition,
    FlipLabeling,
    SwissCheese,
    decompose,
    evaluate,
    expressible,
    graph_complexity,
    min_complexity,
    restrict_decomposition,
)
from .errors import (
    ClaimViolation,
    ComplexityBoundError,
    DisjointnessError,
    InexpressibleError,
    MalformedInputError,
    NotDirectedError,
    ValidationError,
    VCMinimalError,
)
from .extractor import ExtractionTrace, auto_bound, check_claim_32, check_claim_33, extract, k_fraction
from .instance import ExtractionInstance, HomogeneousRectangle
from .laminar import DirectedFamily, ElementSet, LaminarForest, build_forest, check_directed, restrict_family

__version__ = "0.1.0"

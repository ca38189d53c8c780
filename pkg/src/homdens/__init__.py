"""Homomorphism densities against step kernels, goodness certificates and inequality checks."""

from .certifier import Certificate, certify, classify_catalog, replay_certificate
from .graphs import (
    BipartiteGraph,
    Graph,
    Hypergraph,
    MultitreeSpec,
    analyze,
    canonical_form,
    canonical_graph,
    construct_family,
    enumerate_connected,
    incidence,
    make_graph,
    subdivision,
)
from .homdensity import hom_count, t, t_bipartite, t_hypergraph, t_weighted
from .kernel import StepKernel, from_matrix, random_kernel, rect_kernel

__version__ = "0.1.0"

__all__ = [
    "BipartiteGraph", "Certificate", "Graph", "Hypergraph", "MultitreeSpec", "StepKernel",
    "analyze", "canonical_form", "canonical_graph", "certify", "classify_catalog", "construct_family",
    "enumerate_connected", "from_matrix", "hom_count", "incidence", "make_graph", "random_kernel",
    "rect_kernel", "replay_certificate", "subdivision", "t", "t_bipartite", "t_hypergraph", "t_weighted",
]

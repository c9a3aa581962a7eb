"""Directed mixed graphs under μ-separation."""

from .equivalence import (Dmeg, IndependenceModel, InducingPathKind, NotMaximalError, d_set,
                          dmeg, equivalence_class, independence_model, inducing_path_exists,
                          is_maximal, markov_equivalent, maximal_dmg, potential_parent,
                          potential_sibling, separable)
from .graph import (BIDIRECTED, DIRECTED, CapExceededError, Dmg, Edge, GraphError, Mark, Walk,
                    add_edge, ancestors, canonical_dg, induced_subgraph, is_supergraph,
                    make_dmg, remove_edge)
from .io import export_dot, parse_dmeg, parse_graph, serialize_dmeg, serialize_graph
from .kernels import backend
from .marginalize import latent_projection, verify_marginalization_invariance
from .separation import (delta_separated, find_mu_connecting_route, m_separated, mu_separated,
                         mu_separated_via_augmentation)
from .timeseries import check_rolling_correspondence, proof_horizon, unroll

__version__ = "0.1.0"

__all__ = [
    "BIDIRECTED", "DIRECTED", "CapExceededError", "Dmeg", "Dmg", "Edge", "GraphError",
    "IndependenceModel", "InducingPathKind", "Mark", "NotMaximalError", "Walk", "add_edge",
    "ancestors", "backend", "canonical_dg", "check_rolling_correspondence", "d_set",
    "delta_separated", "dmeg", "equivalence_class", "export_dot", "find_mu_connecting_route",
    "independence_model", "induced_subgraph", "inducing_path_exists", "is_maximal",
    "is_supergraph", "latent_projection", "m_separated", "make_dmg", "markov_equivalent",
    "maximal_dmg", "mu_separated", "mu_separated_via_augmentation", "parse_dmeg",
    "parse_graph", "potential_parent", "potential_sibling", "proof_horizon", "remove_edge",
    "separable", "serialize_dmeg", "serialize_graph", "unroll",
    "verify_marginalization_invariance",
]

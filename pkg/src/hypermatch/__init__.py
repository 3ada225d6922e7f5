"""Exact matching, rainbow-matching and shifting tools for uniform hypergraphs."""

from .core import (
    Family,
    HypergraphError,
    KGraph,
    PreconditionError,
    build,
    degree,
    dominance_leq,
    induced,
    is_stable,
    max_codegree,
    max_degree,
    remove,
)
from .extremal import closeness, f_bound, make_D, make_HD, make_HS, make_S
from .fractional import extend_complete3, max_fractional
from .matcher import AuxGraph, aux_matching_equiv, max_matching, nu, rainbow, reduce_H, reduce_Hstar
from .shift import saturate, stabilize

__version__ = "0.1.0"

__all__ = [
    "AuxGraph", "Family", "HypergraphError", "KGraph", "PreconditionError",
    "aux_matching_equiv", "build", "closeness", "degree", "dominance_leq",
    "extend_complete3", "f_bound", "induced", "is_stable", "make_D", "make_HD",
    "make_HS", "make_S", "max_codegree", "max_degree", "max_fractional",
    "max_matching", "nu", "rainbow", "reduce_H", "reduce_Hstar", "remove",
    "saturate", "stabilize",
]

"""Berge cycles in uniform hypergraphs: thresholds, constructions, an exact
solver, lemma checkers and a cycle/path exchange engine."""

from .hypergraph import BergeWalk, DegreeProfile, UniformHypergraph, degree_profile, parse, serialize, validate, validate_walk

__all__ = [
    "BergeWalk",
    "DegreeProfile",
    "UniformHypergraph",
    "degree_profile",
    "parse",
    "serialize",
    "validate",
    "validate_walk",
]

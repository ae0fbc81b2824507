"""Exact finite-approximation toolkit for topological full groups.

Subpackages cover: finitely generated acting groups and boundary calculus
(:mod:`cantorfull.groups`, :mod:`cantorfull.boxes`), Cantor systems with
computable clopen structure (:mod:`cantorfull.systems`), full-group elements
as cocycle tables (:mod:`cantorfull.fullgroup`), a proper two-dimensional
edge coloring with free-group witnesses (:mod:`cantorfull.elekmonod`), finite
almost actions on Folner orbits (:mod:`cantorfull.sofic`), hyperfiniteness
certificates and quasi-tilings (:mod:`cantorfull.hyperfinite`), Folner-set
extraction and Folner-function bounds (:mod:`cantorfull.folner`), and finite
odometer models with exact local embeddings (:mod:`cantorfull.lef`).
"""

__version__ = "0.1.0"

__all__ = [
    "boxes",
    "groups",
    "systems",
    "fullgroup",
    "elekmonod",
    "sofic",
    "hyperfinite",
    "folner",
    "lef",
    "plots",
    "cli",
]

"""Classification of twisted Gelfand-Ponomarev modules via Kraft quivers."""

from __future__ import annotations

from .classify import (
    ClassificationReport,
    check_gp,
    classify,
    indecomposables,
    modules_isomorphic,
    split,
)
from .field import FieldCtx, gf, rationals
from .quiver import KraftQuiver, LabeledGraph, PeriodicWord, parse_word, quiver_of_periodic, quiver_of_word
from .repn import GPModule, Representation, module_of, monodromy, semilinear_conjugate, trivial_rep
from .semilinear import SemilinearMap, SigmaRelation, weak_decomposition

__version__ = "0.1.0"

__all__ = [
    "ClassificationReport",
    "FieldCtx",
    "GPModule",
    "KraftQuiver",
    "LabeledGraph",
    "PeriodicWord",
    "Representation",
    "SemilinearMap",
    "SigmaRelation",
    "check_gp",
    "classify",
    "gf",
    "indecomposables",
    "module_of",
    "modules_isomorphic",
    "monodromy",
    "parse_word",
    "quiver_of_periodic",
    "quiver_of_word",
    "rationals",
    "semilinear_conjugate",
    "split",
    "trivial_rep",
    "weak_decomposition",
]

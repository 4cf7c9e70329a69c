"""Planar maps in Campbell form: normal forms, orbits, conjugacy and bifurcation."""

from ._core import (
    Conjugacy,
    EvalError,
    Expr,
    Map,
    NormalForm,
    ParseError,
    PerturbedMap,
    PreconditionViolation,
    UnimapError,
    classify,
    disk_test,
    family_member,
    fixed_set,
    iterate,
    iterate_closed_form,
    load_map,
    parse,
    periodic_search,
    reduce,
    stability_sweep,
    validate_c1,
    verify_unipotent,
)

__all__ = [
    "Conjugacy",
    "EvalError",
    "Expr",
    "Map",
    "NormalForm",
    "ParseError",
    "PerturbedMap",
    "PreconditionViolation",
    "UnimapError",
    "classify",
    "disk_test",
    "family_member",
    "fixed_set",
    "iterate",
    "iterate_closed_form",
    "load_map",
    "parse",
    "periodic_search",
    "reduce",
    "stability_sweep",
    "validate_c1",
    "verify_unipotent",
]

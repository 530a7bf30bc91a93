"""Exact computations with fine monoids, decorated dual graphs and slb presentations."""

from ._core import (
    InputError,
    InternalError,
    Presentation,
    analyze,
    basic_monoid,
    canonical_graph,
    check_slb,
    double_dual_hilbert_basis,
    dual_hilbert_basis,
    element_eq,
    groupification,
    hilbert_basis,
    is_sharp,
    kernel_basis,
    membership,
    monoid_command,
    saturate,
    saturation_count,
    smith_diagonal,
    tropical_witness,
    varrho_saturation_count,
)

__all__ = [
    "InputError",
    "InternalError",
    "Presentation",
    "analyze",
    "basic_monoid",
    "canonical_graph",
    "check_slb",
    "double_dual_hilbert_basis",
    "dual_hilbert_basis",
    "element_eq",
    "groupification",
    "hilbert_basis",
    "is_sharp",
    "kernel_basis",
    "membership",
    "monoid_command",
    "saturate",
    "saturation_count",
    "smith_diagonal",
    "tropical_witness",
    "varrho_saturation_count",
]

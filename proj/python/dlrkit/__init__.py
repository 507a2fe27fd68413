"""Exact rational toolkit for semi-linear constraints.

Formulas are CNF text like ``(2/3*x != 0 | y <= 0) & (x - 1 <= 0)``; every
rational crossing the boundary is a ``num/den`` string, never a float.
"""

from ._dlrkit import (
    FormulaSyntaxError,
    SizeLimitError,
    __version__,
    check_convex_union,
    check_essentially_convex,
    compile_equation,
    csp_satisfiable,
    decompose,
    eliminate,
    equivalent,
    exhaustive_solve,
    optimize,
    oracle_one_in_three,
    recognize_horn,
    reduce_one_in_three,
    segment_profile,
    solve,
    standardize,
)

__all__ = [
    "FormulaSyntaxError",
    "SizeLimitError",
    "__version__",
    "check_convex_union",
    "check_essentially_convex",
    "compile_equation",
    "csp_satisfiable",
    "decompose",
    "eliminate",
    "equivalent",
    "exhaustive_solve",
    "optimize",
    "oracle_one_in_three",
    "recognize_horn",
    "reduce_one_in_three",
    "segment_profile",
    "solve",
    "standardize",
]

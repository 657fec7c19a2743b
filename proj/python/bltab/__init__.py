"""K-satisfiability solver for propositional fuzzy logic (BL with Delta and
involutive negation) over finite unions of rational intervals.

The heavy lifting lives in the compiled ``_bltab`` extension; this package
re-exports its functions.
"""

from ._bltab import (  # noqa: F401
    FormulaParseError,
    InternalSolverError,
    consistency_degree,
    evaluate,
    parse_formula,
    parse_kset,
    solve,
    verify,
    __version__,
)

__all__ = [
    "FormulaParseError",
    "InternalSolverError",
    "consistency_degree",
    "evaluate",
    "parse_formula",
    "parse_kset",
    "solve",
    "verify",
    "__version__",
]

"""Fox calculus, factorization and rational series over free group algebras."""
from .errors import BoundedVerdict, BudgetExhausted, FoxError, NotDivisibleWithinBound, UnresolvedSimplicity, UsageError
from .expr import format_poly, parse_expr
from .factor import (
    Factorization,
    Lattice,
    composition_length,
    divide_left,
    divide_right,
    endo_dim,
    factorize,
    gcd,
    is_irreducible,
    lattice_of,
    similar,
)
from .fox import (
    DerivativeIndex,
    StarContext,
    comonic_generators,
    derivative_span,
    higher_derivative,
    partial_derivative,
    star_action,
)
from .freepoly import FreePolynomial, order_of, strictly_maximal
from .leavitt import LeavittElement
from .repmod import OperatorModule
from .scalars import GF, QQ, Mod, PrimeField, Rationals, field_from_spec
from .series import RationalRep, TruncatedSeries, magnus_embed, quasi_inverse

__version__ = "0.1.0"

__all__ = [
    "BoundedVerdict",
    "BudgetExhausted",
    "FoxError",
    "NotDivisibleWithinBound",
    "UnresolvedSimplicity",
    "UsageError",
    "format_poly",
    "parse_expr",
    "Factorization",
    "Lattice",
    "composition_length",
    "divide_left",
    "divide_right",
    "endo_dim",
    "factorize",
    "gcd",
    "is_irreducible",
    "lattice_of",
    "similar",
    "DerivativeIndex",
    "StarContext",
    "comonic_generators",
    "derivative_span",
    "higher_derivative",
    "partial_derivative",
    "star_action",
    "FreePolynomial",
    "order_of",
    "strictly_maximal",
    "LeavittElement",
    "OperatorModule",
    "GF",
    "QQ",
    "Mod",
    "PrimeField",
    "Rationals",
    "field_from_spec",
    "RationalRep",
    "TruncatedSeries",
    "magnus_embed",
    "quasi_inverse",
]

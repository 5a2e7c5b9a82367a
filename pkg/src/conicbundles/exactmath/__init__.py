"""Exact arithmetic kernel: sparse multivariate polynomials over Q,
reduced rational functions, univariate factoring helpers, finite-field
witnesses, fraction-free linear algebra, and first-order jets."""

from .jets import Jet
from .linalg import mat_det, mat_rank, nullspace, rref, solve_linear
from .modular import (
    PrimeWitness,
    factorize,
    irreducible_mod_p,
    is_probable_prime,
    legendre,
    modp_irreducible_witness,
    multipoly_int_coeffs,
    next_prime,
    primes_from,
    roots_mod_p,
)
from .multipoly import MultiPoly, NotDivisible, poly_gcd
from .parser import PolyParseError, parse_poly
from .ratfunc import RatFunc, poly_at_ratfuncs
from .univariate import (
    as_univariate,
    is_square_rat,
    is_squarefree,
    rational_roots,
    same_square_class,
    square_class_rat,
    squarefree_decompose,
    squarefree_part_int,
    sqrt_rat,
    udiscriminant,
    uresultant,
)

__all__ = [
    "Jet",
    "MultiPoly",
    "NotDivisible",
    "PolyParseError",
    "PrimeWitness",
    "RatFunc",
    "as_univariate",
    "factorize",
    "irreducible_mod_p",
    "is_probable_prime",
    "is_square_rat",
    "is_squarefree",
    "legendre",
    "mat_det",
    "mat_rank",
    "modp_irreducible_witness",
    "multipoly_int_coeffs",
    "next_prime",
    "nullspace",
    "parse_poly",
    "poly_at_ratfuncs",
    "poly_gcd",
    "primes_from",
    "rational_roots",
    "roots_mod_p",
    "rref",
    "same_square_class",
    "solve_linear",
    "square_class_rat",
    "squarefree_decompose",
    "squarefree_part_int",
    "sqrt_rat",
    "udiscriminant",
    "uresultant",
]

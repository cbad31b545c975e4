"""Hilbert class polynomials H_D via the Chinese remainder theorem.

H_D mod p is computed for many primes p of the form 4p = u^2 - v^2 D by
finding one curve with CM by O_D over F_p and walking isogenies to its
conjugates; the results are glued by CRT.  A complex-analytic evaluation
serves as an independent check.
"""

from .analytic import hilbert_analytic, j_eval
from .crt_driver import Options, compute_hilbert, crt_combine, hilbert_mod_p, verify_against_oracle
from .gfpoly import PolyModP, format_poly
from .intpoly import IntPoly
from .modpoly import ModPolyCache, ModularPolynomial, build_modular_polynomial
from .primeselect import PrimePlan, SplitPrimeWitness, select_primes
from .quadform import QuadForm, class_number, decompose_class_group, enumerate_reduced, precision_bound, reduce

__all__ = [
    "IntPoly", "ModPolyCache", "ModularPolynomial", "Options", "PolyModP", "PrimePlan",
    "QuadForm", "SplitPrimeWitness", "build_modular_polynomial", "class_number",
    "compute_hilbert", "crt_combine", "decompose_class_group", "enumerate_reduced",
    "format_poly", "hilbert_analytic", "hilbert_mod_p", "j_eval", "precision_bound",
    "reduce", "select_primes", "verify_against_oracle",
]

__version__ = "0.1.0"

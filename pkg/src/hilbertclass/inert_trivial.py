"""H_D mod q for inert q with a single supersingular j-invariant.

For q in {2, 3, 5, 7, 13} there is exactly one supersingular j-invariant
j_ss, and it lies in F_q.  Every root of H_D mod q is supersingular when
(D|q) = -1, so H_D = (X - j_ss)^h(D) mod q.
"""

from __future__ import annotations

import functools
import itertools
from typing import Dict

from .gfpoly import PolyModP
from .primeselect import TRIVIAL_INERT_PRIMES, kronecker
from .quadform import check_discriminant, class_number

SUPERSINGULAR_J = {2: 0, 3: 0, 5: 0, 7: 6, 13: 5}


def _weierstrass_invariants(q, a1, a2, a3, a4, a6):
    b2 = a1 * a1 + 4 * a2
    b4 = 2 * a4 + a1 * a3
    b6 = a3 * a3 + 4 * a6
    b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4
    c4 = b2 * b2 - 24 * b4
    disc = -b2 * b2 * b8 - 8 * b4 ** 3 - 27 * b6 * b6 + 9 * b2 * b4 * b6
    return c4 % q, disc % q


def _count(q, a1, a2, a3, a4, a6):
    n = 1
    for x, y in itertools.product(range(q), repeat=2):
        if (y * y + a1 * x * y + a3 * y - x ** 3 - a2 * x * x - a4 * x - a6) % q == 0:
            n += 1
    return n


@functools.lru_cache(maxsize=None)
def brute_force_supersingular(q: int) -> frozenset:
    """j-invariants in F_q of curves with trace = 0 mod q.

    Short Weierstrass models reach every j when q > 3; q = 2, 3 use the
    general model.
    """
    found = set()
    if q > 3:
        models = ((0, 0, 0, a4, a6) for a4 in range(q) for a6 in range(q))
    else:
        models = itertools.product(range(q), repeat=5)
    for coeffs in models:
        c4, disc = _weierstrass_invariants(q, *coeffs)
        if disc == 0:
            continue
        j = pow(c4, 3, q) * pow(disc, -1, q) % q
        if j in found:
            continue
        trace = q + 1 - _count(q, *coeffs)
        if trace % q == 0:
            found.add(j)
    return frozenset(found)


def supersingular_j_table(verify: bool = True) -> Dict[int, int]:
    """{q: j_ss}; with ``verify`` the table is checked by exhaustive search."""
    if verify:
        for q, j in SUPERSINGULAR_J.items():
            if brute_force_supersingular(q) != {j}:
                raise AssertionError(f"supersingular table wrong at q={q}")
    return dict(SUPERSINGULAR_J)


def hilbert_mod_q_trivial(D: int, q: int) -> PolyModP:
    """(X - j_ss)^h(D) over F_q for q inert in O_D."""
    check_discriminant(D)
    if q not in SUPERSINGULAR_J:
        raise ValueError(f"{q} has more than one supersingular j-invariant; not in {TRIVIAL_INERT_PRIMES}")
    if kronecker(D, q) != -1:
        raise ValueError(f"{q} is not inert for discriminant {D}")
    return PolyModP([-SUPERSINGULAR_J[q], 1], q) ** class_number(D)

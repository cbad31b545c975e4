"""Binary quadratic forms of negative discriminant and the form class group."""

from __future__ import annotations

import functools
import math
from fractions import Fraction
from typing import Dict, Iterable, List, NamedTuple, Optional, Set, Tuple

import mpmath

from .primeselect import factorint, kronecker, primes_from


def is_discriminant(D: int) -> bool:
    return D < 0 and D % 4 in (0, 1)


def check_discriminant(D: int) -> int:
    if not isinstance(D, int) or not is_discriminant(D):
        raise ValueError(f"{D} is not a negative discriminant (D < 0, D = 0,1 mod 4)")
    return D


def fundamental_part(D: int) -> Tuple[int, int]:
    """Return (Delta, f) with D = f^2 Delta and Delta fundamental."""
    check_discriminant(D)
    square, core = 1, -1
    for q, e in factorint(D).items():
        square *= q ** (e // 2)
        if e % 2:
            core *= q
    if core % 4 == 1:
        return core, square
    # core = 2,3 mod 4: the fundamental discriminant is 4*core
    return 4 * core, square // 2


def conductor(D: int) -> int:
    return fundamental_part(D)[1]


class QuadForm(NamedTuple):
    """Integral binary quadratic form A x^2 + B xy + C y^2."""

    A: int
    B: int
    C: int

    @property
    def discriminant(self) -> int:
        return self.B * self.B - 4 * self.A * self.C

    def is_primitive(self) -> bool:
        return math.gcd(math.gcd(self.A, self.B), self.C) == 1

    def is_reduced(self) -> bool:
        A, B, C = self
        if not (abs(B) <= A <= C):
            return False
        if (abs(B) == A or A == C) and B < 0:
            return False
        return True

    def inverse(self) -> "QuadForm":
        return reduce(QuadForm(self.A, -self.B, self.C))

    def __str__(self):
        return f"({self.A},{self.B},{self.C})"


def principal_form(D: int) -> QuadForm:
    k = D % 2
    return QuadForm(1, k, (k - D) // 4)


def reduce(form: Tuple[int, int, int]) -> QuadForm:
    """Gauss reduction of a positive definite form."""
    A, B, C = form
    D = B * B - 4 * A * C
    if D >= 0:
        raise ValueError(f"form {tuple(form)} is not definite (discriminant {D})")
    if A <= 0:
        raise ValueError(f"form {tuple(form)} is not positive (A <= 0)")
    while True:
        # normalize: -A < B <= A
        if not (-A < B <= A):
            r = (A - B) // (2 * A)
            B, C = B + 2 * r * A, A * r * r + B * r + C
        if A > C:
            A, B, C = C, -B, A
            continue
        if A == C and B < 0:
            B = -B
        return QuadForm(A, B, C)


def enumerate_reduced(D: int) -> List[QuadForm]:
    """All primitive reduced forms of discriminant D, sorted by (A, B)."""
    check_discriminant(D)
    return list(_reduced_forms(D))


@functools.lru_cache(maxsize=1024)
def _reduced_forms(D: int) -> Tuple[QuadForm, ...]:
    forms = []
    a = 1
    while 3 * a * a <= -D:
        for b in range(-a + 1, a + 1):
            if (b - D) % 2:
                continue
            num = b * b - D
            if num % (4 * a):
                continue
            c = num // (4 * a)
            if c < a or (c == a and b < 0):
                continue
            if math.gcd(math.gcd(a, b), c) != 1:
                continue
            forms.append(QuadForm(a, b, c))
        a += 1
    return tuple(forms)


def class_number(D: int) -> int:
    check_discriminant(D)
    return len(_reduced_forms(D))


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def compose(f: Tuple[int, int, int], g: Tuple[int, int, int]) -> QuadForm:
    """Reduced composition of two primitive forms of equal discriminant.

    Shanks/Cohen composition with the gcd handled in two stages.
    """
    a1, b1, c1 = f
    a2, b2, c2 = g
    D = b1 * b1 - 4 * a1 * c1
    if D != b2 * b2 - 4 * a2 * c2:
        raise ValueError("cannot compose forms of different discriminants")
    if a1 > a2:
        a1, b1, c1, a2, b2, c2 = a2, b2, c2, a1, b1, c1
    s = (b1 + b2) // 2
    n = b2 - s
    if a2 % a1 == 0:
        y1, d = 0, a1
    else:
        d, y1, _ = _xgcd(a2, a1)
    if s % d == 0:
        y2, x2, d1 = -1, 0, d
    else:
        d1, x2, y2 = _xgcd(s, d)
        y2 = -y2
    v1, v2 = a1 // d1, a2 // d1
    r = (y1 * y2 * n - x2 * c2) % v1
    b3 = b2 + 2 * v2 * r
    a3 = v1 * v2
    c3 = (b3 * b3 - D) // (4 * a3)
    return reduce((a3, b3, c3))


def form_pow(f: QuadForm, e: int) -> QuadForm:
    result = principal_form(f.discriminant)
    base = reduce(f)
    if e < 0:
        base, e = base.inverse(), -e
    while e:
        if e & 1:
            result = compose(result, base)
        base = compose(base, base)
        e >>= 1
    return result


def prime_form(D: int, ell: int) -> QuadForm:
    """Reduced form of the degree-one prime of norm ell.

    The middle coefficient is the smallest non-negative B with
    B^2 = D mod 4*ell; the returned form is its reduction.
    """
    check_discriminant(D)
    if kronecker(D, ell) == -1:
        raise ValueError(f"{ell} is inert for discriminant {D}")
    if conductor(D) % ell == 0:
        raise ValueError(f"{ell} divides the conductor of {D}")
    for b in range(2 * ell + 1):
        if (b * b - D) % (4 * ell) == 0:
            form = QuadForm(ell, b, (b * b - D) // (4 * ell))
            if form.is_primitive():
                return reduce(form)
    raise ValueError(f"no primitive form of norm {ell} for discriminant {D}")


class Generator(NamedTuple):
    form: QuadForm
    ell: int
    order: int


class ClassGroupDecomposition(NamedTuple):
    """Prime-norm generators with relative orders.

    ``generators[i].order`` is the index of <g_1..g_{i-1}> in
    <g_1..g_i>, so every class is g_1^e_1 ... g_k^e_k for exactly one
    exponent tuple with 0 <= e_i < order_i.  The first generator's
    relative order is its full order.
    """

    D: int
    generators: Tuple[Generator, ...]
    total_order: int

    def elements(self) -> List[QuadForm]:
        elems = [principal_form(self.D)]
        for gen in self.generators:
            nxt = []
            for x in elems:
                for _ in range(gen.order):
                    nxt.append(x)
                    x = compose(x, gen.form)
            elems = nxt
        return elems


def decompose_class_group(D: int, forbidden: Iterable[int] = ()) -> ClassGroupDecomposition:
    """Generators of Cl(D) by prime forms of ascending norm.

    Norms in ``forbidden``, inert primes and divisors of the conductor are
    skipped.  Relative orders come from iterated composition.
    """
    check_discriminant(D)
    forbidden = set(forbidden)
    h = class_number(D)
    f = conductor(D)
    subgroup: Set[QuadForm] = {principal_form(D)}
    gens: List[Generator] = []
    for ell in primes_from(2):
        if len(subgroup) == h:
            break
        if ell in forbidden or f % ell == 0 or kronecker(D, ell) == -1:
            continue
        g = prime_form(D, ell)
        order, x = 1, g
        while x not in subgroup:
            x = compose(x, g)
            order += 1
        if order == 1:
            continue
        grown = set()
        x = principal_form(D)
        for _ in range(order):
            grown.update(compose(x, y) for y in subgroup)
            x = compose(x, g)
        subgroup = grown
        gens.append(Generator(g, ell, order))
    return ClassGroupDecomposition(D, tuple(gens), h)


def reciprocal_norm_sum(D: int) -> Fraction:
    """Exact sum of 1/A over the reduced forms of discriminant D."""
    return sum((Fraction(1, q.A) for q in enumerate_reduced(D)), Fraction(0))


def precision_bound(D: int) -> int:
    """Bit bound for the largest coefficient of H_D, sign bit included.

    n = ceil((2.48 h + pi sqrt|D| sum 1/A) / ln 2) + 1, i.e. the bit length
    of exp(2.48 h + pi sqrt|D| sum 1/A) plus one.
    """
    check_discriminant(D)
    h = class_number(D)
    S = reciprocal_norm_sum(D)
    with mpmath.workprec(128 + 2 * abs(D).bit_length()):
        nats = mpmath.mpf(248) / 100 * h + mpmath.pi * mpmath.sqrt(-D) * mpmath.mpf(S.numerator) / S.denominator
        bits = nats / mpmath.ln2
        return int(mpmath.ceil(bits)) + 1

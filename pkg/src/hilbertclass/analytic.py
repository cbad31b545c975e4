"""Complex-analytic computation of H_D.

Each reduced form (A, B, C) gives a CM point tau = (-B + i sqrt|D|) / (2A);
H_D is the product of (X - j(tau)) over all forms, with coefficients
rounded to integers.  This path shares no code with the multi-prime
computation beyond the form enumeration, which makes it the reference for
the residues computed over finite fields.
"""

from __future__ import annotations

from typing import List, NamedTuple, Optional

import mpmath
from mpmath import mpc, mpf

from .intpoly import IntPoly
from .quadform import QuadForm, check_discriminant, enumerate_reduced, precision_bound

TAIL_GUARD_BITS = 16
MAX_ORACLE_BITS = 1 << 20


class PrecisionError(ArithmeticError):
    pass


class CmPoint(NamedTuple):
    form: QuadForm
    tau: mpc


def cm_point(form: QuadForm, D: Optional[int] = None) -> CmPoint:
    """tau = (-B + i sqrt|D|)/(2A) at the current working precision."""
    if D is None:
        D = form.discriminant
    A, B, _ = form
    tau = mpc(mpf(-B) / (2 * A), mpmath.sqrt(mpf(-D)) / (2 * A))
    return CmPoint(form, tau)


def _to_fundamental_domain(tau):
    while True:
        tau = tau - mpmath.nint(tau.real)
        if abs(tau) < 1 - mpmath.eps * 8:
            tau = -1 / tau
        else:
            return tau


def _euler_product(q, cutoff):
    """prod(1 - q^n) as the pentagonal series sum (-1)^k q^{k(3k-1)/2}."""
    s = mpc(1)
    t = mpc(1)  # q^{(k-1)(3k-4)/2}
    qk = mpc(1)  # q^{k-1}
    k = 1
    while True:
        # consecutive pentagonal exponents differ by 3k - 2
        t = t * qk * qk * qk * q
        qk = qk * q
        if abs(t) < cutoff:
            return s
        term = t + t * qk
        s = s - term if k % 2 else s + term
        k += 1


def _j_from_q(q, bits):
    """j = (x + 256)^3 / x^2 with x = Delta(tau) / Delta(2 tau).

    Both discriminants come from the pentagonal series, which needs only
    O(sqrt(bits)) sparse terms.
    """
    cutoff = mpf(2) ** (-(bits + TAIL_GUARD_BITS))
    x = (_euler_product(q, cutoff) / _euler_product(q * q, cutoff)) ** 24 / q
    return (x + 256) ** 3 / (x * x)


def j_eval(tau, bits: int = 53):
    """Klein j(tau) to about ``bits`` bits of relative precision."""
    tau = mpmath.mpmathify(tau)
    if tau.imag <= 0:
        raise ValueError("tau must lie in the upper half plane")
    if bits > MAX_ORACLE_BITS:
        raise PrecisionError(f"requested {bits} bits exceeds the oracle budget")
    with mpmath.workprec(bits + 32):
        t = _to_fundamental_domain(mpc(tau))
        q = mpmath.exp(2j * mpmath.pi * t)
        value = _j_from_q(q, bits)
    return +value


def _mul_real_polys(f, g):
    h = [mpf(0)] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            h[i + j] += a * b
    return h


def _product_tree(polys):
    if not polys:
        return [mpf(1)]
    while len(polys) > 1:
        nxt = [_mul_real_polys(polys[i], polys[i + 1]) for i in range(0, len(polys) - 1, 2)]
        if len(polys) % 2:
            nxt.append(polys[-1])
        polys = nxt
    return polys[0]


def cm_j_values(D: int, bits: int) -> List:
    """j(tau) for every reduced form, in enumeration order."""
    out = []
    with mpmath.workprec(bits + 32):
        for form in enumerate_reduced(D):
            out.append(j_eval(cm_point(form, D).tau, bits))
    return out


def _real_factors(D: int, bits: int):
    """Linear and quadratic real factors; (A, B, C) and (A, -B, C) are conjugate."""
    forms = enumerate_reduced(D)
    present = set(forms)
    factors = []
    with mpmath.workprec(bits + 32):
        for form in forms:
            A, B, C = form
            if B < 0 and (A, -B, C) in present:
                continue
            j = j_eval(cm_point(form, D).tau, bits)
            if B > 0 and (A, -B, C) in present:
                factors.append([abs(j) ** 2, -2 * j.real, mpf(1)])
            else:
                factors.append([-j.real, mpf(1)])
    return factors


def hilbert_analytic(D: int, bits_hint: Optional[int] = None) -> IntPoly:
    """H_D by floating-point evaluation and rounding.

    Starts at the coefficient bound plus 64 guard bits (or ``bits_hint``)
    and doubles the precision until every coefficient is within 2^-10 of
    an integer.
    """
    check_discriminant(D)
    if D == -3:
        return IntPoly([0, 1])
    if D == -4:
        return IntPoly([-1728, 1])
    bits = bits_hint or precision_bound(D) + 64
    tol = mpf(2) ** -10
    while bits <= MAX_ORACLE_BITS:
        with mpmath.workprec(bits + 32):
            coeffs = _product_tree(_real_factors(D, bits))
            rounded = [int(mpmath.nint(c)) for c in coeffs]
            if all(abs(c - r) < tol for c, r in zip(coeffs, rounded)):
                return IntPoly(rounded)
        bits *= 2
    raise PrecisionError(f"coefficients of H_{D} did not stabilise below {MAX_ORACLE_BITS} bits")

"""Dense univariate polynomials over a prime field F_p.

Low-level routines work on coefficient lists ``[a_0, a_1, ..., a_n]`` of
integers in ``[0, p)`` with a nonzero leading coefficient; ``[]`` is the
zero polynomial.  :class:`PolyModP` wraps a list together with its modulus
for the public API.
"""

from __future__ import annotations

import random
from typing import Iterable, List, Sequence

KARATSUBA_CUTOFF = 32


def _strip(f: List[int]) -> List[int]:
    while f and not f[-1]:
        f.pop()
    return f


def gf_add(f, g, p):
    if len(f) < len(g):
        f, g = g, f
    h = list(f)
    for i, c in enumerate(g):
        h[i] = (h[i] + c) % p
    return _strip(h)


def gf_sub(f, g, p):
    n = max(len(f), len(g))
    h = [0] * n
    for i, c in enumerate(f):
        h[i] = c
    for i, c in enumerate(g):
        h[i] = (h[i] - c) % p
    return _strip(h)


def gf_mul_school(f, g, p):
    if not f or not g:
        return []
    h = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                h[i + j] += a * b
    return _strip([c % p for c in h])


def _kara(f, g, p):
    # f, g same length n, unreduced integer lists
    n = len(f)
    if n <= KARATSUBA_CUTOFF:
        h = [0] * (2 * n - 1)
        for i, a in enumerate(f):
            if a:
                for j, b in enumerate(g):
                    h[i + j] += a * b
        return h
    m = n // 2
    f0, f1 = f[:m], f[m:]
    g0, g1 = g[:m], g[m:]
    k = len(f1)
    f0p = f0 + [0] * (k - m)
    g0p = g0 + [0] * (k - m)
    lo = _kara(f0, g0, p)
    hi = _kara(f1, g1, p)
    mid = _kara([(a + b) % p for a, b in zip(f0p, f1)], [(a + b) % p for a, b in zip(g0p, g1)], p)
    h = [0] * (2 * n - 1)
    for i, c in enumerate(lo):
        h[i] += c
        mid[i] -= c
    for i, c in enumerate(hi):
        h[i + 2 * m] += c
        mid[i] -= c
    for i, c in enumerate(mid):
        h[i + m] += c
    return h


def gf_mul(f, g, p):
    if not f or not g:
        return []
    if min(len(f), len(g)) <= KARATSUBA_CUTOFF:
        return gf_mul_school(f, g, p)
    n = max(len(f), len(g))
    h = _kara(list(f) + [0] * (n - len(f)), list(g) + [0] * (n - len(g)), p)
    return _strip([c % p for c in h[: len(f) + len(g) - 1]])


def gf_divmod(f, g, p):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    r = list(f)
    dg = len(g) - 1
    if len(r) - 1 < dg:
        return [], _strip(r)
    inv = pow(g[-1], -1, p)
    q = [0] * (len(r) - dg)
    for i in range(len(r) - 1, dg - 1, -1):
        c = r[i] * inv % p
        q[i - dg] = c
        if c:
            base = i - dg
            for j in range(dg):
                r[base + j] = (r[base + j] - c * g[j]) % p
        r[i] = 0
    return _strip(q), _strip(r[:dg])


def gf_rem(f, g, p):
    return gf_divmod(f, g, p)[1]


def gf_monic(f, p):
    if not f:
        return []
    inv = pow(f[-1], -1, p)
    return [c * inv % p for c in f]


def gf_gcd(f, g, p):
    f, g = _strip(list(f)), _strip(list(g))
    while g:
        f, g = g, gf_rem(f, g, p)
    return gf_monic(f, p)


def gf_powmod(f, e, g, p):
    """f^e mod g."""
    result = [1] if len(g) > 1 else []
    base = gf_rem(f, g, p)
    while e:
        if e & 1:
            result = gf_rem(gf_mul(result, base, p), g, p)
        e >>= 1
        if e:
            base = gf_rem(gf_mul(base, base, p), g, p)
    return result


def gf_powmod_x(e, g, p):
    """X^e mod g by left-to-right square-and-multiply; multiply-by-X is a shift."""
    if len(g) < 2:
        raise ValueError("modulus must have degree >= 1")
    result = gf_rem([1], g, p)
    for bit in bin(e)[2:]:
        result = gf_rem(gf_mul(result, result, p), g, p)
        if bit == "1":
            result = gf_rem([0] + result, g, p)
    return result


def gf_eval(f, x, p):
    acc = 0
    for c in reversed(f):
        acc = (acc * x + c) % p
    return acc


def gf_from_roots(roots: Sequence[int], p: int) -> List[int]:
    """Monic product of (X - r) by a balanced product tree."""
    layer = [[(-r) % p, 1] for r in roots]
    if not layer:
        return [1]
    while len(layer) > 1:
        nxt = [gf_mul(layer[i], layer[i + 1], p) for i in range(0, len(layer) - 1, 2)]
        if len(layer) % 2:
            nxt.append(layer[-1])
        layer = nxt
    return layer[0]


def _split(g, p, rng, out):
    d = len(g) - 1
    if d == 0:
        return
    if d == 1:
        out.append((-g[0] * pow(g[1], -1, p)) % p)
        return
    half = (p - 1) // 2
    while True:
        delta = rng.randrange(p)
        w = gf_powmod([delta, 1], half, g, p)
        h = gf_gcd(gf_sub(w, [1], p), g, p)
        if 0 < len(h) - 1 < d:
            break
    _split(h, p, rng, out)
    _split(gf_divmod(g, h, p)[0], p, rng, out)


def gf_roots(f, p, seed=0) -> List[int]:
    """Distinct roots of f in F_p, ascending."""
    f = _strip([c % p for c in f])
    if not f:
        raise ValueError("the zero polynomial has every element as root")
    if len(f) == 1:
        return []
    if p == 2:
        return [x for x in (0, 1) if gf_eval(f, x, p) == 0]
    f = gf_monic(f, p)
    xp = gf_powmod_x(p, f, p)
    g = gf_gcd(gf_sub(xp, [0, 1], p), f, p)
    if len(g) <= 1:
        return []
    rng = random.Random(f"{p}:{hash(tuple(f))}:{seed}")
    roots: List[int] = []
    _split(g, p, rng, roots)
    return sorted(roots)


def root_multiplicity(f, r, p) -> int:
    m = 0
    lin = [(-r) % p, 1]
    f = _strip(list(f))
    while f:
        q, rem = gf_divmod(f, lin, p)
        if rem:
            break
        m += 1
        f = q
    return m


class PolyModP:
    """Polynomial over F_p with ascending coefficient storage."""

    __slots__ = ("coeffs", "p")

    def __init__(self, coeffs: Iterable[int], p: int):
        self.p = p
        self.coeffs = tuple(_strip([int(c) % p for c in coeffs]))

    @classmethod
    def _raw(cls, coeffs, p):
        obj = cls.__new__(cls)
        obj.p = p
        obj.coeffs = tuple(coeffs)
        return obj

    @classmethod
    def x(cls, p):
        return cls._raw((0, 1), p)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self):
        return not self.coeffs

    def is_monic(self):
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def _check(self, other):
        if isinstance(other, int):
            return PolyModP([other], self.p)
        if other.p != self.p:
            raise ValueError(f"moduli differ: {self.p} vs {other.p}")
        return other

    def __add__(self, other):
        other = self._check(other)
        return PolyModP._raw(gf_add(self.coeffs, other.coeffs, self.p), self.p)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._check(other)
        return PolyModP._raw(gf_sub(self.coeffs, other.coeffs, self.p), self.p)

    def __neg__(self):
        return PolyModP._raw(gf_sub([], self.coeffs, self.p), self.p)

    def __mul__(self, other):
        other = self._check(other)
        return PolyModP._raw(gf_mul(self.coeffs, other.coeffs, self.p), self.p)

    __rmul__ = __mul__

    def __divmod__(self, other):
        other = self._check(other)
        q, r = gf_divmod(self.coeffs, other.coeffs, self.p)
        return PolyModP._raw(q, self.p), PolyModP._raw(r, self.p)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, e):
        result = PolyModP([1], self.p)
        base = self
        while e:
            if e & 1:
                result = result * base
            base = base * base
            e >>= 1
        return result

    def __eq__(self, other):
        if isinstance(other, PolyModP):
            return self.p == other.p and self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash((self.p, self.coeffs))

    def __call__(self, x: int) -> int:
        return gf_eval(self.coeffs, x, self.p)

    def monic(self):
        return PolyModP._raw(gf_monic(self.coeffs, self.p), self.p)

    def __repr__(self):
        return f"PolyModP({list(self.coeffs)}, {self.p})"

    def __str__(self):
        return format_poly(self.coeffs)


def format_poly(coeffs: Sequence[int], var: str = "X") -> str:
    """Descending powers with explicit signs and no spaces: ``X^2-3X+1``."""
    out = []
    for i in range(len(coeffs) - 1, -1, -1):
        c = coeffs[i]
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}{mono}"
        sign = "-" if c < 0 else ("+" if out else "")
        out.append(sign + body)
    return "".join(out) if out else "0"


def poly_add(f: PolyModP, g: PolyModP) -> PolyModP:
    return f + g


def poly_mul(f: PolyModP, g: PolyModP) -> PolyModP:
    return f * g


def poly_rem(f: PolyModP, g: PolyModP) -> PolyModP:
    return f % g


def poly_gcd(f: PolyModP, g: PolyModP) -> PolyModP:
    f._check(g)
    return PolyModP._raw(gf_gcd(f.coeffs, g.coeffs, f.p), f.p)


def powmod_x(e: int, f: PolyModP) -> PolyModP:
    return PolyModP._raw(gf_powmod_x(e, f.coeffs, f.p), f.p)


def roots_in_fp(f: PolyModP, seed: int = 0) -> List[int]:
    return gf_roots(f.coeffs, f.p, seed)


def product_from_roots(roots: Sequence[int], p: int) -> PolyModP:
    return PolyModP._raw(gf_from_roots([r % p for r in roots], p), p)

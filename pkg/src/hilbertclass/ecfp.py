"""Elliptic curves Y^2 = X^3 + aX + b over F_p.

Points are ``(x, y)`` tuples with ``None`` for the point at infinity.
Besides the group law this module certifies curve cardinalities (Mestre's
argument) and locates j-invariants in l-isogeny volcanoes, which is what
the search for a curve with prescribed endomorphism ring needs.
"""

from __future__ import annotations

import math
import random
from typing import List, NamedTuple, Optional, Tuple

from .gfpoly import gf_roots, root_multiplicity
from .modpoly import ModPolyCache, ModularPolynomial, specialize_mod_p
from .primeselect import MESTRE_THRESHOLD, factorint, smallest_nonresidue, sqrt_mod
from .quadform import fundamental_part

Point = Optional[Tuple[int, int]]
INFINITY: Point = None


class AssumedMultipleError(ArithmeticError):
    """m * P is not the identity, so m cannot be the group order."""


class VolcanoError(RuntimeError):
    pass


class CurveFp(NamedTuple):
    p: int
    a: int
    b: int

    @property
    def discriminant(self) -> int:
        return (4 * self.a ** 3 + 27 * self.b ** 2) % self.p

    def j_invariant(self) -> int:
        p = self.p
        a3 = 4 * pow(self.a, 3, p)
        den = (a3 + 27 * self.b * self.b) % p
        if den == 0:
            raise ValueError("singular curve")
        return 1728 * a3 * pow(den, -1, p) % p

    def is_on_curve(self, P: Point) -> bool:
        if P is None:
            return True
        x, y = P
        return (y * y - (x * x * x + self.a * x + self.b)) % self.p == 0

    def twist(self, d: Optional[int] = None) -> "CurveFp":
        """Quadratic twist by d (default: the smallest non-residue)."""
        p = self.p
        if d is None:
            d = smallest_nonresidue(p)
        return CurveFp(p, self.a * d * d % p, self.b * d * d * d % p)

    def rhs(self, x: int) -> int:
        return (x * x * x + self.a * x + self.b) % self.p


def curve_from_j(p: int, j: int, twist: int = 0) -> CurveFp:
    """A curve with j-invariant j; ``twist=1`` returns its quadratic twist."""
    if p <= 3:
        raise ValueError("short Weierstrass models need p > 3")
    j %= p
    if j == 0:
        E = CurveFp(p, 0, 1)
    elif j == 1728 % p:
        E = CurveFp(p, 1, 0)
    else:
        k = j * pow(1728 - j, -1, p) % p
        E = CurveFp(p, 3 * k % p, 2 * k % p)
    if E.discriminant == 0:
        raise ValueError(f"no curve with j={j} over F_{p}")
    return E.twist() if twist else E


def neg(E: CurveFp, P: Point) -> Point:
    if P is None:
        return None
    return (P[0], (-P[1]) % E.p)


def add(E: CurveFp, P: Point, Q: Point) -> Point:
    if P is None:
        return Q
    if Q is None:
        return P
    p = E.p
    x1, y1 = P
    x2, y2 = Q
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + E.a) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def mul(E: CurveFp, P: Point, n: int) -> Point:
    if n < 0:
        P, n = neg(E, P), -n
    R = None
    for bit in bin(n)[2:]:
        R = add(E, R, R)
        if bit == "1":
            R = add(E, R, P)
    return R


def random_point(E: CurveFp, rng: random.Random) -> Point:
    """Uniform-ish affine point: random x until x^3+ax+b is a square."""
    p = E.p
    while True:
        x = rng.randrange(p)
        r = E.rhs(x)
        if r == 0:
            return (x, 0)
        if pow(r, (p - 1) // 2, p) == 1:
            y = sqrt_mod(r, p)
            if rng.getrandbits(1):
                y = p - y
            return (x, y)


def count_points(E: CurveFp) -> int:
    """#E(F_p) by summing Legendre symbols; for small p only."""
    p = E.p
    total = p + 1
    for x in range(p):
        r = E.rhs(x)
        if r:
            total += 1 if pow(r, (p - 1) // 2, p) == 1 else -1
    return total


def point_order(E: CurveFp, P: Point, m: int) -> int:
    """Exact order of P given a multiple m of it."""
    if mul(E, P, m) is not None:
        raise AssumedMultipleError(f"{m} does not annihilate {P}")
    order = m
    for q, e in factorint(m).items():
        for _ in range(e):
            if mul(E, P, order // q) is None:
                order //= q
            else:
                break
    return order


class CardinalityCertificate(NamedTuple):
    """#E = m, proven by a point whose order has a single multiple in the Hasse interval.

    ``P``/``order_P`` live on E, ``P_twist``/``order_twist`` on the quadratic
    twist (either may be absent).  For p <= 457 the count is exhaustive and
    both points are None.
    """

    m: int
    P: Point
    order_P: int
    P_twist: Point
    order_twist: int


def _unique_multiple_in_hasse(order: int, p: int) -> bool:
    # order > 4 sqrt(p)
    return order * order > 16 * p


def quick_order_filter(E: CurveFp, u: int, rng: random.Random) -> bool:
    """One random point: is (p+1-u)P or (p+1+u)P the identity?"""
    P = random_point(E, rng)
    Q = mul(E, P, E.p + 1)
    R = mul(E, P, u)
    if Q is None or R is None:
        return Q is None and R is None
    return Q[0] == R[0]


def certify_cardinality(E: CurveFp, u: int, seed: int = 0,
                        max_points: int = 48) -> Optional[CardinalityCertificate]:
    """Prove #E in {p+1-u, p+1+u} or return None."""
    p = E.p
    candidates = {p + 1 - u, p + 1 + u}
    if p <= MESTRE_THRESHOLD:
        m = count_points(E)
        if m not in candidates:
            return None
        return CardinalityCertificate(m, None, 0, None, 0)
    T = E.twist()
    rng = random.Random(f"{p}:{E.a}:{E.b}:{seed}")
    best = (None, 0)
    best_t = (None, 0)
    for _ in range(max_points):
        for on_twist in (False, True):
            curve = T if on_twist else E
            P = random_point(curve, rng)
            alive = set()
            for m in candidates:
                mm = 2 * p + 2 - m if on_twist else m
                if mul(curve, P, mm) is None:
                    alive.add(m)
            candidates = alive
            if not candidates:
                return None
            m0 = min(candidates)
            order = point_order(curve, P, 2 * p + 2 - m0 if on_twist else m0)
            if on_twist:
                if order > best_t[1]:
                    best_t = (P, order)
            elif order > best[1]:
                best = (P, order)
            if _unique_multiple_in_hasse(order, p):
                hits = [m for m in candidates
                        if (2 * p + 2 - m if on_twist else m) % order == 0]
                if len(hits) == 1:
                    return CardinalityCertificate(hits[0], best[0], best[1], best_t[0], best_t[1])
    return None


def rational_two_torsion_count(E: CurveFp) -> int:
    """Number of F_p-rational roots of X^3 + aX + b (0, 1 or 3)."""
    return len(gf_roots([E.b, E.a, 0, 1], E.p))


# ---------------------------------------------------------------------------
# isogeny volcanoes

def ell_neighbors(j: int, phi: ModularPolynomial, p: int) -> List[int]:
    """F_p-roots of Phi_l(X, j), repeated according to multiplicity."""
    f = specialize_mod_p(phi, j, p)
    out = []
    for r in gf_roots(f.coeffs, p):
        out.extend([r] * root_multiplicity(f.coeffs, r, p))
    return out


def _valuation(n: int, q: int) -> int:
    k = 0
    while n and n % q == 0:
        n //= q
        k += 1
    return k


def distance_to_floor(j: int, phi: ModularPolynomial, p: int, depth: int) -> int:
    """Length of the shortest descending path from j to the volcano floor.

    Three non-backtracking walks start along different edges; at least one
    of them descends all the way, so the first to reach a vertex with a
    single rational l-isogeny gives the distance.
    """
    nbrs = ell_neighbors(j, phi, p)
    if len(nbrs) <= 1:
        return 0
    paths = [(j, nb) for nb in nbrs[:3]]
    for dist in range(1, depth + 1):
        nxt = []
        for prev, cur in paths:
            cn = ell_neighbors(cur, phi, p)
            if len(cn) <= 1:
                return dist
            if prev in cn:
                cn.remove(prev)
            nxt.append((cur, cn[0]))
        paths = nxt
    raise VolcanoError(f"no floor within depth {depth} from j={j} (l={phi.level}, p={p})")


def conductor_valuation_at(j: int, ell: int, phi: ModularPolynomial, p: int, D: int, v: int) -> int:
    """l-adic valuation of the conductor of End(E) relative to the maximal order.

    ``v`` comes from the witness 4p = u^2 - v^2 D, so the volcano has depth
    v_l(v f).  Supersingular j cannot be detected here and must not be
    passed.
    """
    f = fundamental_part(D)[1]
    depth = _valuation(v * f, ell)
    if depth == 0:
        return 0
    if ell == 2 and v * f == 2 and D % 8 == 1:
        # full rational 2-torsion <=> End contains O_D
        return 0 if rational_two_torsion_count(curve_from_j(p, j)) == 3 else 1
    return depth - distance_to_floor(j, phi, p, depth)


def descend_to_order(j: int, p: int, D: int, v: int, cache: ModPolyCache) -> int:
    """Walk l-isogenies until End(E) has conductor exactly f for every l | v f."""
    f = fundamental_part(D)[1]
    for ell in factorint(v * f):
        depth = _valuation(v * f, ell)
        target = _valuation(f, ell)
        phi = cache.get(ell)
        level = conductor_valuation_at(j, ell, phi, p, D, v)
        while level != target:
            dist = depth - level
            want = dist + 1 if level > target else dist - 1
            for nb in dict.fromkeys(ell_neighbors(j, phi, p)):
                if distance_to_floor(nb, phi, p, depth) == want:
                    j = nb
                    break
            else:
                raise VolcanoError(f"no admissible {ell}-neighbour of j={j} over F_{p}")
            level = depth - want
    return j

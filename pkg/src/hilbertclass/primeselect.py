"""Prime classification for an imaginary quadratic order.

A prime p splits completely in the ring class field of O_D exactly when
4p = u^2 - v^2 D has an integer solution; such primes carry a
:class:`SplitPrimeWitness`.  Inert primes with (D|p) = -1 are only used
when p has a single supersingular j-invariant.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Tuple

#: Mestre's point-order argument needs p > 457.
MESTRE_THRESHOLD = 457
#: Primes whose supersingular j-invariant is unique (trivial inert residues).
TRIVIAL_INERT_PRIMES = (2, 3, 5, 7, 13)

SPLIT_ONLY = "split_only"
WITH_TRIVIAL_INERT = "with_trivial_inert"

_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)
# deterministic for n < 3.3e24
_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41)


def is_probable_prime(m: int) -> bool:
    """Miller-Rabin with a fixed base set; exact below 3.3 * 10^24."""
    if m < 2:
        return False
    for q in _SMALL_PRIMES:
        if m % q == 0:
            return m == q
    d, s = m - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        if a >= m:
            break
        x = pow(a, d, m)
        if x == 1 or x == m - 1:
            continue
        for _ in range(s - 1):
            x = x * x % m
            if x == m - 1:
                break
        else:
            return False
    return True


def next_prime(n: int) -> int:
    """Smallest prime strictly greater than n."""
    n = max(n, 1) + 1
    while not is_probable_prime(n):
        n += 1
    return n


def primes_from(start: int):
    """Yield primes >= start in ascending order."""
    p = start - 1
    while True:
        p = next_prime(p)
        yield p


def _pollard_brent(n: int, seed: int) -> int:
    rng = random.Random(seed)
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 64
        g = r = q = 1
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorint(n: int) -> Dict[int, int]:
    """Prime factorisation of |n| as {prime: exponent}."""
    n = abs(n)
    out: Dict[int, int] = {}
    if n < 2:
        return out
    for q in range(2, 1000):
        if q * q > n:
            break
        while n % q == 0:
            out[q] = out.get(q, 0) + 1
            n //= q
    stack = [n] if n > 1 else []
    while stack:
        m = stack.pop()
        if is_probable_prime(m):
            out[m] = out.get(m, 0) + 1
            continue
        r = math.isqrt(m)
        if r * r == m:
            stack += [r, r]
            continue
        d = _pollard_brent(m, m)
        stack += [d, m // d]
    return dict(sorted(out.items()))


def kronecker(D: int, m: int) -> int:
    """Kronecker symbol (D | m) for m >= 1."""
    if m < 1:
        raise ValueError("kronecker symbol needs m >= 1")
    result = 1
    while m % 2 == 0:
        m //= 2
        if D % 2 == 0:
            return 0
        if D % 8 in (3, 5):
            result = -result
    # Jacobi symbol (D | m), m odd
    a = D % m
    while a:
        while a % 2 == 0:
            a //= 2
            if m % 8 in (3, 5):
                result = -result
        a, m = m, a
        if a % 4 == 3 and m % 4 == 3:
            result = -result
        a %= m
    return result if m == 1 else 0


def smallest_nonresidue(p: int) -> int:
    """Smallest quadratic non-residue modulo an odd prime p."""
    z = 2
    while pow(z, (p - 1) // 2, p) != p - 1:
        z += 1
    return z


def sqrt_mod(a: int, p: int) -> int:
    """Square root of a modulo an odd prime p (Tonelli-Shanks).

    Returns the root in [0, p); raises ValueError for non-residues.  The
    non-residue used internally is the smallest one, so the result is
    deterministic.
    """
    a %= p
    if a == 0 or p == 2:
        return a
    if pow(a, (p - 1) // 2, p) != 1:
        raise ValueError(f"{a} is not a square modulo {p}")
    if p % 4 == 3:
        return pow(a, (p + 1) // 4, p)
    q, s = p - 1, 0
    while q % 2 == 0:
        q //= 2
        s += 1
    c = pow(smallest_nonresidue(p), q, p)
    x, t, r = pow(a, (q + 1) // 2, p), pow(a, q, p), s
    while t != 1:
        i, t2 = 0, t
        while t2 != 1:
            t2 = t2 * t2 % p
            i += 1
        b = pow(c, 1 << (r - i - 1), p)
        x, c = x * b % p, b * b % p
        t, r = t * c % p, i
    return x


def cornacchia4(D: int, p: int) -> Optional[Tuple[int, int]]:
    """Solve u^2 + |D| v^2 = 4p with u, v > 0, or return None.

    p must be an odd prime not dividing D.  Uses the modified Cornacchia
    algorithm: a square root of D modulo p with the parity of D, then a
    Euclidean descent on (2p, x0) stopped at 2 sqrt(p).
    """
    if p % 2 == 0:
        raise ValueError("cornacchia4 needs an odd prime")
    if D % p == 0:
        raise ValueError(f"{p} divides the discriminant {D}")
    if kronecker(D, p) != 1:
        return None
    x0 = sqrt_mod(D, p)
    if (x0 - D) % 2:
        x0 = p - x0
    a, b = 2 * p, x0
    bound = math.isqrt(4 * p)
    while b > bound:
        a, b = b, a % b
    rest = 4 * p - b * b
    if rest % -D:
        return None
    c = rest // -D
    v = math.isqrt(c)
    if v * v != c or v == 0:
        return None
    return b, v


@dataclass(frozen=True)
class SplitPrimeWitness:
    """A prime p together with u, v > 0 such that 4p = u^2 - v^2 D."""

    p: int
    u: int
    v: int
    D: int

    def __post_init__(self):
        if 4 * self.p != self.u ** 2 - self.v ** 2 * self.D:
            raise ValueError(f"4*{self.p} != {self.u}^2 - {self.v}^2*({self.D})")
        if self.u <= 0 or self.v <= 0:
            raise ValueError("witness needs u, v > 0")


def split_witness(D: int, p: int, v_max: Optional[int] = None) -> Optional[Tuple[int, int]]:
    """Return (u, v) with 4p = u^2 - v^2 D, u, v > 0, if one exists.

    A solution with v > v_max (when given) or with p | v is reported as
    absent.  Raises ValueError if p divides D.
    """
    sol = cornacchia4(D, p)
    if sol is None:
        return None
    u, v = sol
    if v_max is not None and v > v_max:
        return None
    if v % p == 0:
        return None
    return u, v


@dataclass
class PrimePlan:
    D: int
    target_bits: int
    split: List[SplitPrimeWitness] = field(default_factory=list)
    inert_trivial: List[int] = field(default_factory=list)

    @property
    def primes(self) -> List[int]:
        return sorted(self.inert_trivial + [w.p for w in self.split])

    @property
    def total_modulus_bits(self) -> float:
        return sum(math.log2(p) for p in self.primes)

    @property
    def modulus(self) -> int:
        return math.prod(self.primes)


def select_primes(D: int, n: int, policy: str = WITH_TRIVIAL_INERT,
                  v_max: int = 16, min_split: int = MESTRE_THRESHOLD) -> PrimePlan:
    """Ascending prime plan whose product is at least 2^n.

    Trivial inert primes (policy ``with_trivial_inert``) are taken first;
    split primes are then enumerated upward from ``min_split``.
    """
    if n < 1:
        raise ValueError("target precision must be positive")
    if policy not in (SPLIT_ONLY, WITH_TRIVIAL_INERT):
        raise ValueError(f"unknown policy {policy!r}")
    plan = PrimePlan(D=D, target_bits=n)
    # exact comparison of the product with 2^n, no float drift
    target = 1 << n
    N = 1
    if policy == WITH_TRIVIAL_INERT:
        for q in TRIVIAL_INERT_PRIMES:
            if N >= target:
                break
            if kronecker(D, q) == -1:
                plan.inert_trivial.append(q)
                N *= q
    for p in primes_from(max(3, min_split + 1)):
        if N >= target:
            break
        if D % p == 0:
            continue
        sol = split_witness(D, p, v_max)
        if sol is None:
            continue
        plan.split.append(SplitPrimeWitness(p, sol[0], sol[1], D))
        N *= p
    return plan

"""H_D mod p for primes splitting completely in the ring class field."""

from __future__ import annotations

import functools
import random
from typing import FrozenSet, List, NamedTuple, Optional

from .ecfp import certify_cardinality, curve_from_j, descend_to_order, quick_order_filter
from .gfpoly import PolyModP, gf_roots, product_from_roots
from .modpoly import ModPolyCache, specialize_mod_p
from .primeselect import MESTRE_THRESHOLD, SplitPrimeWitness, factorint
from .quadform import ClassGroupDecomposition, check_discriminant, decompose_class_group

TRIAL_BUDGET_FACTOR = 64


class SearchExhausted(RuntimeError):
    pass


class OrbitError(RuntimeError):
    """The isogeny walk left the crater or produced a repeated j-invariant."""


class ConjugateOrbit(NamedTuple):
    p: int
    j_values: List[int]
    schedule: ClassGroupDecomposition


@functools.lru_cache(maxsize=256)
def _schedule(D: int, forbidden: FrozenSet[int]) -> ClassGroupDecomposition:
    return decompose_class_group(D, forbidden)


def schedule_for(D: int, witness: SplitPrimeWitness) -> ClassGroupDecomposition:
    """Class group generators with norms prime to p*v."""
    forbidden = frozenset([witness.p, *factorint(witness.v)])
    return _schedule(D, forbidden)


def find_cm_j(D: int, witness: SplitPrimeWitness, seed: int = 0,
              cache: Optional[ModPolyCache] = None, budget: Optional[int] = None,
              allow_small: bool = False) -> int:
    """A j-invariant over F_p whose curve has endomorphism ring O_D.

    Random j are filtered by a one-point order test, then their cardinality
    is certified and the j-invariant is moved through the l-volcanoes for
    l | v f until the conductor is right.  Primes at or below 457 fall
    outside Mestre's bound and need ``allow_small`` (cardinality is then
    counted exhaustively).
    """
    check_discriminant(D)
    p, u, v = witness.p, witness.u, witness.v
    if D >= -4:
        raise ValueError("D = -3, -4 have fixed class polynomials; no search needed")
    if p <= MESTRE_THRESHOLD and not allow_small:
        raise ValueError(f"p = {p} is below the Mestre threshold {MESTRE_THRESHOLD}")
    if cache is None:
        cache = default_cache()
    from .quadform import class_number

    if budget is None:
        budget = max(TRIAL_BUDGET_FACTOR * p // class_number(D), 1000)
    rng = random.Random(f"cmj:{D}:{p}:{seed}")
    for _ in range(budget):
        j = rng.randrange(p)
        if j == 0 or j == 1728 % p:
            continue
        E = curve_from_j(p, j)
        if not quick_order_filter(E, u, rng):
            continue
        if certify_cardinality(E, u, seed) is None:
            continue
        return descend_to_order(j, p, D, v, cache)
    raise SearchExhausted(f"no curve with End = O_{D} found over F_{p} in {budget} trials")


def _chain(start: int, ell: int, steps: int, phi, p: int, flip: bool) -> List[int]:
    chain = [start]
    prev = None
    cur = start
    for _ in range(steps):
        roots = gf_roots(specialize_mod_p(phi, cur, p).coeffs, p)
        if not 1 <= len(roots) <= 2:
            raise OrbitError(f"{len(roots)} roots of Phi_{ell}(X, {cur}) over F_{p}: fell off the crater")
        if prev is None:
            nxt = roots[-1] if flip else roots[0]
        else:
            rest = [r for r in roots if r != prev]
            nxt = rest[0] if rest else roots[0]
        prev, cur = cur, nxt
        chain.append(cur)
    return chain


def walk_conjugates(j0: int, schedule: ClassGroupDecomposition, cache: ModPolyCache, p: int,
                    flip: bool = False) -> ConjugateOrbit:
    """All h(D) conjugates of j0 by l-isogeny chains.

    Generators are walked last-first: the chain for the last generator
    starts at j0, every element then gets a chain for the previous one, and
    the first generator (whose relative order is its full order) closes
    full cycles.  Each chain meets every coset of the subgroup generated by
    the earlier generators exactly once, whichever direction it takes, so
    the orbit does not depend on how ties at chain starts are broken.
    ``flip`` picks the larger root at chain starts instead of the smaller.
    """
    values = [j0 % p]
    for gen in reversed(schedule.generators):
        if gen.order == 1:
            continue
        phi = cache.get(gen.ell)
        grown = []
        for x in values:
            grown.extend(_chain(x, gen.ell, gen.order - 1, phi, p, flip))
        values = grown
    if len(set(values)) != len(values) or len(values) != schedule.total_order:
        raise OrbitError(f"orbit of size {len(set(values))} instead of {schedule.total_order} over F_{p}")
    return ConjugateOrbit(p, values, schedule)


def hilbert_mod_p_split(D: int, witness: SplitPrimeWitness, seed: int = 0,
                        cache: Optional[ModPolyCache] = None, allow_small: bool = False,
                        flip: bool = False) -> PolyModP:
    """H_D mod p as the product of X - j over one Cl(D)-orbit."""
    check_discriminant(D)
    p = witness.p
    if D == -3:
        return PolyModP([0, 1], p)
    if D == -4:
        return PolyModP([-1728, 1], p)
    if cache is None:
        cache = default_cache()
    j0 = find_cm_j(D, witness, seed, cache, allow_small=allow_small)
    orbit = walk_conjugates(j0, schedule_for(D, witness), cache, p, flip)
    return product_from_roots(orbit.j_values, p)


_DEFAULT_CACHE: Optional[ModPolyCache] = None


def default_cache() -> ModPolyCache:
    global _DEFAULT_CACHE
    if _DEFAULT_CACHE is None:
        _DEFAULT_CACHE = ModPolyCache()
    return _DEFAULT_CACHE

"""Multi-prime computation of H_D: residues mod many primes, then CRT."""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Dict, List, Optional, Sequence, Tuple

from .analytic import hilbert_analytic
from .classpoly_split import default_cache, hilbert_mod_p_split, schedule_for
from .gfpoly import PolyModP
from .inert_trivial import SUPERSINGULAR_J, hilbert_mod_q_trivial
from .intpoly import IntPoly
from .modpoly import ModPolyCache
from .primeselect import (
    WITH_TRIVIAL_INERT,
    PrimePlan,
    SplitPrimeWitness,
    factorint,
    is_probable_prime,
    kronecker,
    select_primes,
    split_witness,
)
from .quadform import check_discriminant, class_number, fundamental_part, precision_bound

log = logging.getLogger(__name__)

FIXED_POLYS = {-3: IntPoly([0, 1]), -4: IntPoly([-1728, 1])}


class ResidueMismatch(RuntimeError):
    """Residues disagree in degree or shape; some per-prime step is wrong."""


def crt_combine(residues: Sequence[Tuple[int, PolyModP]]) -> IntPoly:
    """Coefficient-wise CRT with representatives in (-N/2, N/2)."""
    if not residues:
        raise ValueError("no residues to combine")
    moduli = [p for p, _ in residues]
    for i, a in enumerate(moduli):
        for b in moduli[i + 1:]:
            if math.gcd(a, b) != 1:
                raise ValueError(f"moduli {a} and {b} are not coprime")
    degrees = {r.degree for _, r in residues}
    if len(degrees) != 1:
        raise ResidueMismatch(f"residues have differing degrees {sorted(degrees)}")
    deg = degrees.pop()
    N = math.prod(moduli)
    idempotents = []
    for p in moduli:
        M = N // p
        idempotents.append(M * pow(M % p, -1, p))
    half = N // 2
    coeffs = []
    for k in range(deg + 1):
        c = sum(e * (r.coeffs[k] if k < len(r.coeffs) else 0)
                for e, (_, r) in zip(idempotents, residues)) % N
        if c > half:
            c -= N
        coeffs.append(c)
    return IntPoly(coeffs)


# ---------------------------------------------------------------------------
# checkpoint file: one "RES p : c0 c1 ... ch" line per finished prime

def read_checkpoint(path: os.PathLike) -> Dict[int, PolyModP]:
    out: Dict[int, PolyModP] = {}
    path = Path(path)
    if not path.exists():
        return out
    for line in path.read_text().splitlines():
        line = line.strip()
        if not line:
            continue
        head, _, body = line.partition(":")
        tag, p = head.split()
        if tag != "RES":
            raise ValueError(f"bad checkpoint line: {line!r}")
        p = int(p)
        out[p] = PolyModP([int(c) for c in body.split()], p)
    return out


def append_checkpoint(path: os.PathLike, p: int, residue: PolyModP) -> None:
    coeffs = list(residue.coeffs)
    with open(path, "a") as fh:
        fh.write(f"RES {p} : {' '.join(map(str, coeffs))}\n")


@dataclass
class Options:
    seed: int = 0
    workers: int = 1
    policy: str = WITH_TRIVIAL_INERT
    v_max: int = 16
    cache_dir: Optional[str] = None
    checkpoint: Optional[str] = None


def _residue_task(args):
    D, item, seed, cache = args
    if isinstance(item, SplitPrimeWitness):
        return item.p, hilbert_mod_p_split(D, item, seed, cache)
    return item, hilbert_mod_q_trivial(D, item)


def _prefetch_modpolys(D: int, plan: PrimePlan, cache: ModPolyCache) -> None:
    # builds every Phi_l once here rather than once per worker
    f = fundamental_part(D)[1]
    levels = set(factorint(f))
    for w in plan.split:
        levels.update(factorint(w.v))
        levels.update(g.ell for g in schedule_for(D, w).generators)
    for ell in sorted(levels):
        cache.get(ell)


def compute_residues(D: int, plan: PrimePlan, options: Options,
                     cache: Optional[ModPolyCache] = None) -> List[Tuple[int, PolyModP]]:
    if cache is None:
        cache = ModPolyCache(options.cache_dir) if options.cache_dir else default_cache()
    done: Dict[int, PolyModP] = {}
    if options.checkpoint:
        done = read_checkpoint(options.checkpoint)
    todo = [q for q in plan.inert_trivial if q not in done]
    todo += [w for w in plan.split if w.p not in done]
    if any(isinstance(t, SplitPrimeWitness) for t in todo):
        _prefetch_modpolys(D, plan, cache)
    tasks = [(D, t, options.seed, cache) for t in todo]
    if options.workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=options.workers) as pool:
            results = pool.map(_residue_task, tasks, chunksize=max(1, len(tasks) // (4 * options.workers)))
            for p, res in results:
                done[p] = res
                if options.checkpoint:
                    append_checkpoint(options.checkpoint, p, res)
    else:
        for task in tasks:
            p, res = _residue_task(task)
            done[p] = res
            if options.checkpoint:
                append_checkpoint(options.checkpoint, p, res)
    return [(p, done[p]) for p in plan.primes]


def compute_hilbert(D: int, options: Optional[Options] = None,
                    cache: Optional[ModPolyCache] = None) -> IntPoly:
    """H_D in Z[X] by the Chinese remainder method."""
    check_discriminant(D)
    if D in FIXED_POLYS:
        return FIXED_POLYS[D]
    options = options or Options()
    n = precision_bound(D)
    plan = select_primes(D, n, options.policy, options.v_max)
    log.info("D=%d: n=%d bits, %d split + %d inert primes", D, n, len(plan.split), len(plan.inert_trivial))
    residues = compute_residues(D, plan, options, cache)
    h = class_number(D)
    for p, r in residues:
        if r.degree != h or not r.is_monic():
            raise ResidueMismatch(f"residue mod {p} has degree {r.degree}, expected monic of degree {h}")
    H = crt_combine(residues)
    if H.height_bits() >= n:
        raise ResidueMismatch(f"coefficient of {H.height_bits()} bits exceeds the bound of {n}")
    return H


def hilbert_mod_p(D: int, p: int, options: Optional[Options] = None,
                  cache: Optional[ModPolyCache] = None) -> PolyModP:
    """H_D mod a single prime, by whichever route applies to p."""
    check_discriminant(D)
    if not is_probable_prime(p):
        raise ValueError(f"{p} is not prime")
    options = options or Options()
    if D in FIXED_POLYS:
        return FIXED_POLYS[D].mod(p)
    if p in SUPERSINGULAR_J and kronecker(D, p) == -1:
        return hilbert_mod_q_trivial(D, p)
    if p > 3 and D % p:
        sol = split_witness(D, p)
        if sol is not None:
            w = SplitPrimeWitness(p, sol[0], sol[1], D)
            return hilbert_mod_p_split(D, w, options.seed, cache, allow_small=True)
    # inert or ramified without a shortcut: reduce the integer polynomial
    return compute_hilbert(D, options, cache).mod(p)


@dataclass
class OracleReport:
    D: int
    match: bool
    mismatches: List[Tuple[int, int, int]] = field(default_factory=list)

    def __str__(self):
        if self.match:
            return f"H_{self.D}: CRT and analytic results agree"
        lines = [f"H_{self.D}: {len(self.mismatches)} coefficient(s) differ"]
        for k, got, want in self.mismatches:
            lines.append(f"  X^{k}: got {got}, analytic {want}")
        return "\n".join(lines)


def verify_against_oracle(D: int, H: IntPoly) -> OracleReport:
    ref = hilbert_analytic(D)
    n = max(len(ref.coeffs), len(H.coeffs))
    mism = []
    for k in range(n):
        a = H.coeffs[k] if k < len(H.coeffs) else 0
        b = ref.coeffs[k] if k < len(ref.coeffs) else 0
        if a != b:
            mism.append((k, a, b))
    return OracleReport(D, not mism, mism)

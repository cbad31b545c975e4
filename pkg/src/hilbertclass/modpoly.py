"""Classical modular polynomials Phi_l(X, Y) and their on-disk cache."""

from __future__ import annotations

import math
import os
import tempfile
import threading
from pathlib import Path
from typing import Dict, List, Optional, Tuple

import mpmath
from mpmath import mpc, mpf

from .analytic import j_eval
from .gfpoly import PolyModP, _strip
from .primeselect import is_probable_prime

MAX_LEVEL = 97
START_BITS = 128
MAX_BITS = 1 << 20
CACHE_ENV = "MODPOLY_CACHE"
INTEGRALITY_GAP = mpf(2) ** -32


class ModPolyIntegrityError(ValueError):
    """A loaded or built polynomial violates one of the Phi_l invariants."""


class ModPolyNotFound(LookupError):
    pass


class ModPolyConvergenceError(ArithmeticError):
    """Rounded coefficients did not stabilise within the precision cap."""


class ModularPolynomial:
    """Phi_l with integer coefficients keyed by (i, j) for X^i Y^j."""

    def __init__(self, level: int, coeffs: Dict[Tuple[int, int], int]):
        self.level = level
        self.coeffs = {k: v for k, v in coeffs.items() if v}
        self._reduced: Dict[int, List[List[int]]] = {}

    def coeff(self, i: int, j: int) -> int:
        return self.coeffs.get((i, j), 0)

    def __eq__(self, other):
        if isinstance(other, ModularPolynomial):
            return self.level == other.level and self.coeffs == other.coeffs
        return NotImplemented

    def check_invariants(self) -> None:
        """Raise ModPolyIntegrityError naming the first failed invariant."""
        l = self.level
        for (i, j), c in self.coeffs.items():
            if i > l + 1 or j > l + 1 or i < 0 or j < 0:
                raise ModPolyIntegrityError(f"Phi_{l}: degree bound violated at X^{i}Y^{j}")
            if self.coeff(j, i) != c:
                raise ModPolyIntegrityError(f"Phi_{l}: symmetry violated at X^{i}Y^{j}")
        if self.coeff(l + 1, 0) != 1:
            raise ModPolyIntegrityError(f"Phi_{l}: leading coefficient of X^{l + 1} is not 1")
        if self.coeff(l, l) != -1:
            raise ModPolyIntegrityError(f"Phi_{l}: coefficient of X^{l}Y^{l} is not -1")
        # (X^l - Y)(X - Y^l) = X^{l+1} - X^l Y^l - XY + Y^{l+1}
        kron = {(l + 1, 0): 1, (l, l): -1, (1, 1): -1, (0, l + 1): 1}
        keys = set(self.coeffs) | set(kron)
        for k in keys:
            if (self.coeffs.get(k, 0) - kron.get(k, 0)) % l:
                raise ModPolyIntegrityError(
                    f"Phi_{l}: Kronecker congruence fails at X^{k[0]}Y^{k[1]}")

    def reduced_table(self, p: int) -> List[List[int]]:
        """rows[i] = coefficients of X^i as a polynomial in Y, reduced mod p."""
        rows = self._reduced.get(p)
        if rows is None:
            n = self.level + 2
            rows = [[0] * n for _ in range(n)]
            for (i, j), c in self.coeffs.items():
                rows[i][j] = c % p
            self._reduced[p] = rows
        return rows

    def __repr__(self):
        return f"ModularPolynomial(level={self.level}, terms={len(self.coeffs)})"


def specialize_mod_p(phi: ModularPolynomial, j0: int, p: int) -> PolyModP:
    """Phi_l(X, j0) over F_p."""
    rows = phi.reduced_table(p)
    j0 %= p
    out = []
    for row in rows:
        acc = 0
        for c in reversed(row):
            acc = (acc * j0 + c) % p
        out.append(acc)
    return PolyModP._raw(_strip(out), p)


def _interpolate(ys, values):
    """Coefficients (ascending) of the polynomial through (ys[k], values[k]).

    Newton divided differences, then expansion into the monomial basis.
    """
    n = len(ys)
    dd = list(values)
    for k in range(1, n):
        for i in range(n - 1, k - 1, -1):
            dd[i] = (dd[i] - dd[i - 1]) / (ys[i] - ys[i - k])
    coeffs = [mpf(0)] * n
    coeffs[0] = dd[n - 1]
    deg = 0
    for k in range(n - 2, -1, -1):
        # coeffs <- coeffs * (Y - ys[k]) + dd[k]
        for i in range(deg + 1, 0, -1):
            coeffs[i] = coeffs[i - 1] - ys[k] * coeffs[i]
        coeffs[0] = dd[k] - ys[k] * coeffs[0]
        deg += 1
    return coeffs


def _attempt(level: int, bits: int) -> Optional[Tuple[Dict[Tuple[int, int], int], mpf]]:
    n = level + 2
    with mpmath.workprec(bits):
        ts = [1 + mpf(k) / n for k in range(n)]
        ys = []
        rows = []  # rows[s][i] = coefficient of X^i at sample s
        for t in ts:
            tau = mpc(0, t)
            y = j_eval(tau, bits).real
            # j((tau + l - k)/l) is the conjugate of j((tau + k)/l) on the imaginary axis
            half = [j_eval((tau + k) / level, bits) for k in range(level // 2 + 1)]
            roots = half + [mpmath.conj(half[level - k]) for k in range(level // 2 + 1, level)]
            roots.append(j_eval(level * tau, bits))
            poly = [mpc(1)]
            for r in roots:
                nxt = [mpc(0)] * (len(poly) + 1)
                for i, c in enumerate(poly):
                    nxt[i + 1] += c
                    nxt[i] -= r * c
                poly = nxt
            ys.append(y)
            rows.append([c.real for c in poly])
        coeffs: Dict[Tuple[int, int], int] = {}
        worst = mpf(0)
        for i in range(n):
            sol = _interpolate(ys, [rows[s][i] for s in range(n)])
            for j in range(n):
                c = sol[j]
                r = int(mpmath.nint(c))
                err = abs(c - r)
                if err > mpf("0.25"):
                    return None
                worst = max(worst, err)
                if r:
                    coeffs[(i, j)] = r
    return coeffs, worst


def height_bound_bits(level: int) -> int:
    """Upper bound for the bit size of the coefficients of Phi_l.

    Uses the known estimate log |c| <= 6 l log l + 16 l + 14 sqrt(l) log l.
    """
    L = math.log(level)
    return math.ceil((6 * level * L + 16 * level + 14 * math.sqrt(level) * L) / math.log(2))


def build_modular_polynomial(level: int, max_bits: int = MAX_BITS) -> ModularPolynomial:
    """Phi_l by complex evaluation at tau = i t and interpolation in Y = j(tau).

    Precision starts at the coefficient height bound plus 64 bits (at
    least 128) and doubles until the rounded integers
    are trustworthy (every value within 2^-32 of its rounding, or two
    successive rounds agreeing) and all invariants hold.
    """
    if not is_probable_prime(level):
        raise ValueError(f"level {level} is not prime")
    if level > MAX_LEVEL:
        raise ValueError(f"level {level} exceeds the configured maximum {MAX_LEVEL}")
    bits = max(START_BITS, height_bound_bits(level) + 64)
    previous = None
    while bits <= max_bits:
        got = _attempt(level, bits)
        coeffs = got[0] if got else None
        if got and (got[1] < INTEGRALITY_GAP or coeffs == previous):
            phi = ModularPolynomial(level, coeffs)
            try:
                phi.check_invariants()
            except ModPolyIntegrityError:
                pass
            else:
                return phi
        previous = coeffs
        bits *= 2
    raise ModPolyConvergenceError(f"Phi_{level} did not stabilise below {max_bits} bits")


def format_modpoly(phi: ModularPolynomial) -> str:
    """Cache text: header line, then 'i j c' for i >= j sorted by (i, j)."""
    lines = [f"MODPOLY {phi.level}"]
    for (i, j) in sorted(phi.coeffs):
        if i >= j:
            lines.append(f"{i} {j} {phi.coeffs[(i, j)]}")
    return "\n".join(lines) + "\n"


def parse_modpoly(text: str) -> ModularPolynomial:
    lines = [ln for ln in text.splitlines() if ln.strip()]
    if not lines or not lines[0].startswith("MODPOLY "):
        raise ModPolyIntegrityError("missing MODPOLY header")
    try:
        level = int(lines[0].split()[1])
        coeffs = {}
        for ln in lines[1:]:
            i, j, c = ln.split()
            i, j, c = int(i), int(j), int(c)
            if i < j:
                raise ModPolyIntegrityError(f"entry {i} {j} stored below the diagonal")
            coeffs[(i, j)] = c
            coeffs[(j, i)] = c
    except (ValueError, IndexError) as exc:
        if isinstance(exc, ModPolyIntegrityError):
            raise
        raise ModPolyIntegrityError(f"malformed cache line: {exc}") from exc
    phi = ModularPolynomial(level, coeffs)
    phi.check_invariants()
    return phi


class ModPolyCache:
    """In-memory cache of Phi_l backed by an optional directory.

    The directory defaults to $MODPOLY_CACHE; with neither, polynomials
    are built on demand and kept in memory only.
    """

    def __init__(self, directory: Optional[os.PathLike] = None):
        if directory is None:
            directory = os.environ.get(CACHE_ENV) or None
        self.directory = Path(directory) if directory else None
        self._mem: Dict[int, ModularPolynomial] = {}
        self._lock = threading.Lock()

    def path(self, level: int) -> Path:
        if self.directory is None:
            raise ModPolyNotFound("no cache directory configured")
        return self.directory / f"phi_{level}.txt"

    def store(self, phi: ModularPolynomial) -> Path:
        target = self.path(phi.level)
        target.parent.mkdir(parents=True, exist_ok=True)
        fd, tmp = tempfile.mkstemp(dir=target.parent, prefix=f".phi_{phi.level}.")
        try:
            with os.fdopen(fd, "w") as fh:
                fh.write(format_modpoly(phi))
            os.replace(tmp, target)
        except BaseException:
            if os.path.exists(tmp):
                os.unlink(tmp)
            raise
        return target

    def load(self, level: int) -> ModularPolynomial:
        try:
            path = self.path(level)
            text = path.read_text()
        except FileNotFoundError:
            raise ModPolyNotFound(f"Phi_{level} not in cache {self.directory}") from None
        phi = parse_modpoly(text)
        if phi.level != level:
            raise ModPolyIntegrityError(f"{path} holds Phi_{phi.level}, expected Phi_{level}")
        return phi

    def get(self, level: int) -> ModularPolynomial:
        with self._lock:
            phi = self._mem.get(level)
            if phi is not None:
                return phi
            phi = None
            if self.directory is not None:
                try:
                    phi = self.load(level)
                except ModPolyNotFound:
                    phi = None
            if phi is None:
                phi = build_modular_polynomial(level)
                if self.directory is not None:
                    self.store(phi)
            self._mem[level] = phi
            return phi

    def __getstate__(self):
        # picklable for process pools; memory contents travel along
        return {"directory": self.directory, "mem": dict(self._mem)}

    def __setstate__(self, state):
        self.directory = state["directory"]
        self._mem = state["mem"]
        self._lock = threading.Lock()

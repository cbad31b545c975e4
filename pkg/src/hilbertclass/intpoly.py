"""Integer polynomials (the final H_D output)."""

from __future__ import annotations

import json
from typing import Iterable, Sequence, Tuple

from .gfpoly import PolyModP, format_poly


class IntPoly:
    """Polynomial in Z[X], coefficients stored in ascending degree."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[int]):
        c = [int(x) for x in coeffs]
        while c and c[-1] == 0:
            c.pop()
        self.coeffs: Tuple[int, ...] = tuple(c)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == 1

    def height_bits(self) -> int:
        """Bit length of the largest absolute coefficient."""
        return max((abs(c).bit_length() for c in self.coeffs), default=0)

    def max_abs_coeff(self) -> int:
        return max((abs(c) for c in self.coeffs), default=0)

    def mod(self, p: int) -> PolyModP:
        return PolyModP(self.coeffs, p)

    def __eq__(self, other):
        if isinstance(other, IntPoly):
            return self.coeffs == other.coeffs
        return NotImplemented

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"IntPoly({list(self.coeffs)})"

    def __str__(self):
        return format_poly(self.coeffs)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def to_json(self, D: int) -> str:
        return json.dumps({"D": D, "h": self.degree, "coeffs": [str(c) for c in self.coeffs]})

    @classmethod
    def from_json(cls, text: str) -> Tuple[int, "IntPoly"]:
        data = json.loads(text)
        poly = cls(int(c) for c in data["coeffs"])
        if poly.degree != data["h"]:
            raise ValueError(f"degree {poly.degree} does not match h={data['h']}")
        return int(data["D"]), poly


def mul_int_polys(f: Sequence[int], g: Sequence[int]) -> list:
    if not f or not g:
        return []
    h = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        for j, b in enumerate(g):
            h[i + j] += a * b
    return h

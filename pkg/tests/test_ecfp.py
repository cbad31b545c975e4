import math
import random

import pytest

from hilbertclass.ecfp import (
    AssumedMultipleError, CurveFp, add, certify_cardinality, conductor_valuation_at,
    count_points, curve_from_j, descend_to_order, mul, neg, point_order, random_point,
    rational_two_torsion_count,
)
from hilbertclass.gfpoly import roots_in_fp
from hilbertclass.primeselect import factorint, is_probable_prime
from hilbertclass.quadform import fundamental_part

from conftest import analytic

E107 = CurveFp(107, 1, 35)


def naive_count(E):
    p = E.p
    squares = {}
    for y in range(p):
        squares[y * y % p] = squares.get(y * y % p, 0) + 1
    return 1 + sum(squares.get(E.rhs(x), 0) for x in range(p))


def test_curve_from_j_special():
    assert curve_from_j(107, 1728) == CurveFp(107, 1, 0)
    assert curve_from_j(107, 0) == CurveFp(107, 0, 1)
    with pytest.raises(ValueError):
        curve_from_j(3, 1)


@pytest.mark.parametrize("p", [5, 7, 107, 461, 9973])
def test_curve_from_j_round_trip(p):
    for j in range(min(p, 300)):
        for s in (0, 1):
            assert curve_from_j(p, j, s).j_invariant() == j


def test_golden_curve():
    # j-invariant 4, #E = 96, #twist = 120, one rational 2-torsion point
    assert E107.j_invariant() == 4
    assert count_points(E107) == naive_count(E107) == 96
    assert count_points(E107.twist()) == 120
    assert rational_two_torsion_count(E107) == 1
    assert point_order(E107, (18, 0), 96) == 2
    assert point_order(E107, None, 96) == 1


def test_point_order_vs_naive():
    rng = random.Random(3)
    for _ in range(30):
        P = random_point(E107, rng)
        k, Q = 1, P
        while Q is not None:
            Q = add(E107, Q, P)
            k += 1
        assert point_order(E107, P, 96) == k
        assert 96 % k == 0


def test_point_order_wrong_multiple():
    with pytest.raises(AssumedMultipleError):
        P = next(P for P in (random_point(E107, random.Random(s)) for s in range(50))
                 if point_order(E107, P, 96) > 3)
        point_order(E107, P, 97)


@pytest.mark.parametrize("p", [107, 461, 7919])
def test_group_law(p):
    rng = random.Random(p)
    E = CurveFp(p, rng.randrange(p), rng.randrange(1, p))
    for _ in range(40):
        P, Q, R = (random_point(E, rng) for _ in range(3))
        assert E.is_on_curve(add(E, P, Q))
        assert add(E, P, Q) == add(E, Q, P)
        assert add(E, add(E, P, Q), R) == add(E, P, add(E, Q, R))
        assert add(E, P, neg(E, P)) is None
        assert add(E, P, None) == P
    P = random_point(E, rng)
    acc = None
    for n in range(65):
        assert mul(E, P, n) == acc
        acc = add(E, acc, P)
    assert mul(E, P, -5) == neg(E, mul(E, P, 5))


def test_twist_cardinalities():
    rng = random.Random(9)
    for p in (107, 461, 1009):
        for _ in range(10):
            E = CurveFp(p, rng.randrange(p), rng.randrange(p))
            if E.discriminant == 0:
                continue
            assert count_points(E) + count_points(E.twist()) == 2 * p + 2
            assert count_points(E) == naive_count(E)


def test_two_torsion_count():
    rng = random.Random(4)
    for p in (107, 461):
        for _ in range(20):
            E = CurveFp(p, rng.randrange(p), rng.randrange(p))
            if E.discriminant == 0:
                continue
            brute = sum(1 for x in range(p) if E.rhs(x) == 0)
            assert rational_two_torsion_count(E) == brute


def test_certificates_vs_exhaustive_counts():
    rng = random.Random(11)
    primes = [p for p in range(461, 10 ** 4) if is_probable_prime(p)]
    checked = 0
    for p in rng.sample(primes, 60):
        for _ in range(3):
            E = CurveFp(p, rng.randrange(p), rng.randrange(p))
            if E.discriminant == 0:
                continue
            m = count_points(E)
            u = abs(p + 1 - m)
            cert = certify_cardinality(E, u, seed=rng.randrange(100))
            if cert is None:
                continue
            checked += 1
            assert cert.m == m
            assert max(cert.order_P, cert.order_twist) ** 2 > 16 * p
            if cert.P is not None:
                assert mul(E, cert.P, m) is None and m % cert.order_P == 0
            if cert.P_twist is not None:
                T = E.twist()
                assert mul(T, cert.P_twist, 2 * p + 2 - m) is None
            # a wrong trace can never be certified
            assert certify_cardinality(E, u + 2, seed=1) is None
    assert checked >= 150


def test_certificate_small_prime_is_exhaustive():
    cert = certify_cardinality(E107, 12)
    assert cert.m == 96
    assert certify_cardinality(E107, 14) is None


def volcano_cases(p, max_ell=7):
    """(t, D0, v) with t^2 - 4p = v^2 D0 and some l <= max_ell dividing v."""
    out = []
    for t in range(1, math.isqrt(4 * p) + 1):
        if t * t == 4 * p:
            continue
        D0, v = fundamental_part(t * t - 4 * p)
        if D0 in (-3, -4) or v == 1 or min(factorint(v)) > max_ell:
            continue
        out.append((t, D0, v))
    return out


@pytest.mark.parametrize("p", [101, 157, 199, 229, 283])
def test_volcano_levels_brute_force(p, phi_cache):
    """Level of every ordinary j against membership in H_{D0 k^2} mod p."""
    cases = volcano_cases(p)
    assert cases
    for t, D0, v in cases:
        order_of = {}
        for k in (d for d in range(1, v + 1) if v % d == 0):
            for j in roots_in_fp(analytic(D0 * k * k).mod(p)):
                order_of[j] = k
        order_of.pop(0, None)
        order_of.pop(1728 % p, None)
        for ell in factorint(v):
            if ell > 7:
                continue
            phi = phi_cache.get(ell)
            for j, k in order_of.items():
                got = conductor_valuation_at(j, ell, phi, p, D0, v)
                want = 0
                while k % ell == 0:
                    k //= ell
                    want += 1
                assert got == want, (p, t, j, ell)


@pytest.mark.parametrize("p", [101, 199, 283])
def test_descend_reaches_order(p, phi_cache):
    for t, D0, v in volcano_cases(p, max_ell=5):
        if any(ell > 5 for ell in factorint(v)):
            continue
        everything = set()
        for k in (d for d in range(1, v + 1) if v % d == 0):
            everything.update(roots_in_fp(analytic(D0 * k * k).mod(p)))
        everything -= {0, 1728 % p}
        for k in (d for d in range(1, v + 1) if v % d == 0):
            D = D0 * k * k
            targets = set(roots_in_fp(analytic(D).mod(p)))
            for j in sorted(everything)[:6]:
                assert descend_to_order(j, p, D, v // k, phi_cache) in targets

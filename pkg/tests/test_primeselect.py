import math

import pytest
from hypothesis import given, settings, strategies as st

from hilbertclass.primeselect import (
    MESTRE_THRESHOLD, SPLIT_ONLY, WITH_TRIVIAL_INERT, SplitPrimeWitness, cornacchia4,
    factorint, is_probable_prime, kronecker, next_prime, select_primes, smallest_nonresidue,
    split_witness, sqrt_mod,
)
from hilbertclass.quadform import precision_bound


def sieve(n):
    flags = bytearray([1]) * (n + 1)
    flags[0:2] = b"\0\0"
    for i in range(2, math.isqrt(n) + 1):
        if flags[i]:
            flags[i * i::i] = bytearray(len(flags[i * i::i]))
    return [i for i, f in enumerate(flags) if f]


PRIMES = sieve(20000)
ODD_PRIMES = PRIMES[1:]


def test_miller_rabin_vs_sieve():
    ps = set(PRIMES)
    assert [n for n in range(20001) if is_probable_prime(n)] == PRIMES
    assert all(is_probable_prime(p) == (p in ps) for p in range(20001))
    # strong pseudoprimes to several small bases
    for n in (2047, 1373653, 25326001, 3215031751, 2152302898747, 3474749660383, 341550071728321):
        assert not is_probable_prime(n)
    assert is_probable_prime(2 ** 61 - 1) and is_probable_prime(954001)


def test_next_prime():
    assert next_prime(457) == 461
    assert next_prime(1) == 2
    assert next_prime(27240) == 27241


@settings(max_examples=300, deadline=None)
@given(st.integers(1, 10 ** 15))
def test_factorint(n):
    fac = factorint(n)
    assert math.prod(p ** e for p, e in fac.items()) == n
    assert all(is_probable_prime(p) for p in fac)


@settings(max_examples=300, deadline=None)
@given(st.integers(-10 ** 6, 10 ** 6), st.integers(1, 5000), st.integers(1, 5000))
def test_kronecker_multiplicative(D, m, n):
    assert kronecker(D, m * n) == kronecker(D, m) * kronecker(D, n)


@settings(max_examples=300, deadline=None)
@given(st.integers(-10 ** 9, 10 ** 9), st.sampled_from(ODD_PRIMES))
def test_kronecker_euler(D, p):
    e = pow(D, (p - 1) // 2, p)
    assert kronecker(D, p) == (e if e <= 1 else -1)


def test_kronecker_at_two():
    for D in range(-200, 0):
        if D % 4 in (0, 1):
            want = 0 if D % 2 == 0 else (1 if D % 8 in (1, 7) else -1)
            assert kronecker(D, 2) == want


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10 ** 9), st.sampled_from(ODD_PRIMES))
def test_sqrt_mod(a, p):
    if kronecker(a, p) == -1:
        with pytest.raises(ValueError):
            sqrt_mod(a, p)
    else:
        x = sqrt_mod(a, p)
        assert 0 <= x < p and (x * x - a) % p == 0


def test_smallest_nonresidue():
    for p in ODD_PRIMES[:300]:
        z = smallest_nonresidue(p)
        assert kronecker(z, p) == -1
        assert all(kronecker(k, p) == 1 for k in range(1, z))


@pytest.mark.parametrize("D", [-3, -4, -7, -8, -15, -23, -56, -71, -84, -284, -108708])
def test_cornacchia_vs_brute_force(D):
    for p in ODD_PRIMES[:400]:
        if D % p == 0:
            with pytest.raises(ValueError):
                cornacchia4(D, p)
            continue
        brute = None
        for v in range(1, math.isqrt(4 * p // -D) + 1):
            u2 = 4 * p + v * v * D
            u = math.isqrt(u2)
            if u > 0 and u * u == u2:
                brute = (u, v)
                break
        got = cornacchia4(D, p)
        assert (got is None) == (brute is None), p
        if got:
            u, v = got
            assert u > 0 and v > 0 and u * u - v * v * D == 4 * p
            assert got == brute


def test_witness_examples():
    assert split_witness(-71, 107) == (12, 2)
    assert split_witness(-108708, 27241) == (16, 1)
    assert split_witness(-71, 53) is None
    w = SplitPrimeWitness(107, 12, 2, -71)
    assert w.p == 107
    with pytest.raises(ValueError):
        SplitPrimeWitness(107, 12, 1, -71)
    assert split_witness(-71, 107, v_max=1) is None


def test_plan_108708():
    plan = select_primes(-108708, 5943, SPLIT_ONLY)
    ps = [w.p for w in plan.split]
    assert ps[0] == 27241
    assert 320 <= len(ps) <= 328
    assert 9 * 10 ** 5 <= ps[-1] <= 10 ** 6
    assert not plan.inert_trivial


@pytest.mark.parametrize("D", [-71, -56, -23, -1155, -108708])
@pytest.mark.parametrize("policy", [SPLIT_ONLY, WITH_TRIVIAL_INERT])
def test_plan_properties(D, policy):
    n = min(precision_bound(D), 3000)
    plan = select_primes(D, n, policy)
    ps = plan.primes
    assert ps == sorted(set(ps))
    assert plan.modulus >= 2 ** n
    # the last prime taken was needed
    assert plan.modulus // max(w.p for w in plan.split) < 2 ** n
    for w in plan.split:
        assert w.p > MESTRE_THRESHOLD
        assert 4 * w.p == w.u ** 2 - w.v ** 2 * D
        assert w.v <= 16
    for q in plan.inert_trivial:
        assert kronecker(D, q) == -1
    if policy == SPLIT_ONLY:
        assert not plan.inert_trivial
    # prefix minimality: no skipped prime in range would have been admissible
    split = {w.p for w in plan.split}
    for p in range(MESTRE_THRESHOLD + 1, max(split)):
        if is_probable_prime(p) and p not in split and D % p:
            assert split_witness(D, p, 16) is None


def test_plan_errors():
    with pytest.raises(ValueError):
        select_primes(-71, 0)
    with pytest.raises(ValueError):
        select_primes(-71, 100, policy="everything")

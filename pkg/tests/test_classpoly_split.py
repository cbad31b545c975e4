import pytest

from hilbertclass.classpoly_split import (
    find_cm_j, hilbert_mod_p_split, schedule_for, walk_conjugates,
)
from hilbertclass.ecfp import count_points, curve_from_j
from hilbertclass.gfpoly import PolyModP, roots_in_fp
from hilbertclass.primeselect import SplitPrimeWitness, is_probable_prime, split_witness
from hilbertclass.quadform import class_number

from conftest import analytic, discriminants

W107 = SplitPrimeWitness(107, 12, 2, -71)
GOLDEN_107 = "X^7+72X^6+93X^5+73X^4+46X^3+29X^2+30X+19"


def split_primes(D, count, start=458, v_max=16):
    out = []
    p = start
    while len(out) < count:
        p += 1
        if is_probable_prime(p) and D % p:
            sol = split_witness(D, p, v_max)
            if sol:
                out.append(SplitPrimeWitness(p, sol[0], sol[1], D))
    return out


def test_golden_residue(phi_cache):
    H = hilbert_mod_p_split(-71, W107, cache=phi_cache, allow_small=True)
    assert str(H) == GOLDEN_107


def test_golden_orbit(phi_cache):
    j0 = find_cm_j(-71, W107, cache=phi_cache, allow_small=True)
    orbit = walk_conjugates(j0, schedule_for(-71, W107), phi_cache, 107)
    assert set(orbit.j_values) == {19, 46, 63, 64, 77, 30, 57}
    # 2 divides v, so the walk must use another norm
    assert [g.ell for g in orbit.schedule.generators] == [3]


@pytest.mark.parametrize("seed", [0, 1, 2, 3])
def test_seed_independence(seed, phi_cache):
    assert str(hilbert_mod_p_split(-71, W107, seed, phi_cache, allow_small=True)) == GOLDEN_107


@pytest.mark.parametrize("D", [-23, -71, -56, -84, -191, -260, -399, -420, -1155, -1299, -4 * 71, -9 * 23])
def test_against_analytic(D, phi_cache):
    H = analytic(D)
    for w in split_primes(D, 6):
        results = {str(hilbert_mod_p_split(D, w, seed, phi_cache, flip=flip))
                   for seed in (0, 1, 2) for flip in (False, True)}
        assert results == {str(H.mod(w.p))}, w


@pytest.mark.parametrize("D", [-95, -231, -455, -1995])
def test_orbit_size_and_distinctness(D, phi_cache):
    h = class_number(D)
    for w in split_primes(D, 4, v_max=4):
        sched = schedule_for(D, w)
        assert all(w.p != g.ell and w.v % g.ell for g in sched.generators)
        for seed in (0, 5, 9):
            j0 = find_cm_j(D, w, seed, phi_cache)
            for flip in (False, True):
                orbit = walk_conjugates(j0, sched, phi_cache, w.p, flip)
                assert len(orbit.j_values) == len(set(orbit.j_values)) == h


def test_orbit_members_have_right_cardinality(phi_cache):
    for D in (-71, -23, -56):
        for w in split_primes(D, 3):
            j0 = find_cm_j(D, w, cache=phi_cache)
            orbit = walk_conjugates(j0, schedule_for(D, w), phi_cache, w.p)
            for j in orbit.j_values:
                m = count_points(curve_from_j(w.p, j))
                assert m in (w.p + 1 - w.u, w.p + 1 + w.u)


def test_roots_of_residue_are_orbit(phi_cache):
    w = split_primes(-1155, 1)[0]
    H = hilbert_mod_p_split(-1155, w, cache=phi_cache)
    assert H.degree == class_number(-1155) == len(roots_in_fp(H))


def test_find_cm_j_guards(phi_cache):
    with pytest.raises(ValueError):
        find_cm_j(-71, W107, cache=phi_cache)
    with pytest.raises(ValueError):
        find_cm_j(-4, split_primes(-4, 1)[0], cache=phi_cache)


def test_fixed_discriminants():
    w = split_primes(-4, 1)[0]
    assert hilbert_mod_p_split(-4, w) == PolyModP([-1728, 1], w.p)
    w = split_primes(-3, 1)[0]
    assert hilbert_mod_p_split(-3, w) == PolyModP([0, 1], w.p)

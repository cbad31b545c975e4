import mpmath
import pytest
from mpmath import mpc, mpf

from hilbertclass.analytic import cm_j_values, cm_point, hilbert_analytic, j_eval
from hilbertclass.intpoly import IntPoly
from hilbertclass.primeselect import SPLIT_ONLY, select_primes
from hilbertclass.quadform import class_number, enumerate_reduced, precision_bound

from conftest import analytic, discriminants


def close_to_int(z, n, tol):
    return abs(z - n) < tol


def test_j_at_elliptic_points():
    with mpmath.workprec(200):
        assert close_to_int(j_eval(mpc(0, 1), 200), 1728, mpf(2) ** -150)
        rho = mpc(mpf(-1) / 2, mpmath.sqrt(3) / 2)
        assert abs(j_eval(rho, 200)) < mpf(2) ** -150


def test_j_heegner_163():
    with mpmath.workprec(340):
        tau = mpc(mpf(1) / 2, mpmath.sqrt(163) / 2)
        j = j_eval(tau, 300)
        assert abs(j - (-640320) ** 3) < mpf(10) ** -30


@pytest.mark.parametrize("D,j", [(-7, -3375), (-8, 8000), (-11, -32768), (-19, -884736),
                                 (-43, -884736000), (-67, -147197952000), (-12, 54000),
                                 (-16, 287496), (-27, -12288000), (-28, 16581375)])
def test_class_number_one(D, j):
    assert hilbert_analytic(D) == IntPoly([-j, 1])


def test_invariance_under_sl2():
    with mpmath.workprec(150):
        tau = mpc(mpf("0.1234"), mpf("1.3"))
        j = j_eval(tau, 120)
        for t in (tau + 1, -1 / tau, (2 * tau + 1) / (tau + 1), tau / (3 * tau + 1)):
            assert abs(j_eval(t, 120) - j) < abs(j) * mpf(2) ** -100


def test_precision_stability():
    tau = mpc(mpf("-0.3"), mpf("0.97"))
    for bits in (64, 128, 256):
        with mpmath.workprec(2 * bits + 40):
            a = j_eval(tau, bits)
            b = j_eval(tau, 2 * bits)
            assert abs(a - b) <= abs(b) * mpf(2) ** -(bits - 8)


def test_known_small_polynomials():
    assert hilbert_analytic(-4) == IntPoly([-1728, 1])
    assert hilbert_analytic(-3) == IntPoly([0, 1])
    assert hilbert_analytic(-15) == IntPoly([-121287375, 191025, 1])
    assert hilbert_analytic(-23) == IntPoly([12771880859375, -5151296875, 3491750, 1])
    assert hilbert_analytic(-20) == IntPoly([-681472000, -1264000, 1])


def test_minus_71_reduces_to_golden_residue():
    H = hilbert_analytic(-71)
    assert H.degree == 7
    assert str(H.mod(107)) == "X^7+72X^6+93X^5+73X^4+46X^3+29X^2+30X+19"


def test_cm_values_are_conjugates():
    D = -71
    js = cm_j_values(D, 200)
    assert len(js) == class_number(D)
    H = analytic(D)
    with mpmath.workprec(240):
        for j in js:
            val = mpc(0)
            for c in reversed(H.coeffs):
                val = val * j + c
            assert abs(val) < mpf(2) ** -40 * max(1, abs(j)) ** 7


def test_cm_point():
    with mpmath.workprec(100):
        pt = cm_point(enumerate_reduced(-71)[1], -71)
        assert abs(pt.tau - mpc(mpf(1) / 4, mpmath.sqrt(71) / 4)) < mpf(2) ** -90


@pytest.mark.parametrize("D", discriminants(400))
def test_output_shape(D):
    H = analytic(D)
    assert H.is_monic() and H.degree == class_number(D)
    assert H.height_bits() <= precision_bound(D)


def test_explicit_bits_hint():
    assert hilbert_analytic(-71, bits_hint=64) == analytic(-71)

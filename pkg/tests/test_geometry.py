import math
from fractions import Fraction

import pytest
import sympy as sp

from cyentropy.geometry import (
    UnsupportedModeError,
    VarietyError,
    a_sequence,
    characteristic_classes,
    euler_characteristic,
    euler_characteristic_hrr,
    hilbert_polynomial,
    make_variety,
    newton_power_sums,
)
from cyentropy.numerics import Polynomial

DIMS = range(3, 9)


@pytest.fixture(scope="module")
def quintic():
    return make_variety(3)


def test_quintic_spec(quintic):
    assert (quintic.d, quintic.degree, quintic.top_intersection) == (3, 5, 5)


def test_sextic_spec():
    X = make_variety(4)
    assert X.degree == 6 and X.top_intersection == 6


@pytest.mark.parametrize("bad", [2, 1, 0, -3])
def test_dimension_too_small(bad):
    with pytest.raises(VarietyError):
        make_variety(bad)


def test_non_cy_degree_rejected():
    with pytest.raises(VarietyError):
        make_variety(3, degree=4)


@pytest.mark.parametrize("k, expected", [(1, 5), (6, 205), (0, 0), (2, 15), (3, 35)])
def test_quintic_chi(quintic, k, expected):
    assert euler_characteristic(quintic, k) == expected


def test_quintic_spot_values(quintic):
    assert a_sequence(quintic, 6) == [5, 15, 35, 70, 125, 205]


@pytest.mark.parametrize("d", DIMS)
def test_chi_structure_sheaf(d):
    assert euler_characteristic(make_variety(d), 0) == 1 + (-1) ** d


@pytest.mark.parametrize("d", DIMS)
def test_chi_dual_routes_agree(d):
    X = make_variety(d)
    for k in range(-10, 101):
        assert euler_characteristic(X, k) == euler_characteristic_hrr(X, k)


@pytest.mark.parametrize("d", DIMS)
def test_a_k_strictly_increasing(d):
    a = a_sequence(make_variety(d), 60)
    assert a[0] >= 1
    assert all(x < y for x, y in zip(a, a[1:]))


def test_hilbert_polynomial_quintic(quintic):
    P = hilbert_polynomial(quintic)
    assert [P(k) for k in (1, 2, 3)] == [5, 15, 35]
    assert P.degree == 3 and P.leading == Fraction(5, 6)


@pytest.mark.parametrize("d", DIMS)
def test_hilbert_polynomial_matches_interpolation(d):
    X = make_variety(d)
    k = sp.symbols("k")
    pts = [(j, euler_characteristic(X, j)) for j in range(1, d + 2)]
    oracle = sp.Poly(sp.interpolate(pts, k), k)
    P = hilbert_polynomial(X)
    assert [sp.Rational(c.numerator, c.denominator) for c in P.coeffs] == list(reversed(oracle.all_coeffs()))
    for j in range(-100, 100):
        assert P(j) == euler_characteristic(X, j)
    assert P.leading == Fraction(X.degree, math.factorial(d))


def test_sextic_hilbert_constant_term():
    assert hilbert_polynomial(make_variety(4))(0) == 2


def test_user_hilbert_echo_and_chi():
    P = Polynomial([0, Fraction(25, 6), 0, Fraction(5, 6)])
    X = make_variety(3, hilbert=P)
    assert hilbert_polynomial(X) is P
    assert X.top_intersection == 5
    assert euler_characteristic(X, 6) == 205


@pytest.mark.parametrize(
    "coeffs",
    [
        [0, 0, 0, Fraction(1, 7)],  # non-integral values
        [10, -3, 0, Fraction(1, 6)],  # not increasing at the start
        [0, 1, 1],  # wrong degree
    ],
)
def test_user_hilbert_rejected(coeffs):
    with pytest.raises(VarietyError):
        make_variety(3, hilbert=Polynomial(coeffs))


def test_user_mode_has_no_chern_classes():
    X = make_variety(3, hilbert=hilbert_polynomial(make_variety(3)))
    with pytest.raises(UnsupportedModeError):
        characteristic_classes(X)


def test_quintic_chern_classes(quintic):
    cc = characteristic_classes(quintic)
    assert cc.chern == (1, 0, 10, -40)
    assert cc.chern[3] * quintic.top_intersection == -200


def test_quintic_todd(quintic):
    cc = characteristic_classes(quintic)
    assert cc.todd == (1, 0, Fraction(5, 6), 0)
    assert cc.sqrt_todd == (1, 0, Fraction(5, 12), 0)


@pytest.mark.parametrize("d", DIMS)
def test_classes_invariants(d):
    cc = characteristic_classes(make_variety(d))
    assert cc.chern[0] == cc.todd[0] == 1
    assert cc.chern[1] == 0
    sq = [sum(cc.sqrt_todd[i] * cc.sqrt_todd[j - i] for i in range(j + 1)) for j in range(d + 1)]
    assert tuple(sq) == cc.todd


@pytest.mark.parametrize("d", DIMS)
def test_power_sums_match_k_theory(d):
    # T_X = (d+2) O(1) - O(n) in K-theory, so the m-th power sum is (d+2) - n^m
    X = make_variety(d)
    ps = characteristic_classes(X).power_sums
    assert list(ps[1:]) == [(d + 2) - X.degree**m for m in range(1, d + 1)]


def test_newton_identities_on_known_roots():
    roots = [2, -1, 3]
    e = [1, sum(roots), 2 * -1 + 2 * 3 + -1 * 3, 2 * -1 * 3]
    p = newton_power_sums([Fraction(v) for v in e], 5)
    assert p[1:] == [sum(r**m for r in roots) for m in range(1, 6)]


@pytest.mark.parametrize("d", [3, 4, 6])
def test_todd_matches_sympy_series(d):
    X = make_variety(d)
    n = X.degree
    h, x = sp.symbols("h x")
    log_term = sp.series(sp.log(x / (1 - sp.exp(-x))), x, 0, d + 1).removeO()
    # Chern roots: d+2 copies of h minus one copy of n h
    logtd = (d + 2) * log_term.subs(x, h) - log_term.subs(x, n * h)
    td = sp.series(sp.exp(logtd), h, 0, d + 1).removeO()
    expected = [sp.expand(td).coeff(h, i) for i in range(d + 1)]
    got = characteristic_classes(X).todd
    assert [sp.Rational(c.numerator, c.denominator) for c in got] == expected

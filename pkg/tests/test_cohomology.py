import math
from fractions import Fraction

import pytest
import sympy as sp

from cyentropy.cohomology import (
    ActionMatrix,
    CohClass,
    charpoly,
    class_from_list,
    counterexample_report,
    gram_matrix,
    mukai_pairing,
    mukai_vector,
    phi_action_matrix,
    spectral_analysis,
    tensor_matrix,
    twist_sign,
)
from cyentropy.entropy import entropy_curve
from cyentropy.geometry import UnsupportedModeError, euler_characteristic, hilbert_polynomial, make_variety
from cyentropy.numerics import Polynomial

DIMS = range(3, 9)


def to_sympy(M: ActionMatrix) -> sp.Matrix:
    return sp.Matrix([[sp.Rational(c.numerator, c.denominator) for c in row] for row in M.rows])


def test_quintic_mukai_vector():
    X = make_variety(3)
    assert mukai_vector(X, 0) == class_from_list([1, 0, Fraction(5, 12), 0])
    v1 = mukai_vector(X, 1)
    assert v1 == class_from_list([1, 1, Fraction(1, 2) + Fraction(5, 12), Fraction(1, 6) + Fraction(5, 12)])


@pytest.mark.parametrize("d", DIMS)
def test_pairing_computes_euler_characteristic(d):
    X = make_variety(d)
    vs = {a: mukai_vector(X, a) for a in range(-10, 11)}
    for a in range(-10, 11):
        for b in range(-10, 11):
            assert mukai_pairing(X, vs[a], vs[b]) == euler_characteristic(X, b - a)


@pytest.mark.parametrize("d", DIMS)
def test_pairing_symmetry_parity(d):
    # (-1)^d symmetric: symmetric for even d, antisymmetric for odd d
    X = make_variety(d)
    v, w = mukai_vector(X, 2), mukai_vector(X, -3)
    assert mukai_pairing(X, v, w) == (-1) ** d * mukai_pairing(X, w, v)


@pytest.mark.parametrize("d", DIMS)
def test_gram_matrix_is_pairing(d):
    X = make_variety(d)
    G = gram_matrix(X)
    v, w = mukai_vector(X, 1), mukai_vector(X, 4)
    gw = G.apply(w)
    assert sum((v[i] * gw[i] for i in range(d + 1)), Fraction(0)) == mukai_pairing(X, v, w)


@pytest.mark.parametrize("d", DIMS)
def test_twist_properties(d):
    X = make_variety(d)
    act = phi_action_matrix(X)
    v0 = mukai_vector(X, 0)
    assert act.twist.apply(v0) == twist_sign(d) * v0
    assert twist_sign(d) == (-1) ** (d - 1)
    # pairing is preserved
    v, w = mukai_vector(X, 2), mukai_vector(X, -1)
    assert mukai_pairing(X, act.twist.apply(v), act.twist.apply(w)) == mukai_pairing(X, v, w)
    # reflection for even d, transvection for odd d
    assert act.twist.determinant() == (-1 if d % 2 == 0 else 1)
    if d % 2 == 0:
        assert (act.twist @ act.twist).is_identity()
    else:
        assert ((act.twist - ActionMatrix.identity(d + 1)).power(2)).is_zero()


@pytest.mark.parametrize("d", DIMS)
def test_tensor_properties(d):
    T = tensor_matrix(d, -1)
    assert T.determinant() == 1
    assert (T @ tensor_matrix(d, 1)).is_identity()
    X = make_variety(d)
    assert T.apply(mukai_vector(X, 3)) == mukai_vector(X, 2)


@pytest.mark.parametrize("d", DIMS)
def test_charpoly_matches_sympy(d):
    phi = phi_action_matrix(make_variety(d)).phi
    y = sp.symbols("y")
    oracle = to_sympy(phi).charpoly(y).all_coeffs()
    got = charpoly(phi)
    assert [sp.Rational(c.numerator, c.denominator) for c in reversed(got.coeffs)] == oracle


def test_charpoly_small_matrix():
    M = ActionMatrix.from_rows("m", [[2, 1], [1, 3]])
    assert charpoly(M) == Polynomial([5, -5, 1])


@pytest.mark.parametrize("d, expected", [
    (3, (1, -9, 11, -9, 1)),
    (4, (1, 1, 1, 1, 1, 1)),
    (5, (1, -13, 29, -41, 29, -13, 1)),
    (7, (1, -17, 55, -113, 139, -113, 55, -17, 1)),
])
def test_known_char_polys(d, expected):
    rep = spectral_analysis(phi_action_matrix(make_variety(d)).phi, d + 2)
    assert rep.char_poly_ints == expected


@pytest.mark.parametrize("d", [4, 6, 8])
def test_even_dimension_quasi_unipotent(d):
    act = phi_action_matrix(make_variety(d))
    assert act.phi.power(d + 2).is_identity()
    rep = spectral_analysis(act.phi, d + 2)
    assert rep.quasi_unipotent and rep.rho == 1.0


@pytest.mark.parametrize("d", [3, 5, 7])
def test_odd_dimension_not_finite_order(d):
    rep = spectral_analysis(phi_action_matrix(make_variety(d)).phi, d + 2)
    assert not rep.quasi_unipotent
    assert rep.rho > 1


@pytest.mark.parametrize("d", [4, 6])
def test_counterexample_even(d):
    rep = counterexample_report(make_variety(d))
    assert rep.h0 > 0
    assert rep.rho == 1.0 and rep.log_rho_full == 0.0
    assert rep.kt_holds is False
    assert rep.detail["twist_squared_is_identity"] is True
    js = rep.to_json()
    assert set(js) == {"dim", "degree", "char_poly", "rho", "quasi_unipotent", "h0", "log_rho", "kt_holds", "detail"}


@pytest.mark.parametrize("d", [3, 5])
def test_counterexample_odd_agrees(d):
    rep = counterexample_report(make_variety(d))
    assert abs(rep.log_rho_full - rep.h0) <= 1e-8
    assert rep.kt_holds is True


def test_quintic_charpoly_divides_curve():
    X = make_variety(3)
    cp = charpoly(phi_action_matrix(X).phi)
    F1 = entropy_curve(X).at_u(1)
    q, r = divmod(F1, cp)
    assert r.is_zero()
    assert q == Polynomial([1, -1])  # F(1, y) = (1 - y) * charpoly


def test_spectral_radius_matches_root():
    rep = spectral_analysis(phi_action_matrix(make_variety(3)).phi, 5)
    z = (9 + 3 * math.sqrt(5)) / 2
    assert rep.rho == pytest.approx((z + math.sqrt(z * z - 4)) / 2, rel=1e-12)


def test_user_mode_unsupported():
    X = make_variety(3, hilbert=hilbert_polynomial(make_variety(3)))
    with pytest.raises(UnsupportedModeError):
        phi_action_matrix(X)


def test_matrix_power_name_and_identity():
    M = ActionMatrix.from_rows("m", [[0, -1], [1, 0]])
    assert M.power(4).is_identity()
    assert "4" in M.power(4).name
    assert not M.power(2).is_identity()


def test_class_arithmetic():
    a, b = class_from_list([1, 2, 3]), class_from_list([0, 1, Fraction(1, 2)])
    assert a - b + b == a
    assert 2 * b == b + b
    assert a.dual() == CohClass((Fraction(1), Fraction(-2), Fraction(3)))

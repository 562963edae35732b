import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cyentropy.numerics import (
    CertifiedBracket,
    ConvergenceError,
    NoSignChangeError,
    NonFiniteEndpointError,
    PoleError,
    Polynomial,
    RationalFunction,
    certified_monotone_root,
    generalized_binomial,
    poly_gcd,
    ratfun_eval,
    series_exp,
    series_log,
)

X = Polynomial.x()
ONE_MINUS_X = Polynomial([1, -1])


def cy_generating_function(n):
    """(1 - x^n) / (1 - x)^n = 1 + sum_{k>=1} chi(O(k)) x^k."""
    return RationalFunction(1 - Polynomial.monomial(n), ONE_MINUS_X**n)


def quintic_series():
    return cy_generating_function(5) - 1


def falling_factorial(m, r):
    out = Fraction(1)
    for i in range(r):
        out *= m - i
    return out / math.factorial(r)


# -- generalized binomial ----------------------------------------------------

@pytest.mark.parametrize("m, r, expected", [(5, 4, 5), (-1, 4, 1), (0, 4, 0), (7, 0, 1)])
def test_binomial_small(m, r, expected):
    assert generalized_binomial(m, r) == expected


def test_binomial_factorial_oracle():
    assert generalized_binomial(9, 4) == math.factorial(9) // (math.factorial(4) * math.factorial(5)) == 126


def test_binomial_matches_falling_factorial_grid():
    for m in range(-50, 51):
        for r in range(13):
            assert generalized_binomial(m, r) == falling_factorial(m, r)
            if m >= 0:
                assert generalized_binomial(m, r) == math.comb(m, r)


def test_binomial_rejects_negative_r():
    with pytest.raises(ValueError):
        generalized_binomial(3, -1)


# -- polynomials -------------------------------------------------------------

def test_zero_polynomial_degree_is_sentinel():
    zero = Polynomial([0, 0, 0])
    assert zero.coeffs == ()
    assert zero.degree is None
    assert (X - X).degree is None
    assert Polynomial([3]).degree == 0


def test_polynomial_divmod_roundtrip():
    a = Polynomial([1, -3, 0, 2, 5])
    b = Polynomial([2, 1, Fraction(1, 3)])
    q, r = divmod(a, b)
    assert q * b + r == a
    assert r.degree < b.degree


def test_reversed_and_gcd():
    p = (X - 1) * (X - 2)
    assert p.reversed() == Polynomial([1, -3, 2])
    assert Polynomial([0, 1]).reversed(3) == Polynomial([0, 0, 1])
    assert poly_gcd(p, (X - 1) * (X + 5)) == X - 1


def test_content_normalized():
    p = Polynomial([Fraction(1, 2), Fraction(-3, 4)])
    assert p.content_normalized() == [-2, 3]


rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
polys = st.lists(rationals, min_size=1, max_size=4).map(Polynomial)
nonzero_polys = polys.filter(lambda p: not p.is_zero())
ratfuns = st.tuples(polys, nonzero_polys).map(lambda t: RationalFunction(*t))


@settings(max_examples=60, deadline=None)
@given(ratfuns, ratfuns, ratfuns)
def test_ratfun_add_mul_associative(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert (f * g) * h == f * (g * h)


@settings(max_examples=60, deadline=None)
@given(ratfuns, ratfuns)
def test_ratfun_commutative(f, g):
    assert f + g == g + f
    assert f * g == g * f


@settings(max_examples=60, deadline=None)
@given(polys, nonzero_polys, nonzero_polys)
def test_ratfun_reduction_idempotent_and_canonical(p, q, common):
    f = RationalFunction(p * common, q * common)
    again = RationalFunction(f.num, f.den)
    assert again.num == f.num and again.den == f.den
    assert f == RationalFunction(p, q)
    assert f.den.leading == 1
    assert poly_gcd(f.num, f.den).degree in (0, None)


@settings(max_examples=40, deadline=None)
@given(ratfuns, rationals)
def test_ratfun_eval_matches_num_over_den(f, x):
    dv = f.den(x)
    if dv == 0:
        with pytest.raises(PoleError):
            ratfun_eval(f, x)
    else:
        assert ratfun_eval(f, x) == f.num(x) / dv


# -- rational functions ------------------------------------------------------

def test_ratfun_eval_trivial():
    assert ratfun_eval(RationalFunction(X, ONE_MINUS_X), Fraction(1, 2)) == 1


def test_ratfun_pole():
    with pytest.raises(PoleError):
        ratfun_eval(RationalFunction(X, ONE_MINUS_X), 1)


def test_quintic_bracket_endpoints():
    # t = 0: the full generating function hits 2 exactly when the Hilbert series hits 1
    G = cy_generating_function(5)
    assert ratfun_eval(G, Fraction(12, 100)) < 2 < ratfun_eval(G, Fraction(13, 100))
    S = quintic_series()
    assert ratfun_eval(S, Fraction(12, 100)) < 1 < ratfun_eval(S, Fraction(13, 100))


def test_series_expansion_matches_known_coefficients():
    assert quintic_series().series(6) == [0, 5, 15, 35, 70, 125, 205]


def test_series_exp_log_inverse():
    a = [Fraction(0), Fraction(1, 3), Fraction(-2), Fraction(5, 7)]
    e = series_exp(a, 3)
    assert series_log(e, 3) == a


# -- certified bisection -----------------------------------------------------

def test_certified_identity_root():
    b = certified_monotone_root(lambda x: x, Fraction(1, 2), (0, 1), Fraction(1, 1024))
    assert Fraction(1, 2) in b
    assert b.width <= Fraction(1, 1024)
    assert b.f_lo_sign == -1 and b.f_hi_sign == 1


def _largest_real_root(coeffs_desc, lo, hi, steps=200):
    """Independent float bisection on a plain polynomial in y."""
    def p(y):
        return sum(c * y ** (len(coeffs_desc) - 1 - i) for i, c in enumerate(coeffs_desc))
    for _ in range(steps):
        mid = (lo + hi) / 2
        if (p(lo) < 0) == (p(mid) < 0):
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def test_certified_quintic_root():
    G = cy_generating_function(5)
    b = certified_monotone_root(G, 2, (Fraction(12, 100), Fraction(13, 100)), Fraction(1, 2**40))
    y_star = _largest_real_root([1, -9, 11, -9, 1], 2.0, 10.0)
    assert abs(float(b.midpoint) - 1 / y_star) < 1e-11
    assert abs(float(b.midpoint) - 0.12946) < 1e-5
    assert G(b.lo) < 2 < G(b.hi)


def test_certified_sextic_root():
    G = cy_generating_function(6)
    b = certified_monotone_root(G, 2, (Fraction(1, 10**6), Fraction(999, 1000)), Fraction(1, 2**40))
    # sextic e^lambda is the largest root of y^5 - 11y^4 + 19y^3 - 21y^2 + 9y - 3
    y_star = _largest_real_root([1, -11, 19, -21, 9, -3], 2.0, 20.0)
    assert abs(float(b.midpoint) - 1 / y_star) < 1e-10
    assert abs(float(b.midpoint) - 0.1091) < 1e-4


@settings(max_examples=50, deadline=None)
@given(
    st.fractions(min_value=Fraction(1, 100), max_value=Fraction(99, 100), max_denominator=1000),
    st.integers(min_value=4, max_value=60),
)
def test_certified_postconditions(target, bits):
    tol = Fraction(1, 2**bits)
    f = RationalFunction(X * X * X + X, 2)  # increasing on (0, 1), range (0, 1)
    b = certified_monotone_root(f, target, (0, 1), tol)
    assert b.hi - b.lo <= tol
    assert (f(b.lo) - target) * (f(b.hi) - target) < 0


def test_no_sign_change():
    with pytest.raises(NoSignChangeError):
        certified_monotone_root(lambda x: x, 5, (0, 1), Fraction(1, 8))


def test_non_finite_endpoint():
    with pytest.raises(NonFiniteEndpointError):
        certified_monotone_root(lambda x: x, 0, (float("-inf"), 1), Fraction(1, 8))
    with pytest.raises(NonFiniteEndpointError):
        certified_monotone_root(RationalFunction(X, ONE_MINUS_X), 3, (0, 1), Fraction(1, 8))


def test_iteration_cap():
    with pytest.raises(ConvergenceError):
        certified_monotone_root(lambda x: x, Fraction(1, 3), (0, 1), Fraction(1, 2**100), max_iter=10)


def test_bracket_invariants_enforced():
    with pytest.raises(ValueError):
        CertifiedBracket(Fraction(1), Fraction(0), -1, 1)
    with pytest.raises(ValueError):
        CertifiedBracket(Fraction(0), Fraction(1), 1, 1)

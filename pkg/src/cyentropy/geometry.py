"""Numerical invariants of Calabi-Yau hypersurfaces.

A :class:`VarietySpec` is either a builtin hypersurface of degree ``n`` in
``P^{d+1}`` or an arbitrary variety described only through its Hilbert
polynomial. For builtin hypersurfaces the Euler characteristics
``chi(O(k))`` are available by two independent routes:

* the binomial difference ``B(k+d+1, d+1) - B(k-n+d+1, d+1)`` coming from
  the Koszul sequence ``0 -> O_P(k-n) -> O_P(k) -> O_X(k) -> 0``;
* Hirzebruch-Riemann-Roch, ``int e^{kH} td(X)``, with the Todd class built
  from the Chern classes through Newton's identities.

Every cohomology class here is a rational multiple of a power of the
hyperplane class, so classes are coefficient lists indexed by the power of H.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache

from .numerics import (
    Polynomial,
    generalized_binomial,
    series_exp,
    series_inverse,
    series_log,
    series_mul,
)

BUILTIN = "builtin-hypersurface"
USER_HILBERT = "user-hilbert"


class VarietyError(ValueError):
    """Invalid variety data (dimension too small, bad Hilbert polynomial, ...)."""


class UnsupportedModeError(VarietyError):
    """Operation needs a builtin hypersurface but got Hilbert-polynomial-only data."""


@dataclass(frozen=True)
class VarietySpec:
    d: int
    degree: int
    mode: str = BUILTIN
    hilbert: Polynomial | None = field(default=None, compare=False)

    @property
    def top_intersection(self) -> int:
        """``int H^d``; for a hypersurface this is its degree."""
        return self.degree

    @property
    def is_builtin(self) -> bool:
        return self.mode == BUILTIN

    @property
    def name(self) -> str:
        if not self.is_builtin:
            return f"user-hilbert variety of dimension {self.d}"
        names = {3: "quintic threefold", 4: "sextic fourfold", 5: "septic fivefold"}
        return names.get(self.d, f"degree-{self.degree} CY {self.d}-fold")

    def require_builtin(self, what: str) -> None:
        if not self.is_builtin:
            raise UnsupportedModeError(f"{what} needs a builtin hypersurface, not {self.mode} data")


def make_variety(d: int, degree: int | None = None, hilbert: Polynomial | None = None) -> VarietySpec:
    """Validate and build a variety description.

    Builtin mode is the Calabi-Yau hypersurface of degree ``d+2`` in
    ``P^{d+1}``. Passing ``hilbert`` instead selects user mode; the polynomial
    must take strictly increasing positive integer values on ``k = 1..2d+10``.
    """
    if not isinstance(d, int) or d < 3:
        raise VarietyError(f"dimension must be an integer >= 3, got {d!r}")
    if hilbert is not None:
        if degree is not None:
            raise VarietyError("give either a hypersurface degree or a Hilbert polynomial, not both")
        _check_user_hilbert(d, hilbert)
        top = hilbert.leading * math.factorial(d)
        if top.denominator != 1 or top <= 0:
            raise VarietyError(f"Hilbert polynomial implies int H^d = {top}, not a positive integer")
        return VarietySpec(d=d, degree=int(top), mode=USER_HILBERT, hilbert=hilbert)
    if degree is None:
        degree = d + 2
    if degree != d + 2:
        raise VarietyError(
            f"builtin hypersurfaces are Calabi-Yau: degree must be d+2 = {d + 2}, got {degree}"
        )
    return VarietySpec(d=d, degree=degree)


def _check_user_hilbert(d: int, hilbert: Polynomial) -> None:
    if hilbert.degree != d:
        raise VarietyError(f"Hilbert polynomial must have degree {d}, got {hilbert.degree}")
    prev = 0
    for k in range(1, 2 * d + 11):
        v = hilbert(Fraction(k))
        if v.denominator != 1:
            raise VarietyError(f"Hilbert polynomial is not integral at k = {k}: {v}")
        if v <= prev:
            raise VarietyError(f"Hilbert values must be positive and strictly increasing; fails at k = {k}")
        prev = v


def euler_characteristic(X: VarietySpec, k: int) -> int:
    """chi(O_X(k)) for any integer ``k``."""
    if not X.is_builtin:
        v = X.hilbert(Fraction(k))
        return int(v)
    n, d = X.degree, X.d
    v = generalized_binomial(k + d + 1, d + 1) - generalized_binomial(k - n + d + 1, d + 1)
    return int(v)


def _shifted_binomial_poly(shift: int, r: int) -> Polynomial:
    """The polynomial ``k -> B(k + shift, r)``."""
    p = Polynomial.constant(Fraction(1, math.factorial(r)))
    for i in range(r):
        p = p * Polynomial([shift - i, 1])
    return p


def hilbert_polynomial(X: VarietySpec) -> Polynomial:
    if not X.is_builtin:
        return X.hilbert
    d, n = X.d, X.degree
    return _shifted_binomial_poly(d + 1, d + 1) - _shifted_binomial_poly(d + 1 - n, d + 1)


@dataclass(frozen=True)
class CharacteristicClasses:
    """Chern, Todd and square-root Todd classes as multiples of ``H^i``, i = 0..d."""

    chern: tuple[Fraction, ...]
    todd: tuple[Fraction, ...]
    sqrt_todd: tuple[Fraction, ...]
    power_sums: tuple[Fraction, ...]


def todd_log_coefficients(order: int) -> list[Fraction]:
    """Taylor coefficients of ``log(x / (1 - e^{-x}))`` up to ``x**order``."""
    # (1 - e^{-x}) / x = sum_m (-1)^m x^m / (m+1)!
    g = [Fraction((-1) ** m, math.factorial(m + 1)) for m in range(order + 1)]
    return series_log(series_inverse(g, order), order)


def newton_power_sums(elementary: list[Fraction], order: int) -> list[Fraction]:
    """Power sums p_1..p_order from elementary symmetric functions e_1..e_order.

    ``elementary[j]`` is e_j (``elementary[0]`` is ignored). Index 0 of the
    result is left as 0; the rank never enters since only p_j, j >= 1, are used.
    """
    e = list(elementary) + [Fraction(0)] * max(0, order + 1 - len(elementary))
    p = [Fraction(0)] * (order + 1)
    for j in range(1, order + 1):
        acc = (-1) ** (j - 1) * j * e[j]
        for i in range(1, j):
            acc += (-1) ** (i - 1) * e[i] * p[j - i]
        p[j] = acc
    return p


def characteristic_classes(X: VarietySpec) -> CharacteristicClasses:
    X.require_builtin("characteristic classes")
    return _characteristic_classes(X.d, X.degree)


@lru_cache(maxsize=None)
def _characteristic_classes(d: int, degree: int) -> CharacteristicClasses:
    # adjunction: c(T_X) = (1+H)^{d+2} / (1 + n H)
    ambient = [Fraction(math.comb(d + 2, i)) for i in range(d + 1)]
    normal_inv = series_inverse([Fraction(1), Fraction(degree)], d)
    chern = series_mul(ambient, normal_inv, d)

    power_sums = newton_power_sums(chern, d)
    log_coeffs = todd_log_coefficients(d)
    log_td = [log_coeffs[m] * power_sums[m] if m else Fraction(0) for m in range(d + 1)]
    todd = series_exp(log_td, d)
    sqrt_todd = series_exp([c / 2 for c in log_td], d)
    return CharacteristicClasses(tuple(chern), tuple(todd), tuple(sqrt_todd), tuple(power_sums))


def integrate(X: VarietySpec, cls) -> Fraction:
    """Degree of a class: its H^d coefficient times int H^d."""
    top = cls[X.d] if len(cls) > X.d else Fraction(0)
    return top * X.top_intersection


def exp_class(k: int, d: int) -> list[Fraction]:
    """ch(O(k)) = e^{kH}, truncated at H^d."""
    return [Fraction(k) ** i / math.factorial(i) for i in range(d + 1)]


def euler_characteristic_hrr(X: VarietySpec, k: int) -> int:
    """chi(O_X(k)) by Hirzebruch-Riemann-Roch; independent of :func:`euler_characteristic`."""
    td = characteristic_classes(X).todd
    value = integrate(X, series_mul(exp_class(k, X.d), td, X.d))
    if value.denominator != 1:
        raise ArithmeticError(f"HRR produced a non-integer Euler characteristic {value}")
    return int(value)


def a_sequence(X: VarietySpec, k_max: int) -> list[int]:
    """``[a_1, ..., a_{k_max}]`` with ``a_k = chi(O(k))``."""
    return [euler_characteristic(X, k) for k in range(1, k_max + 1)]

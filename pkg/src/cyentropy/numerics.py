"""Exact arithmetic substrate.

Scalars are :class:`fractions.Fraction`. On top of them this module provides
dense univariate polynomials, reduced rational functions, generalized
binomial coefficients, truncated power series helpers and a certified
bisection for monotone functions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence, Union

Rational = Fraction
Scalar = Union[int, Fraction]


class PoleError(ZeroDivisionError):
    """Raised when a rational function is evaluated at a zero of its denominator."""


class NoSignChangeError(ValueError):
    pass


class NonFiniteEndpointError(ValueError):
    pass


class ConvergenceError(RuntimeError):
    """An iterative procedure hit its iteration cap before reaching tolerance."""


def as_fraction(value: Scalar | float | str) -> Fraction:
    if isinstance(value, float) and not math.isfinite(value):
        raise NonFiniteEndpointError(f"non-finite value {value!r}")
    return Fraction(value)


def generalized_binomial(m: int, r: int) -> Fraction:
    """Return ``m (m-1) ... (m-r+1) / r!`` for any integer ``m``.

    Unlike ``math.comb`` this is the polynomial in ``m``; it is signed and
    nonzero for negative ``m``:

    >>> generalized_binomial(-1, 4)
    Fraction(1, 1)
    """
    if r < 0:
        raise ValueError("r must be nonnegative")
    num = 1
    for i in range(r):
        num *= m - i
    return Fraction(num, math.factorial(r))


class Polynomial:
    """Dense univariate polynomial with rational coefficients.

    ``coeffs[i]`` is the coefficient of ``x**i``. Trailing zeros are stripped,
    so the zero polynomial has an empty coefficient tuple and its
    :attr:`degree` is ``None``.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Scalar] = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs: tuple[Fraction, ...] = tuple(cs)

    @classmethod
    def x(cls) -> Polynomial:
        return cls([0, 1])

    @classmethod
    def constant(cls, c: Scalar) -> Polynomial:
        return cls([c])

    @classmethod
    def monomial(cls, n: int, c: Scalar = 1) -> Polynomial:
        return cls([0] * n + [c])

    @property
    def degree(self) -> int | None:
        return len(self.coeffs) - 1 if self.coeffs else None

    @property
    def leading(self) -> Fraction:
        return self.coeffs[-1] if self.coeffs else Fraction(0)

    def is_zero(self) -> bool:
        return not self.coeffs

    def __getitem__(self, i: int) -> Fraction:
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        return Fraction(0)

    def __call__(self, x):
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc if self.coeffs else Fraction(0) * x

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = Polynomial.constant(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __repr__(self) -> str:
        return f"Polynomial({[str(c) for c in self.coeffs]})"

    def __str__(self) -> str:
        if not self.coeffs:
            return "0"
        terms = []
        for i in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[i]
            if c == 0:
                continue
            mono = "" if i == 0 else ("x" if i == 1 else f"x^{i}")
            if mono and abs(c) == 1:
                body = mono
            else:
                body = f"{abs(c)}" + (f"*{mono}" if mono else "")
            terms.append(("- " if c < 0 else "+ ") + body)
        s = " ".join(terms)
        return s[2:] if s.startswith("+ ") else "-" + s[2:]

    @staticmethod
    def _coerce(other) -> Polynomial:
        if isinstance(other, Polynomial):
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(other)
        return NotImplemented

    def __add__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        n = max(len(self.coeffs), len(other.coeffs))
        return Polynomial(self[i] + other[i] for i in range(n))

    __radd__ = __add__

    def __neg__(self) -> Polynomial:
        return Polynomial(-c for c in self.coeffs)

    def __sub__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> Polynomial:
        return (-self) + other

    def __mul__(self, other) -> Polynomial:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if not self.coeffs or not other.coeffs:
            return Polynomial()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if a == 0:
                continue
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return Polynomial(out)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> Polynomial:
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = Polynomial.constant(1)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __divmod__(self, other: Polynomial) -> tuple[Polynomial, Polynomial]:
        other = self._coerce(other)
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        dq = len(other.coeffs) - 1
        lead = other.leading
        quot = [Fraction(0)] * max(len(rem) - dq, 0)
        for i in range(len(rem) - 1, dq - 1, -1):
            q = rem[i] / lead
            if q == 0:
                continue
            quot[i - dq] = q
            for j, b in enumerate(other.coeffs):
                rem[i - dq + j] -= q * b
        return Polynomial(quot), Polynomial(rem[:dq])

    def __floordiv__(self, other) -> Polynomial:
        return divmod(self, other)[0]

    def __mod__(self, other) -> Polynomial:
        return divmod(self, other)[1]

    def scale(self, c: Scalar) -> Polynomial:
        return Polynomial(c * a for a in self.coeffs)

    def monic(self) -> Polynomial:
        if self.is_zero():
            return self
        return self.scale(1 / self.leading)

    def derivative(self) -> Polynomial:
        return Polynomial(i * c for i, c in enumerate(self.coeffs) if i)

    def compose(self, other: Polynomial) -> Polynomial:
        acc = Polynomial()
        for c in reversed(self.coeffs):
            acc = acc * other + c
        return acc

    def reversed(self, n: int | None = None) -> Polynomial:
        """Return ``x**n * p(1/x)``; ``n`` defaults to the degree."""
        if n is None:
            n = self.degree or 0
        if self.degree is not None and self.degree > n:
            raise ValueError("reversal degree smaller than polynomial degree")
        padded = list(self.coeffs) + [Fraction(0)] * (n + 1 - len(self.coeffs))
        return Polynomial(reversed(padded))

    def content_normalized(self) -> list[int]:
        """Integer coefficient list with unit content and positive leading term."""
        if self.is_zero():
            return []
        lcm = 1
        for c in self.coeffs:
            lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
        ints = [int(c * lcm) for c in self.coeffs]
        g = 0
        for v in ints:
            g = math.gcd(g, v)
        ints = [v // g for v in ints]
        if ints[-1] < 0:
            ints = [-v for v in ints]
        return ints


def poly_gcd(a: Polynomial, b: Polynomial) -> Polynomial:
    """Monic greatest common divisor (zero if both inputs are zero)."""
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


class RationalFunction:
    """Quotient of polynomials kept in lowest terms with a monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num: Polynomial | Scalar, den: Polynomial | Scalar = 1):
        num = num if isinstance(num, Polynomial) else Polynomial.constant(num)
        den = den if isinstance(den, Polynomial) else Polynomial.constant(den)
        if den.is_zero():
            raise ZeroDivisionError("zero denominator")
        g = poly_gcd(num, den)
        if not g.is_zero() and g.degree:
            num, den = num // g, den // g
        lead = den.leading
        self.num = num.scale(1 / lead)
        self.den = den.scale(1 / lead)

    @staticmethod
    def _coerce(other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, (Polynomial, int, Fraction)):
            return RationalFunction(other)
        return NotImplemented

    def __add__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.den + other.num * self.den, self.den * other.den)

    __radd__ = __add__

    def __neg__(self) -> RationalFunction:
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other) -> RationalFunction:
        return (-self) + other

    def __mul__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return RationalFunction(self.num * other.num, self.den * other.den)

    __rmul__ = __mul__

    def __truediv__(self, other) -> RationalFunction:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        if other.num.is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return RationalFunction(self.num * other.den, self.den * other.num)

    def __eq__(self, other) -> bool:
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        return hash((self.num, self.den))

    def __repr__(self) -> str:
        return f"RationalFunction(({self.num}) / ({self.den}))"

    def __call__(self, x: Scalar) -> Fraction:
        return ratfun_eval(self, x)

    def derivative(self) -> RationalFunction:
        return RationalFunction(
            self.num.derivative() * self.den - self.num * self.den.derivative(),
            self.den * self.den,
        )

    def series(self, order: int) -> list[Fraction]:
        """Taylor coefficients at 0 for ``x**0 .. x**order``."""
        d0 = self.den[0]
        if d0 == 0:
            raise PoleError("denominator vanishes at 0; no power series expansion")
        out: list[Fraction] = []
        den = self.den.coeffs
        for k in range(order + 1):
            acc = self.num[k]
            for j in range(1, min(k, len(den) - 1) + 1):
                acc -= den[j] * out[k - j]
            out.append(acc / d0)
        return out


def ratfun_eval(f: RationalFunction, x: Scalar) -> Fraction:
    x = Fraction(x)
    dv = f.den(x)
    if dv == 0:
        raise PoleError(f"pole at x = {x}")
    return Fraction(f.num(x)) / dv


# -- truncated power series, coefficient lists indexed by degree -------------

def series_mul(a: Sequence[Fraction], b: Sequence[Fraction], order: int) -> list[Fraction]:
    out = [Fraction(0)] * (order + 1)
    for i, ai in enumerate(a[: order + 1]):
        if ai == 0:
            continue
        for j, bj in enumerate(b[: order + 1 - i]):
            out[i + j] += ai * bj
    return out


def series_inverse(a: Sequence[Fraction], order: int) -> list[Fraction]:
    if a[0] == 0:
        raise ZeroDivisionError("series with zero constant term is not invertible")
    out = [1 / Fraction(a[0])]
    for k in range(1, order + 1):
        acc = sum((a[j] * out[k - j] for j in range(1, min(k, len(a) - 1) + 1)), Fraction(0))
        out.append(-acc / a[0])
    return out


def series_log(a: Sequence[Fraction], order: int) -> list[Fraction]:
    """log of a series with constant term 1, via ``(log a)' = a' / a``."""
    if a[0] != 1:
        raise ValueError("series_log needs constant term 1")
    a = list(a) + [Fraction(0)] * max(0, order + 1 - len(a))
    deriv = [k * a[k] for k in range(1, order + 1)]
    quot = series_mul(deriv, series_inverse(a, order), order - 1) if order else []
    return [Fraction(0)] + [quot[k - 1] / k for k in range(1, order + 1)]


def series_exp(a: Sequence[Fraction], order: int) -> list[Fraction]:
    """exp of a series with zero constant term, via ``e' = a' e``."""
    if a and a[0] != 0:
        raise ValueError("series_exp needs zero constant term")
    a = list(a) + [Fraction(0)] * max(0, order + 1 - len(a))
    out = [Fraction(1)]
    for n in range(1, order + 1):
        acc = sum((k * a[k] * out[n - k] for k in range(1, n + 1)), Fraction(0))
        out.append(acc / n)
    return out


# -- certified bracketing ----------------------------------------------------

def _sign(v: Fraction) -> int:
    return (v > 0) - (v < 0)


@dataclass(frozen=True)
class CertifiedBracket:
    lo: Fraction
    hi: Fraction
    f_lo_sign: int
    f_hi_sign: int
    iterations: int = 0

    def __post_init__(self):
        if not self.lo < self.hi:
            raise ValueError("bracket needs lo < hi")
        if self.f_lo_sign * self.f_hi_sign >= 0:
            raise ValueError("bracket endpoint signs must differ")

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def midpoint(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, x) -> bool:
        return self.lo <= Fraction(x) <= self.hi


def certified_monotone_root(
    f: Callable[[Fraction], Fraction],
    target: Scalar,
    interval: tuple[Scalar, Scalar],
    tol: Scalar,
    max_iter: int = 10_000,
) -> CertifiedBracket:
    """Bisect ``f(x) - target`` on ``interval`` using exact comparisons only.

    ``f`` must be strictly monotone on the interval; only the endpoint signs
    are checked. Returns a bracket of width at most ``tol``.
    """
    lo, hi = (as_fraction(v) for v in interval)
    target = Fraction(target)
    tol = Fraction(tol)
    if tol <= 0:
        raise ValueError("tol must be positive")
    if not lo < hi:
        raise ValueError("interval must satisfy lo < hi")
    try:
        s_lo = _sign(f(lo) - target)
        s_hi = _sign(f(hi) - target)
    except PoleError as exc:
        raise NonFiniteEndpointError(str(exc)) from exc
    if s_lo == 0 or s_hi == 0 or s_lo == s_hi:
        raise NoSignChangeError(
            f"f - target has signs {s_lo}, {s_hi} at the endpoints; no certified sign change"
        )

    it = 0
    while hi - lo > tol:
        if it >= max_iter:
            raise ConvergenceError(f"bracket width {float(hi - lo):.3g} > tol after {it} bisections")
        it += 1
        mid = (lo + hi) / 2
        s_mid = _sign(f(mid) - target)
        if s_mid == 0:
            # exact root: a tol-wide bracket centred on it keeps both signs strict
            lo, hi = mid - tol / 2, mid + tol / 2
            s_lo, s_hi = _sign(f(lo) - target), _sign(f(hi) - target)
            break
        if s_mid == s_lo:
            lo = mid
        else:
            hi = mid
    return CertifiedBracket(lo, hi, s_lo, s_hi, it)


class InvariantViolation(RuntimeError):
    """An internal consistency check failed; the result must not be trusted."""

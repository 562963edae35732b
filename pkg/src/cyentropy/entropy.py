"""Categorical entropy of ``Phi = T_O o (- (x) O(-1))``.

For ``t`` real, ``h_t(Phi) = lambda`` is the unique positive solution of

    sum_{k >= 1} chi(O(k)) e^{-k lambda} = e^{(d-1) t}.

We work in ``x = e^{-lambda}`` in (0, 1), where the left side is the Hilbert
series ``S(x)``: a rational function, strictly increasing from 0 to infinity
on (0, 1). The root in ``x`` is bracketed with exact rational bisection and
converted to ``lambda`` only at the end.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional

from .geometry import VarietySpec, hilbert_polynomial
from .numerics import (
    CertifiedBracket,
    ConvergenceError,
    Polynomial,
    RationalFunction,
    certified_monotone_root,
)

INITIAL_EPS = Fraction(1, 2**20)
DEFAULT_TOL = Fraction(1, 2**64)


class SolverError(ValueError):
    pass


@dataclass(frozen=True)
class EntropyResult:
    """Solution of the entropy equation at one ``t``.

    ``x`` is exact and always lies inside ``bracket``; the bracket is usually
    narrower than one double ulp, so the float ``x_float`` may not.
    """

    t: float
    rhs: Fraction
    x: Fraction
    lam: float
    bracket: CertifiedBracket
    residual: float
    iterations: int
    polished: bool = False

    @property
    def x_float(self) -> float:
        return float(self.x)


@lru_cache(maxsize=None)
def power_sum_series(m: int) -> RationalFunction:
    """``sum_{k>=1} k^m x^k`` as a rational function, by applying ``x d/dx`` m times."""
    # sum k^m x^k = N_m(x) / (1-x)^{m+1},  N_m = x (N_{m-1}' (1-x) + m N_{m-1})
    x = Polynomial.x()
    one_minus_x = Polynomial([1, -1])
    num = x
    for j in range(1, m + 1):
        num = x * (num.derivative() * one_minus_x + num.scale(j))
    return RationalFunction(num, one_minus_x ** (m + 1))


def hilbert_series_closed_form(X: VarietySpec) -> RationalFunction:
    """``S(x) = sum_{k>=1} chi(O(k)) x^k`` in closed form."""
    return _hilbert_series(X.d, X.degree, X.mode, hilbert_polynomial(X).coeffs)


@lru_cache(maxsize=64)
def _hilbert_series(d, degree, mode, coeffs) -> RationalFunction:
    total = RationalFunction(0)
    for m, c in enumerate(coeffs):
        if c:
            total = total + power_sum_series(m) * c
    return total


def cy_closed_form(d: int) -> RationalFunction:
    """``(1 - x^{d+2}) / (1 - x)^{d+2} - 1``, the builtin Calabi-Yau Hilbert series."""
    n = d + 2
    return RationalFunction(1 - Polynomial.monomial(n), Polynomial([1, -1]) ** n) - 1


def entropy_rhs(X: VarietySpec, t: float) -> Fraction:
    """``e^{(d-1)t}`` as the exact rational value of its double approximation."""
    v = math.exp((X.d - 1) * t)
    if not math.isfinite(v) or v <= 0:
        raise SolverError(f"e^((d-1)t) is not a positive finite double at t = {t}")
    return Fraction(v)


def _initial_bracket(S: RationalFunction, rhs: Fraction, max_expand: int = 200) -> tuple[Fraction, Fraction]:
    lo, hi = INITIAL_EPS, 1 - INITIAL_EPS
    for _ in range(max_expand):
        if S(lo) < rhs:
            break
        lo = lo * INITIAL_EPS
    else:
        raise ConvergenceError(f"could not find a lower bracket endpoint for rhs = {float(rhs):.3g}")
    for _ in range(max_expand):
        if S(hi) > rhs:
            break
        hi = 1 - (1 - hi) * INITIAL_EPS
    else:
        raise ConvergenceError(f"could not find an upper bracket endpoint for rhs = {float(rhs):.3g}")
    return lo, hi


def _newton_polish(S: RationalFunction, dS: RationalFunction, rhs: float, bracket: CertifiedBracket) -> Optional[float]:
    x = float(bracket.midpoint)
    num, den = S.num, S.den
    dnum, dden = dS.num, dS.den
    for _ in range(3):
        fx = float(num(x)) / float(den(x)) - rhs
        fp = float(dnum(x)) / float(dden(x))
        if fp <= 0 or not math.isfinite(fx):
            return None
        x -= fx / fp
    if not bracket.lo <= Fraction(x) <= bracket.hi:
        return None
    return x


def solve_entropy(
    X: VarietySpec,
    t: float | None = 0.0,
    tol: Fraction = DEFAULT_TOL,
    certified_rhs: Fraction | None = None,
    max_iter: int = 10_000,
    polish: bool = True,
) -> EntropyResult:
    """Solve ``S(x) = e^{(d-1)t}`` for ``x = e^{-lambda}``.

    With ``certified_rhs`` the right side is taken verbatim as an exact
    rational and ``t`` is reported as ``log(rhs)/(d-1)``. Otherwise the right
    side is the double ``exp((d-1)t)``, i.e. exact up to one ulp.

    The certified bracket on ``x`` has width at most ``tol * lo0``, where
    ``lo0 <= 2^-20`` is the initial lower endpoint, so ``tol`` bounds the
    relative error of ``x`` even when ``x`` is tiny (very negative ``t``).
    """
    tol = Fraction(tol)
    if tol <= 0:
        raise SolverError("tol must be positive")
    if certified_rhs is not None:
        rhs = Fraction(certified_rhs)
        if rhs <= 0:
            raise SolverError(f"rhs must be positive, got {rhs}")
        t = math.log(rhs) / (X.d - 1)
    else:
        if t is None:
            raise SolverError("need either t or certified_rhs")
        rhs = entropy_rhs(X, t)

    S = hilbert_series_closed_form(X)
    lo, hi = _initial_bracket(S, rhs)
    bracket = certified_monotone_root(S, rhs, (lo, hi), tol * lo, max_iter=max_iter)
    if bracket.f_lo_sign != -1:
        raise SolverError("Hilbert series is not increasing on the bracket")

    x = bracket.midpoint
    polished = False
    if polish:
        px = _newton_polish(S, S.derivative(), float(rhs), bracket)
        if px is not None:
            x, polished = Fraction(px), True
    if not 0 < x < 1:
        raise ConvergenceError(f"x = {float(x)} left (0, 1); tolerance too coarse for this rhs")
    xf = float(x)
    lam = -math.log(xf) if xf > 1e-300 else math.log(x.denominator) - math.log(x.numerator)
    if lam <= 0:
        raise ConvergenceError(f"entropy {lam} is not positive")
    residual = abs(float(S(x) - rhs))
    return EntropyResult(
        t=float(t),
        rhs=rhs,
        x=x,
        lam=lam,
        bracket=bracket,
        residual=residual,
        iterations=bracket.iterations,
        polished=polished,
    )


# -- the algebraic curve in (u, y) = (e^t, e^lambda) -------------------------

@dataclass(frozen=True)
class CurvePolynomial:
    """Integer polynomial ``F(u, y)`` stored as ``{(i, j): c}`` for ``c u^i y^j``."""

    coeffs: dict

    def __call__(self, u, y):
        return sum(c * u**i * y**j for (i, j), c in self.coeffs.items())

    def partial_u(self) -> CurvePolynomial:
        return CurvePolynomial({(i - 1, j): i * c for (i, j), c in self.coeffs.items() if i})

    def partial_y(self) -> CurvePolynomial:
        return CurvePolynomial({(i, j - 1): j * c for (i, j), c in self.coeffs.items() if j})

    def at_u(self, u) -> Polynomial:
        """Univariate polynomial ``y -> F(u, y)``."""
        deg = max((j for _, j in self.coeffs), default=0)
        out = [Fraction(0)] * (deg + 1)
        for (i, j), c in self.coeffs.items():
            out[j] += c * Fraction(u) ** i
        return Polynomial(out)

    def normalized(self) -> CurvePolynomial:
        """Divide out the integer content and make the top monomial's coefficient positive."""
        g = 0
        for c in self.coeffs.values():
            g = math.gcd(g, int(c))
        lead = self.coeffs[max(self.coeffs, key=lambda ij: (ij[1], ij[0]))]
        sign = 1 if lead > 0 else -1
        return CurvePolynomial({k: sign * int(c) // g for k, c in self.coeffs.items()})

    def terms(self) -> list[tuple[int, int, int]]:
        return sorted((i, j, int(c)) for (i, j), c in self.coeffs.items())

    def __str__(self) -> str:
        def power(var, e):
            return "" if e == 0 else var if e == 1 else f"{var}^{e}"

        parts = []
        for i, j, c in sorted(self.terms(), key=lambda t: (-t[1], -t[0])):
            mono = "*".join(p for p in (power("u", i), power("y", j)) if p)
            sign = "-" if c < 0 else "+"
            body = mono if mono and abs(c) == 1 else (f"{abs(c)}*{mono}" if mono else f"{abs(c)}")
            parts.append(f"{sign} {body}")
        text = " ".join(parts)
        return text[2:] if text.startswith("+ ") else "-" + text[2:]


def _bivariate_from(poly_y: Polynomial, u_power: int = 0, scale: int = 1) -> dict:
    return {(u_power, j): scale * c for j, c in enumerate(poly_y.coeffs) if c}


def _add_into(acc: dict, extra: dict) -> dict:
    for k, v in extra.items():
        acc[k] = acc.get(k, 0) + v
        if acc[k] == 0:
            del acc[k]
    return acc


def curve_from_series(S: RationalFunction, d: int) -> CurvePolynomial:
    """Clear denominators of ``S(1/y) = u^{d-1}`` and return the integer curve."""
    m = max(S.num.degree or 0, S.den.degree or 0)
    num_y = S.num.reversed(m)
    den_y = S.den.reversed(m)
    lcm = 1
    for c in num_y.coeffs + den_y.coeffs:
        lcm = lcm * c.denominator // math.gcd(lcm, c.denominator)
    coeffs: dict = {}
    _add_into(coeffs, _bivariate_from(num_y, 0, lcm))
    _add_into(coeffs, _bivariate_from(den_y, d - 1, -lcm))
    return CurvePolynomial({k: int(v) for k, v in coeffs.items()}).normalized()


def entropy_curve(X: VarietySpec) -> CurvePolynomial:
    """Curve ``F(e^t, e^{h_t}) = 0``.

    Builtin mode: ``F = y^{d+2} - 1 - (1 + u^{d-1}) (y-1)^{d+2}``. It always
    has the spurious root ``y = 1`` (from clearing ``(y-1)^{d+2}``); the
    entropy is the unique real root with ``y > 1``.
    """
    if not X.is_builtin:
        return curve_from_series(hilbert_series_closed_form(X), X.d)
    n = X.d + 2
    y = Polynomial.x()
    ym1n = (y - 1) ** n
    coeffs: dict = {}
    _add_into(coeffs, _bivariate_from(y**n - 1 - ym1n))
    _add_into(coeffs, _bivariate_from(ym1n, X.d - 1, -1))
    return CurvePolynomial({k: int(v) for k, v in coeffs.items()})


def curve_residual(F: CurvePolynomial, t: float, lam: float) -> float:
    """``|F(e^t, e^lambda)| / |grad F|``, evaluated exactly at the double inputs."""
    u, y = Fraction(math.exp(t)), Fraction(math.exp(lam))
    val = F(u, y)
    gu, gy = F.partial_u()(u, y), F.partial_y()(u, y)
    grad = math.hypot(float(gu), float(gy))
    if grad == 0:
        return abs(float(val))
    return abs(float(val)) / grad


# -- sweeps ------------------------------------------------------------------

@dataclass(frozen=True)
class SweepRow:
    index: int
    result: EntropyResult
    curve_residual: float


def _sweep_point(args):
    X, index, t, tol = args
    try:
        res = solve_entropy(X, t, tol=tol)
    except (SolverError, ConvergenceError) as exc:
        raise type(exc)(f"grid point {index} (t = {t}): {exc}") from exc
    return SweepRow(index, res, curve_residual(entropy_curve(X), t, res.lam))


def default_workers() -> int:
    raw = os.environ.get("CY_ENTROPY_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def sweep(
    X: VarietySpec,
    t_min: float,
    t_max: float,
    steps: int,
    tol: Fraction = DEFAULT_TOL,
    workers: int | None = None,
) -> list[SweepRow]:
    """Solve on the uniform grid of ``steps`` points in ``[t_min, t_max]``.

    Grid points are independent; with ``workers > 1`` they run in a process
    pool. Rows always come back in grid order.
    """
    if steps < 2:
        raise SolverError("sweep needs at least 2 grid points")
    if not t_min < t_max:
        raise SolverError("sweep needs t_min < t_max")
    grid = [t_min + (t_max - t_min) * i / (steps - 1) for i in range(steps)]
    jobs = [(X, i, t, tol) for i, t in enumerate(grid)]
    workers = default_workers() if workers is None else workers
    if workers <= 1:
        return [_sweep_point(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(_sweep_point, jobs))

"""Dimension-counting recursions behind the entropy formula.

``B[n][k]`` is the graded count of ``Hom^*(O, Phi^n(G') (x) O(-k))`` with the
shift variable folded into ``s = e^{-(d-1)t}``. It obeys

    B[0][k] = a_k,    B[n][k] = B[n-1][k+1] + a_k s B[n-1][1],

and ``C_n = s B[n][1]`` satisfies the renewal recursion

    C_n = a'_1 C_{n-1} + ... + a'_n C_0 + a'_{n+1},    a'_k = a_k s.

Both are checked here against brute-force sums over ordered compositions,
and the growth rate of ``C_n`` is compared with the entropy solver.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterator, Sequence, Union

import numpy as np
from scipy.special import logsumexp

from .geometry import VarietySpec, a_sequence
from .numerics import Polynomial

SValue = Union[int, Fraction, float]

EXACT_C_CAP = 200
COMPOSITION_CAP = 20
PARTITION_CAP = 12
SYMBOLIC_N_CAP = 400


class ResourceCapError(ValueError):
    pass


class InsufficientDataError(ValueError):
    pass


def s_from_t(d: int, t: float) -> float:
    """``s = e^{-(d-1)t}``."""
    return math.exp(-(d - 1) * t)


def _check_s(s) -> None:
    if s is not None and not s > 0:
        raise ValueError(f"s must be positive, got {s}")


@lru_cache(maxsize=32)
def _a_cached(X: VarietySpec, k_max: int) -> tuple[int, ...]:
    return tuple(a_sequence(X, k_max))


def a_values(X: VarietySpec, k_max: int) -> list[int]:
    """``[0, a_1, ..., a_{k_max}]``; index 0 is padding so that ``a[k] = a_k``."""
    if X.hilbert is None:
        return [0, *_a_cached(X, k_max)]
    return [0, *a_sequence(X, k_max)]


@dataclass
class BTable:
    """Rows ``B[n][k]`` for ``0 <= n <= n_max``.

    Row ``n`` holds ``k = 1 .. k_max + n_max - n``; index 0 of every row is
    unused. Entries are polynomials in ``s`` when ``s`` is None, else exact
    values (Fraction) or floats.
    """

    n_max: int
    k_max: int
    s: SValue | None
    rows: list[list] = field(repr=False)

    @property
    def symbolic(self) -> bool:
        return self.s is None

    def __getitem__(self, nk: tuple[int, int]):
        n, k = nk
        if k < 1:
            raise IndexError("k starts at 1")
        return self.rows[n][k]

    def value(self, n: int, k: int, s: SValue):
        """Entry evaluated at ``s`` (symbolic tables only need this)."""
        entry = self[n, k]
        return entry(s) if self.symbolic else entry

    def k_range(self, n: int) -> int:
        return len(self.rows[n]) - 1


def b_table(
    X: VarietySpec,
    n_max: int,
    k_max: int,
    s: SValue | None = None,
    max_cells: int = 500_000,
) -> BTable:
    """Fill ``B[n][k]`` from the seed row ``B[0][k] = a_k``.

    Each step consumes ``k+1`` from the previous row, so row 0 is built out
    to ``k_max + n_max``.
    """
    if n_max < 0 or k_max < 1:
        raise ValueError("need n_max >= 0 and k_max >= 1")
    _check_s(s)
    width = k_max + n_max
    if (n_max + 1) * width > max_cells:
        raise ResourceCapError(f"B table of {(n_max + 1) * width} cells exceeds cap {max_cells}")
    if s is None and n_max > SYMBOLIC_N_CAP:
        raise ResourceCapError(f"symbolic B table limited to n_max <= {SYMBOLIC_N_CAP}")
    a = a_values(X, width)
    if s is None:
        seed = [None] + [Polynomial.constant(a[k]) for k in range(1, width + 1)]
        shift = [None] + [Polynomial([0, a[k]]) for k in range(1, width + 1)]
    else:
        seed = [None] + [Fraction(a[k]) if not isinstance(s, float) else float(a[k]) for k in range(1, width + 1)]
        shift = [None] + [a[k] * s for k in range(1, width + 1)]

    rows = [seed]
    for n in range(1, n_max + 1):
        prev = rows[-1]
        b1 = prev[1]
        row = [None]
        for k in range(1, width - n + 1):
            row.append(prev[k + 1] + shift[k] * b1)
        rows.append(row)
    return BTable(n_max=n_max, k_max=k_max, s=s, rows=rows)


@dataclass(frozen=True)
class GrowthTable:
    """Log-space view of ``C_0 .. C_N``.

    ``lambda_ratio[i]`` and ``lambda_cesaro[i]`` belong to ``n = i + 1``:
    ``log(C_n / C_{n-1})`` and ``log(C_n) / n``. ``exact`` carries the
    rational values when they were computed exactly.
    """

    log_C: tuple[float, ...]
    lambda_ratio: tuple[float, ...]
    lambda_cesaro: tuple[float, ...]
    exact: tuple[Fraction, ...] | None = None

    def __post_init__(self):
        if len(self.lambda_ratio) != len(self.log_C) - 1 or len(self.lambda_cesaro) != len(self.log_C) - 1:
            raise ValueError("inconsistent growth table lengths")
        if not all(math.isfinite(v) for v in (*self.log_C, *self.lambda_ratio, *self.lambda_cesaro)):
            raise ValueError("growth table contains non-finite entries")

    @classmethod
    def from_logs(cls, log_C: Sequence[float], exact=None) -> GrowthTable:
        log_C = tuple(float(v) for v in log_C)
        ratio = tuple(log_C[n] - log_C[n - 1] for n in range(1, len(log_C)))
        cesaro = tuple(log_C[n] / n for n in range(1, len(log_C)))
        return cls(log_C, ratio, cesaro, None if exact is None else tuple(exact))

    @classmethod
    def from_values(cls, values: Sequence) -> GrowthTable:
        """Build from positive values, exact or floating."""
        logs = [_log(v) for v in values]
        exact = list(values) if all(isinstance(v, (int, Fraction)) for v in values) else None
        return cls.from_logs(logs, exact)

    def __len__(self) -> int:
        return len(self.log_C)


def _log(v) -> float:
    if isinstance(v, Fraction):
        return _log(v.numerator) - _log(v.denominator)
    if v <= 0:
        raise ValueError(f"log of non-positive value {v}")
    return math.log(v)


def c_sequence(X: VarietySpec, s: SValue, n_max: int, mode: str = "log-space") -> GrowthTable:
    """``C_0 .. C_{n_max}`` from the renewal recursion.

    ``exact`` mode uses rationals and is capped at ``n_max <= 200``.
    ``log-space`` mode keeps ``log C_n`` and combines the convolution terms
    with a log-sum-exp, so no intermediate leaves double range; the relative
    error of ``C_n`` stays below ``n * 2^-50``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    _check_s(s)
    a = a_values(X, n_max + 1)
    if mode == "exact":
        if n_max > EXACT_C_CAP:
            raise ResourceCapError(f"exact C sequence limited to n_max <= {EXACT_C_CAP}")
        s = Fraction(s)
        ap = [None] + [a[k] * s for k in range(1, n_max + 2)]
        C: list[Fraction] = []
        for n in range(n_max + 1):
            acc = ap[n + 1]
            for j in range(1, n + 1):
                acc += ap[j] * C[n - j]
            C.append(acc)
        return GrowthTable.from_values(C)
    if mode != "log-space":
        raise ValueError(f"unknown mode {mode!r}")

    log_s = _log(s) if isinstance(s, Fraction) else math.log(s)
    log_ap = np.log(np.array(a[1:], dtype=float)) + log_s  # log_ap[j-1] = log a'_j
    log_c = np.empty(n_max + 1)
    log_c[0] = log_ap[0]
    for n in range(1, n_max + 1):
        terms = np.empty(n + 1)
        terms[:n] = log_ap[:n] + log_c[n - 1 :: -1]
        terms[n] = log_ap[n]
        log_c[n] = logsumexp(terms)
    return GrowthTable.from_logs(log_c)


def compositions(m: int) -> Iterator[tuple[int, ...]]:
    """All ordered compositions of ``m`` (tuples of positive ints summing to m)."""
    if m <= 0:
        return
    for mask in range(1 << (m - 1)):
        parts = []
        run = 1
        for bit in range(m - 1):
            if mask >> bit & 1:
                parts.append(run)
                run = 1
            else:
                run += 1
        parts.append(run)
        yield tuple(parts)


def composition_oracle(X: VarietySpec, s: SValue, n: int) -> Fraction:
    """``C_n`` by summing ``prod a'_{i_j}`` over every ordered composition of n+1."""
    if n > COMPOSITION_CAP:
        raise ResourceCapError(f"composition oracle limited to n <= {COMPOSITION_CAP}")
    s = Fraction(s)
    a = a_values(X, n + 1)
    total = Fraction(0)
    for parts in compositions(n + 1):
        term = Fraction(1)
        for i in parts:
            term *= a[i] * s
        total += term
    return total


def partition_sum(X: VarietySpec, m: int, k: int) -> Polynomial:
    """``P_{m,k}``: sum over compositions of m with first part >= k of ``prod a_i * s^q``."""
    a = a_values(X, max(m, 1))
    by_power: dict[int, int] = {}
    for parts in compositions(m):
        if parts[0] < k:
            continue
        prod = 1
        for i in parts:
            prod *= a[i]
        q = len(parts)
        by_power[q] = by_power.get(q, 0) + prod
    top = max(by_power, default=-1)
    return Polynomial([by_power.get(q, 0) for q in range(top + 1)])


def partition_formula(X: VarietySpec, n: int, k: int) -> Polynomial:
    """``a_{n+k} + sum_{j=1}^{n} a_j P_{n+k-j, k}`` as a polynomial in s."""
    if n > PARTITION_CAP:
        raise ResourceCapError(f"partition formula limited to n <= {PARTITION_CAP}")
    a = a_values(X, n + k)
    total = Polynomial.constant(a[n + k])
    for j in range(1, n + 1):
        total = total + partition_sum(X, n + k - j, k).scale(a[j])
    return total


def verify_partition_formula(X: VarietySpec, n: int, k: int, table: BTable | None = None) -> bool:
    """Compare the ordered-partition closed form with the recursive ``B[n][k]``."""
    if table is None or not table.symbolic or table.n_max < n or table.k_range(n) < k:
        table = b_table(X, n, k)
    return partition_formula(X, n, k) == table[n, k]


@dataclass(frozen=True)
class GrowthEstimate:
    lambda_hat: float
    cesaro: float
    tail_oscillation: float
    n: int


def growth_estimate(table: GrowthTable, tail: int = 10) -> GrowthEstimate:
    """Entropy estimate from the last ratio ``log(C_N / C_{N-1})``.

    Ratios converge geometrically for renewal sequences, Cesaro means only
    like 1/n, so the ratio is the headline number; ``tail_oscillation`` is the
    spread of the last ``tail`` ratios.
    """
    if len(table) < 10:
        raise InsufficientDataError(f"need at least 10 terms, got {len(table)}")
    last = table.lambda_ratio[-tail:]
    return GrowthEstimate(
        lambda_hat=table.lambda_ratio[-1],
        cesaro=table.lambda_cesaro[-1],
        tail_oscillation=max(last) - min(last),
        n=len(table) - 1,
    )

"""Cohomological action of ``Phi = T_O o (- (x) O(-1))`` and the spectral test.

Classes live in the span of ``1, H, ..., H^d``. The rest of ``H^*(X)``
(primitive middle cohomology, odd cohomology) is fixed by cupping with
``e^{-H}`` and is orthogonal to ``v(O)``, so ``Phi`` acts on it as the
identity; the full spectral radius is ``max(1, rho(block))``. Reports state
this reduction explicitly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .entropy import solve_entropy
from .geometry import VarietySpec, characteristic_classes, euler_characteristic, exp_class
from .numerics import InvariantViolation, Polynomial, series_mul

KT_TOLERANCE = 1e-8

BLOCK_REDUCTION_NOTE = (
    "only the H-generated block span(1, H, ..., H^d) is modelled; Phi acts as the "
    "identity on primitive and odd cohomology (e^{-H} fixes them, and they pair to "
    "zero with v(O)), so rho(Phi_H*) = max(1, rho(block))"
)

Matrix = tuple[tuple[Fraction, ...], ...]


@dataclass(frozen=True)
class CohClass:
    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    @property
    def dim(self) -> int:
        return len(self.coords) - 1

    def __getitem__(self, i: int) -> Fraction:
        return self.coords[i]

    def __add__(self, other: CohClass) -> CohClass:
        return CohClass(tuple(a + b for a, b in zip(self.coords, other.coords, strict=True)))

    def __sub__(self, other: CohClass) -> CohClass:
        return CohClass(tuple(a - b for a, b in zip(self.coords, other.coords, strict=True)))

    def __rmul__(self, c) -> CohClass:
        return CohClass(tuple(c * a for a in self.coords))

    def dual(self) -> CohClass:
        return CohClass(tuple((-1) ** j * c for j, c in enumerate(self.coords)))


@dataclass(frozen=True)
class ActionMatrix:
    name: str
    rows: Matrix

    @classmethod
    def from_rows(cls, name: str, rows) -> ActionMatrix:
        return cls(name, tuple(tuple(Fraction(v) for v in r) for r in rows))

    @classmethod
    def identity(cls, size: int, name: str = "identity") -> ActionMatrix:
        return cls.from_rows(name, [[int(i == j) for j in range(size)] for i in range(size)])

    @property
    def size(self) -> int:
        return len(self.rows)

    def __matmul__(self, other: ActionMatrix) -> ActionMatrix:
        n = self.size
        cols = list(zip(*other.rows))
        out = [[sum((a * b for a, b in zip(self.rows[i], cols[j])), Fraction(0)) for j in range(n)] for i in range(n)]
        return ActionMatrix.from_rows(f"{self.name}*{other.name}", out)

    def apply(self, v: CohClass) -> CohClass:
        return CohClass(tuple(sum((a * b for a, b in zip(row, v.coords)), Fraction(0)) for row in self.rows))

    def power(self, k: int) -> ActionMatrix:
        if k < 0:
            raise ValueError("negative matrix power")
        name = f"{self.name}^{k}"
        result = ActionMatrix.identity(self.size)
        base = self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return ActionMatrix(name, result.rows)

    def is_identity(self) -> bool:
        return all(v == (i == j) for i, row in enumerate(self.rows) for j, v in enumerate(row))

    def __eq__(self, other) -> bool:
        return isinstance(other, ActionMatrix) and self.rows == other.rows

    def __hash__(self) -> int:
        return hash(self.rows)

    def __sub__(self, other: ActionMatrix) -> ActionMatrix:
        return ActionMatrix.from_rows(
            f"{self.name}-{other.name}",
            [[a - b for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)],
        )

    def is_zero(self) -> bool:
        return all(v == 0 for row in self.rows for v in row)

    def determinant(self) -> Fraction:
        return charpoly(self).coeffs[0] * (-1) ** self.size

    def to_float(self) -> np.ndarray:
        return np.array([[float(v) for v in r] for r in self.rows])


def charpoly(M: ActionMatrix) -> Polynomial:
    """Monic ``det(y I - M)`` by the Faddeev-LeVerrier recursion (exact over Q)."""
    n = M.size
    coeffs = [Fraction(0)] * (n + 1)
    coeffs[n] = Fraction(1)
    Mk = ActionMatrix.from_rows("0", [[0] * n for _ in range(n)])
    for k in range(1, n + 1):
        # M_k = M (M_{k-1} + c_{n-k+1} I),  c_{n-k} = -tr(M_k) / k
        shifted = ActionMatrix.from_rows(
            "tmp",
            [[Mk.rows[i][j] + (coeffs[n - k + 1] if i == j else 0) for j in range(n)] for i in range(n)],
        )
        Mk = M @ shifted
        coeffs[n - k] = -sum((Mk.rows[i][i] for i in range(n)), Fraction(0)) / k
    return Polynomial(coeffs)


def mukai_vector(X: VarietySpec, k: int) -> CohClass:
    """``v(O(k)) = e^{kH} sqrt(td X)``."""
    X.require_builtin("Mukai vectors")
    sqrt_td = characteristic_classes(X).sqrt_todd
    return CohClass(tuple(series_mul(exp_class(k, X.d), sqrt_td, X.d)))


def mukai_pairing(X: VarietySpec, v: CohClass, w: CohClass) -> Fraction:
    """``<v, w> = int v^dual . w``, normalized so ``<v(O(a)), v(O(b))> = chi(O(b-a))``."""
    d = X.d
    vd = v.dual()
    return X.top_intersection * sum((vd[j] * w[d - j] for j in range(d + 1)), Fraction(0))


def gram_matrix(X: VarietySpec) -> ActionMatrix:
    d, n = X.d, X.top_intersection
    return ActionMatrix.from_rows(
        "gram", [[(-1) ** i * n if i + j == d else 0 for j in range(d + 1)] for i in range(d + 1)]
    )


def tensor_matrix(d: int, k: int = -1) -> ActionMatrix:
    """Cup product with ``e^{kH}``: lower-triangular, entries ``k^{i-j} / (i-j)!``."""
    return ActionMatrix.from_rows(
        f"tensor(O({k}))",
        [[Fraction(k) ** (i - j) / math.factorial(i - j) if i >= j else 0 for j in range(d + 1)] for i in range(d + 1)],
    )


def twist_matrix(X: VarietySpec) -> ActionMatrix:
    """``x -> x - <v(O), x> v(O)``, the cohomological spherical twist by O."""
    v = mukai_vector(X, 0)
    d = X.d
    rows = []
    for i in range(d + 1):
        row = []
        for j in range(d + 1):
            e_j = CohClass(tuple(int(m == j) for m in range(d + 1)))
            row.append(int(i == j) - mukai_pairing(X, v, e_j) * v[i])
        rows.append(row)
    return ActionMatrix.from_rows("twist", rows)


def _check_conventions(X: VarietySpec, twist: ActionMatrix) -> None:
    v0 = mukai_vector(X, 0)
    for a, b in ((0, 1), (1, 0), (0, 0), (2, -1)):
        lhs = mukai_pairing(X, mukai_vector(X, a), mukai_vector(X, b))
        if lhs != euler_characteristic(X, b - a):
            raise InvariantViolation(f"Mukai pairing <v(O({a})), v(O({b}))> = {lhs} != chi(O({b - a}))")
    if twist.apply(v0) != twist_sign(X.d) * v0:
        raise InvariantViolation("twist does not send v(O) to (-1)^(1-d) v(O)")


def twist_sign(d: int) -> int:
    """Sign of ``T_O`` on ``v(O)``: ``T_O(O) = O[1-d]`` so it is ``(-1)^(1-d)``."""
    return -1 if d % 2 == 0 else 1


@dataclass(frozen=True)
class PhiAction:
    twist: ActionMatrix
    tensor: ActionMatrix
    phi: ActionMatrix


def phi_action_matrix(X: VarietySpec) -> PhiAction:
    """Matrices of ``T_O``, ``- (x) O(-1)`` and ``Phi`` (tensor applied first)."""
    X.require_builtin("cohomological actions")
    twist = twist_matrix(X)
    _check_conventions(X, twist)
    tensor = tensor_matrix(X.d, -1)
    phi = ActionMatrix("phi", (twist @ tensor).rows)
    return PhiAction(twist=twist, tensor=tensor, phi=phi)


@dataclass(frozen=True)
class SpectralReport:
    char_poly: Polynomial
    char_poly_ints: tuple[int, ...]
    rho: float
    eigen_moduli: tuple[float, ...]
    quasi_unipotent: bool
    order_checked: int


def spectral_analysis(M: ActionMatrix, order_to_check: int) -> SpectralReport:
    """Exact characteristic polynomial, eigenvalue moduli and the ``M^order = I`` test.

    When ``M^order = I`` holds exactly, every eigenvalue is a root of unity
    and ``rho`` is reported as exactly 1 regardless of floating roots.
    """
    cp = charpoly(M)
    ints = tuple(cp.content_normalized())
    quasi = M.power(order_to_check).is_identity()
    roots = np.roots([float(c) for c in reversed(cp.coeffs)])
    moduli = tuple(sorted((float(abs(r)) for r in roots), reverse=True))
    cauchy = 1 + max(abs(c / cp.leading) for c in cp.coeffs[:-1]) if cp.degree else 1
    if moduli and moduli[0] > float(cauchy) * (1 + 1e-9):
        raise InvariantViolation(f"eigenvalue modulus {moduli[0]} exceeds Cauchy bound {float(cauchy)}")
    if quasi:
        moduli = tuple(1.0 for _ in moduli)
        rho = 1.0
    else:
        rho = moduli[0] if moduli else 0.0
    return SpectralReport(
        char_poly=cp,
        char_poly_ints=ints,
        rho=rho,
        eigen_moduli=moduli,
        quasi_unipotent=quasi,
        order_checked=order_to_check,
    )


@dataclass(frozen=True)
class CounterexampleReport:
    dim: int
    degree: int
    h0: float
    rho: float
    log_rho_full: float
    kt_holds: bool
    quasi_unipotent: bool
    char_poly: tuple[int, ...]
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "dim": self.dim,
            "degree": self.degree,
            "char_poly": list(self.char_poly),
            "rho": self.rho,
            "quasi_unipotent": self.quasi_unipotent,
            "h0": self.h0,
            "log_rho": self.log_rho_full,
            "kt_holds": self.kt_holds,
            "detail": self.detail,
        }


def counterexample_report(X: VarietySpec) -> CounterexampleReport:
    """Compare ``h_0(Phi)`` with ``log rho(Phi_H*)``.

    The two agree for odd d and differ for even d, where ``Phi`` has finite
    order ``d+2`` on cohomology but positive entropy.
    """
    action = phi_action_matrix(X)
    spec = spectral_analysis(action.phi, X.d + 2)
    h0 = solve_entropy(X, 0.0).lam
    log_rho = math.log(max(1.0, spec.rho))
    twist_sq = (action.twist @ action.twist).is_identity()
    detail = {
        "assumption": BLOCK_REDUCTION_NOTE,
        "twist_squared_is_identity": twist_sq,
        "order_checked": spec.order_checked,
        "gap": h0 - log_rho,
    }
    return CounterexampleReport(
        dim=X.d,
        degree=X.degree,
        h0=h0,
        rho=spec.rho,
        log_rho_full=log_rho,
        kt_holds=abs(h0 - log_rho) <= KT_TOLERANCE,
        quasi_unipotent=spec.quasi_unipotent,
        char_poly=spec.char_poly_ints,
        detail=detail,
    )


def class_from_list(values: Sequence) -> CohClass:
    return CohClass(tuple(Fraction(v) for v in values))

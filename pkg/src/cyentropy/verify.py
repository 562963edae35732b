"""One-shot cross-module verification suite.

Every check is deterministic given the seed; the report carries no timings so
repeated runs are byte-identical.
"""

from __future__ import annotations

import random
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable

from . import cohomology, dynamics, entropy, geometry
from .numerics import InvariantViolation

SUPPORTED_DIMS = range(3, 9)
DEFAULT_BUDGET = 60.0


@dataclass
class CheckResult:
    name: str
    dim: int
    passed: bool
    detail: str

    def to_json(self) -> dict:
        return {"name": self.name, "dim": self.dim, "passed": self.passed, "detail": self.detail}


@dataclass
class VerifyReport:
    seed: int
    dims: list[int]
    checks: list[CheckResult] = field(default_factory=list)
    complete: bool = True

    @property
    def passed(self) -> bool:
        return self.complete and all(c.passed for c in self.checks)

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "dims": self.dims,
            "complete": self.complete,
            "passed": self.passed,
            "n_checks": len(self.checks),
            "n_failed": sum(not c.passed for c in self.checks),
            "checks": [c.to_json() for c in self.checks],
        }

    def to_text(self) -> str:
        lines = [f"{'PASS' if c.passed else 'FAIL'}  d={c.dim}  {c.name}: {c.detail}" for c in self.checks]
        if not self.complete:
            lines.append("INCOMPLETE  time budget exhausted; remaining checks skipped")
        lines.append(f"{'ALL PASSED' if self.passed else 'FAILED'} ({len(self.checks)} checks, seed {self.seed})")
        return "\n".join(lines) + "\n"


# -- individual checks; each returns (passed, detail) ------------------------

def check_chi_routes(X, rng):
    bad = [k for k in range(-10, 101) if geometry.euler_characteristic(X, k) != geometry.euler_characteristic_hrr(X, k)]
    return not bad, f"binomial vs HRR on k in [-10, 100]; mismatches at {bad[:5]}" if bad else "binomial == HRR on k in [-10, 100]"


def check_hilbert_series(X, rng):
    S = entropy.hilbert_series_closed_form(X)
    if S != entropy.cy_closed_form(X.d):
        return False, "generic Hilbert series differs from (1-x^n)/(1-x)^n - 1"
    coeffs = S.series(200)
    bad = [k for k in range(1, 201) if coeffs[k] != geometry.euler_characteristic(X, k)]
    ok = not bad and coeffs[0] == 0
    return ok, "series coefficients match chi(O(k)) for k <= 200" if ok else f"mismatch at k = {bad[:5]}"


def check_solver_random_t(X, rng):
    S = entropy.hilbert_series_closed_form(X)
    ts = [rng.uniform(-5, 5) for _ in range(20)]
    for t in ts:
        res = entropy.solve_entropy(X, t)
        b = res.bracket
        if not (res.lam > 0 and S(b.lo) < res.rhs < S(b.hi)):
            return False, f"t = {t!r}: lambda = {res.lam!r}, bracket does not straddle rhs"
    return True, f"lambda > 0 and exact straddle at {len(ts)} random t in [-5, 5]"


def check_curve_sweep(X, rng):
    rows = entropy.sweep(X, -2.0, 2.0, 21)
    worst = max(r.curve_residual for r in rows)
    lams = [r.result.lam for r in rows]
    decreasing = all(a > b for a, b in zip(lams, lams[1:]))
    ok = worst <= 1e-8 and decreasing and all(v > 0 for v in lams)
    return ok, f"max normalized |F(e^t, e^lambda)| = {worst:.3e}; strictly decreasing: {decreasing}"


def check_recursions(X, rng):
    for s in (Fraction(1), Fraction(3, 7)):
        table = dynamics.b_table(X, 60, 1, s)
        C = dynamics.c_sequence(X, s, 60, mode="exact").exact
        bad = [n for n in range(61) if C[n] != s * table[n, 1]]
        if bad:
            return False, f"C_n != s B_(n,1) at s = {s}, n = {bad[:5]}"
        for n in range(11):
            if dynamics.composition_oracle(X, s, n) != C[n]:
                return False, f"composition oracle differs at s = {s}, n = {n}"
    return True, "C_n = s B_(n,1) for n <= 60 and composition oracle for n <= 10, s in {1, 3/7}"


def check_partition_formula(X, rng):
    if X.d > 5:
        return True, "skipped for d > 5"
    table = dynamics.b_table(X, 8, 4)
    bad = [(n, k) for n in range(9) for k in range(1, 5) if not dynamics.verify_partition_formula(X, n, k, table)]
    return not bad, "ordered-partition formula equals recursion for n <= 8, k <= 4" if not bad else f"fails at {bad[:5]}"


def check_growth_rate(X, rng):
    lam = entropy.solve_entropy(X, 0.0).lam
    est = dynamics.growth_estimate(dynamics.c_sequence(X, 1, 2000))
    err = abs(est.lambda_hat - lam)
    return err <= 1e-6, f"|log(C_2000/C_1999) - lambda| = {err:.3e}"


def check_pairing(X, rng):
    vs = {a: cohomology.mukai_vector(X, a) for a in range(-5, 6)}
    for a in vs:
        for b in vs:
            if cohomology.mukai_pairing(X, vs[a], vs[b]) != geometry.euler_characteristic(X, b - a):
                return False, f"<v(O({a})), v(O({b}))> != chi(O({b - a}))"
    return True, "<v(O(a)), v(O(b))> = chi(O(b-a)) for |a|, |b| <= 5"


def check_twist(X, rng):
    act = cohomology.phi_action_matrix(X)
    v0 = cohomology.mukai_vector(X, 0)
    if act.twist.apply(v0) != cohomology.twist_sign(X.d) * v0:
        return False, "twist v(O) != (-1)^(1-d) v(O)"
    ident = cohomology.ActionMatrix.identity(X.d + 1)
    if X.d % 2 == 0:
        ok = (act.twist @ act.twist).is_identity()
        return ok, f"twist^2 = I: {ok}"
    diff = act.twist - ident
    ok = (diff @ diff).is_zero()
    return ok, f"(twist - I)^2 = 0: {ok}"


def check_kikuta_takahashi(X, rng):
    rep = cohomology.counterexample_report(X)
    if X.d % 2 == 0:
        ok = rep.quasi_unipotent and rep.rho == 1.0 and rep.h0 > 0 and not rep.kt_holds
        return ok, f"phi^{X.d + 2} = I: {rep.quasi_unipotent}; h0 = {rep.h0!r} > 0 = log rho; conjecture fails"
    ok = rep.kt_holds
    return ok, f"|log rho - h0| = {abs(rep.h0 - rep.log_rho_full):.3e}"


CHECKS: list[tuple[str, Callable]] = [
    ("chi_dual_route", check_chi_routes),
    ("hilbert_series_closed_form", check_hilbert_series),
    ("solver_positivity_random_t", check_solver_random_t),
    ("curve_residual_sweep", check_curve_sweep),
    ("recursion_consistency", check_recursions),
    ("partition_formula", check_partition_formula),
    ("growth_rate", check_growth_rate),
    ("pairing_euler", check_pairing),
    ("twist_structure", check_twist),
    ("kikuta_takahashi", check_kikuta_takahashi),
]


def verify_suite(dims, budget: float = DEFAULT_BUDGET, seed: int = 0, clock=time.monotonic) -> VerifyReport:
    """Run every check for every dimension; stop early once ``budget`` seconds are used."""
    dims = sorted(set(dims))
    bad = [d for d in dims if d not in SUPPORTED_DIMS]
    if bad:
        raise ValueError(f"verify supports dimensions 3..8, got {bad}")
    report = VerifyReport(seed=seed, dims=dims)
    start = clock()
    for d in dims:
        X = geometry.make_variety(d)
        rng = random.Random(f"{seed}:{d}")
        for name, fn in CHECKS:
            if clock() - start >= budget:
                report.complete = False
                return report
            try:
                passed, detail = fn(X, rng)
            except InvariantViolation as exc:
                passed, detail = False, f"invariant violation: {exc}"
            report.checks.append(CheckResult(name, d, bool(passed), detail))
    return report


"""Serialization helpers shared by the CLI and the verification suite.

Rationals go out as exact ``"p/q"`` strings next to 40-digit decimal strings;
JSON numbers cannot carry the exact brackets.
"""

from __future__ import annotations

import csv
import io
import json
from decimal import Context, Decimal
from fractions import Fraction

_DEC = Context(prec=40)


def exact_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return f"{q.numerator}/{q.denominator}"


def decimal_str(q: Fraction | int) -> str:
    q = Fraction(q)
    return str(_DEC.divide(Decimal(q.numerator), Decimal(q.denominator)))


def parse_rational(text: str) -> Fraction:
    """Parse ``"p/q"``, an integer, or a finite decimal literal exactly."""
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational number: {text!r}") from exc


def dumps_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def dumps_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def solve_json(X, res) -> dict:
    return {
        "variety": {"dim": X.d, "degree": X.degree, "mode": X.mode},
        "t": res.t,
        "rhs": exact_str(res.rhs),
        "lambda": res.lam,
        "x": float(res.x),
        "x_exact": exact_str(res.x),
        "bracket": [exact_str(res.bracket.lo), exact_str(res.bracket.hi)],
        "bracket_decimal": [decimal_str(res.bracket.lo), decimal_str(res.bracket.hi)],
        "residual": res.residual,
        "iterations": res.iterations,
    }


SWEEP_COLUMNS = ["t", "lambda", "x", "residual", "bracket_lo", "bracket_hi", "curve_residual"]
DYNAMICS_COLUMNS = ["n", "log_C", "lambda_ratio", "lambda_cesaro"]


def sweep_rows(rows) -> list[list]:
    return [
        [
            repr(r.result.t),
            repr(r.result.lam),
            repr(float(r.result.x)),
            repr(r.result.residual),
            exact_str(r.result.bracket.lo),
            exact_str(r.result.bracket.hi),
            repr(r.curve_residual),
        ]
        for r in rows
    ]


def dynamics_rows(table) -> list[list]:
    out = [[0, repr(table.log_C[0]), "", ""]]
    for n in range(1, len(table.log_C)):
        out.append([n, repr(table.log_C[n]), repr(table.lambda_ratio[n - 1]), repr(table.lambda_cesaro[n - 1])])
    return out

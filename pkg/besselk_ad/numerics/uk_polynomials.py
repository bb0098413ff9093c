"""
Exact-rational generation of the U_k polynomials of the uniform large-order
expansion of K_nu.

    U_0(p) = 1
    U_{k+1}(p) = 1/2 p^2 (1 - p^2) U_k'(p) + 1/8 int_0^p (1 - 5 t^2) U_k(t) dt

Coefficients are kept as ``fractions.Fraction`` and converted to floats once,
when the table is frozen.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import List, Sequence, Tuple

from besselk_ad.numerics.dual import Scalar
from besselk_ad.numerics.errors import BesselDomainError

MAX_SUPPORTED_ORDER = 20

Poly = List[Fraction]


def _derivative(poly: Sequence[Fraction]) -> Poly:
    return [i * c for i, c in enumerate(poly)][1:] or [Fraction(0)]


def _multiply(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        for j, bj in enumerate(b):
            out[i + j] += ai * bj
    return out


def _add(a: Sequence[Fraction], b: Sequence[Fraction]) -> Poly:
    n = max(len(a), len(b))
    return [
        (a[i] if i < len(a) else Fraction(0)) + (b[i] if i < len(b) else Fraction(0))
        for i in range(n)
    ]


def _antiderivative(poly: Sequence[Fraction]) -> Poly:
    """Antiderivative vanishing at 0."""
    return [Fraction(0)] + [c / (i + 1) for i, c in enumerate(poly)]


def _trim(poly: Sequence[Fraction]) -> Poly:
    out = list(poly)
    while len(out) > 1 and out[-1] == 0:
        out.pop()
    return out


_HALF_P2_ONE_MINUS_P2 = [Fraction(0), Fraction(0), Fraction(1, 2), Fraction(0), Fraction(-1, 2)]
_ONE_MINUS_5T2 = [Fraction(1), Fraction(0), Fraction(-5)]


def next_uk(uk: Sequence[Fraction]) -> Poly:
    first = _multiply(_HALF_P2_ONE_MINUS_P2, _derivative(uk))
    integral = _antiderivative(_multiply(_ONE_MINUS_5T2, uk))
    second = [c / 8 for c in integral]
    return _trim(_add(first, second))


@dataclass(frozen=True)
class UkTable:
    """
    ``exact[k]`` holds U_k(p) in ascending powers of p as exact rationals;
    ``polys[k]`` is the float rendering. ``reduced[k]`` holds W_k(q) with
    U_k(p) = p^k W_k(p^2).
    """

    max_order: int
    exact: Tuple[Tuple[Fraction, ...], ...]
    polys: Tuple[Tuple[float, ...], ...]
    reduced: Tuple[Tuple[float, ...], ...]


@lru_cache(maxsize=None)
def build_uk_table(max_order: int = MAX_SUPPORTED_ORDER) -> UkTable:
    if not 0 <= max_order <= MAX_SUPPORTED_ORDER:
        raise BesselDomainError(
            f"max_order must lie in [0, {MAX_SUPPORTED_ORDER}], got {max_order}"
        )
    exact: List[Poly] = [[Fraction(1)]]
    for _ in range(max_order):
        exact.append(next_uk(exact[-1]))

    polys = tuple(tuple(float(c) for c in u) for u in exact)
    reduced = tuple(
        tuple(float(u[k + 2 * j]) for j in range(k + 1)) for k, u in enumerate(exact)
    )
    return UkTable(
        max_order=max_order,
        exact=tuple(tuple(u) for u in exact),
        polys=polys,
        reduced=reduced,
    )


def recursion_residual(table: UkTable, k: int) -> Poly:
    """Exact residual U_{k+1} - (recursion applied to U_k); all zeros when the table is right."""
    lhs = list(table.exact[k + 1])
    rhs = next_uk(table.exact[k])
    return _trim(_add(lhs, [-c for c in rhs]))


def _check_order(table: UkTable, k: int) -> None:
    if not 0 <= k <= table.max_order:
        raise BesselDomainError(f"U_{k} is outside the table (max_order={table.max_order})")


def eval_uk(table: UkTable, k: int, p: Scalar) -> Scalar:
    """U_k(p) by Horner's scheme."""
    _check_order(table, k)
    coeffs = table.polys[k]
    acc: Scalar = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * p + c
    return acc


def eval_uk_reduced(table: UkTable, k: int, q: Scalar) -> Scalar:
    """W_k(q), so that U_k(p) = p^k * W_k(p^2)."""
    _check_order(table, k)
    coeffs = table.reduced[k]
    acc: Scalar = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * q + c
    return acc


def dump_uk_table_csv(table: UkTable, path: str | Path) -> Path:
    """Write the nonzero coefficients as (k, power, numerator, denominator) rows."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="") as f:
        writer = csv.writer(f)
        writer.writerow(["k", "power", "numerator", "denominator"])
        for k, poly in enumerate(table.exact):
            for power, c in enumerate(poly):
                if c != 0:
                    writer.writerow([k, power, c.numerator, c.denominator])
    return path

"""Exact rank and nullspace over the rationals.

Rows are sparse ``{column: value}`` dicts.  Rational input is scaled to
integers first; elimination then stays in the integers, dividing each
new row by the gcd of its entries to keep numbers small.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Mapping


def _integral(row: Mapping) -> dict:
    vals = [Fraction(v) for v in row.values() if v]
    if not vals:
        return {}
    den = lcm(*(v.denominator for v in vals))
    out = {k: int(Fraction(v) * den) for k, v in row.items() if v}
    return _primitive(out)


def _primitive(row: dict) -> dict:
    g = 0
    for v in row.values():
        g = gcd(g, v)
        if g == 1:
            return row
    if g > 1:
        row = {k: v // g for k, v in row.items()}
    return row


def echelon(rows: Iterable[Mapping]) -> dict:
    """Reduce rows to echelon form; returns ``{pivot column: row}``."""
    pivots: dict = {}
    for raw in rows:
        row = _integral(raw)
        while row:
            col = min(row)
            piv = pivots.get(col)
            if piv is None:
                pivots[col] = row
                break
            a, b = piv[col], row[col]
            new = {}
            for k in set(row) | set(piv):
                v = a * row.get(k, 0) - b * piv.get(k, 0)
                if v:
                    new[k] = v
            row = _primitive(new)
    return pivots


def rank(rows: Iterable[Mapping]) -> int:
    return len(echelon(rows))


def nullspace(rows: list[Mapping], ncols: list) -> list[dict]:
    """Basis of {x : row . x = 0 for every row}; columns indexed by ``ncols``."""
    piv = echelon(rows)
    # back-substitute into reduced form
    order = sorted(piv)
    red: dict = {}
    for col in reversed(order):
        row = {k: Fraction(v, piv[col][col]) for k, v in piv[col].items()}
        for c2 in list(row):
            if c2 != col and c2 in red:
                f = row.pop(c2)
                for k, v in red[c2].items():
                    if k != c2:
                        row[k] = row.get(k, 0) - f * v
        red[col] = {k: v for k, v in row.items() if v}
    free = [c for c in ncols if c not in piv]
    basis = []
    for fc in free:
        vec = {fc: Fraction(1)}
        for col in order:
            v = -red[col].get(fc, 0)
            if v:
                vec[col] = v
        basis.append(vec)
    return basis


def solve(columns: list[Mapping], target: Mapping) -> list[Fraction] | None:
    """Some x with sum_j x_j * columns[j] == target, or None if inconsistent."""
    t = len(columns)
    rows: dict = {}
    for j, col in enumerate(columns):
        for k, v in col.items():
            if v:
                rows.setdefault(k, {})[j] = v
    for k, v in target.items():
        if v:
            rows.setdefault(k, {})[t] = -Fraction(v)
    for vec in nullspace(list(rows.values()), list(range(t + 1))):
        if vec.get(t):
            s = vec[t]
            return [Fraction(vec.get(j, 0)) / s for j in range(t)]
    return None

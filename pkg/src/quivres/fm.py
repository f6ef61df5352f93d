"""Fourier-Motzkin elimination for homogeneous strict systems.

Decides whether some theta satisfies ``r . theta > 0`` for every row and
``eq . theta == 0``. Kept deliberately separate from the simplex code so the
two can check each other.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd
from typing import Iterable, Sequence


def _primitive(row: Sequence[Fraction]) -> tuple[int, ...]:
    den = 1
    for v in row:
        den = den * v.denominator // gcd(den, v.denominator)
    ints = [int(v * den) for v in row]
    g = 0
    for v in ints:
        g = gcd(g, v)
    if g == 0:
        return tuple(ints)
    return tuple(v // g for v in ints)


def _eliminate_equality(rows, eq):
    k = next((i for i, v in enumerate(eq) if v), None)
    if k is None:
        return rows
    out = []
    for r in rows:
        f = Fraction(r[k], eq[k])
        out.append([Fraction(r[j]) - f * eq[j] for j in range(len(r)) if j != k])
    return out


def strictly_feasible(rows: Iterable[Sequence], eq: Sequence) -> bool:
    rows = _eliminate_equality([list(r) for r in rows], list(eq))
    system = {_primitive([Fraction(v) for v in r]) for r in rows}
    if not system:
        return True
    nvars = len(next(iter(system)))
    for var in range(nvars):
        if any(not any(r) for r in system):
            return False
        pos = [r for r in system if r[var] > 0]
        neg = [r for r in system if r[var] < 0]
        nxt = {r for r in system if r[var] == 0}
        for p in pos:
            for n in neg:
                a, b = p[var], -n[var]
                comb = [b * pv + a * nv for pv, nv in zip(p, n)]
                nxt.add(_primitive([Fraction(v) for v in comb]))
        system = nxt
        if not system:
            return True
    return not system

"""A small exact linear-programming solver over the rationals.

Two-phase primal simplex on a dense ``Fraction`` tableau with Bland's rule,
so it cannot cycle. The interface mirrors ``scipy.optimize.linprog``
(minimize ``c @ x`` subject to ``A_ub x <= b_ub``, ``A_eq x == b_eq`` and
per-variable bounds), but every number stays exact. Problem sizes here are a
few dozen rows, where a dense tableau is the simplest thing that works.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

ZERO = Fraction(0)
ONE = Fraction(1)


@dataclass(frozen=True)
class LPResult:
    status: str  # "optimal", "infeasible" or "unbounded"
    x: tuple[Fraction, ...] | None = None
    fun: Fraction | None = None

    @property
    def ok(self) -> bool:
        return self.status == "optimal"


def _pivot(T, basis, obj, r, j):
    row = T[r]
    p = row[j]
    if p != 1:
        inv = 1 / p
        for k, v in enumerate(row):
            if v:
                row[k] = v * inv
    nz = [k for k, v in enumerate(row) if v]
    for other in T:
        if other is row:
            continue
        f = other[j]
        if f:
            for k in nz:
                other[k] -= f * row[k]
    f = obj[j]
    if f:
        for k in nz:
            obj[k] -= f * row[k]
    basis[r] = j


def _run(T, basis, obj, ncols):
    """Minimize with reduced-cost row ``obj`` (last entry holds -value)."""
    while True:
        j = next((k for k in range(ncols) if obj[k] < 0), None)
        if j is None:
            return "optimal"
        best = None
        for i, row in enumerate(T):
            a = row[j]
            if a > 0:
                ratio = row[-1] / a
                key = (ratio, basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
        if best is None:
            return "unbounded"
        _pivot(T, basis, obj, best[1], j)


def simplex_standard(A, b, c) -> LPResult:
    """Minimize ``c @ y`` subject to ``A y = b``, ``y >= 0``."""
    m = len(A)
    n = len(c)
    T = []
    for i in range(m):
        row = [Fraction(v) for v in A[i]]
        rhs = Fraction(b[i])
        if rhs < 0:
            row = [-v for v in row]
            rhs = -rhs
        art = [ZERO] * m
        art[i] = ONE
        T.append(row + art + [rhs])
    basis = [n + i for i in range(m)]
    width = n + m
    # phase 1: minimize the sum of artificials
    obj = [ZERO] * (width + 1)
    for row in T:
        for k in range(n):
            obj[k] -= row[k]
        obj[-1] -= row[-1]
    _run(T, basis, obj, width)
    if obj[-1] != 0:
        return LPResult("infeasible")
    # drive remaining artificials out of the basis; drop redundant rows
    keep = []
    for r in range(m):
        if basis[r] >= n:
            j = next((k for k in range(n) if T[r][k] != 0), None)
            if j is None:
                continue
            _pivot(T, basis, obj, r, j)
        keep.append(r)
    T = [T[r][:n] + [T[r][-1]] for r in keep]
    basis = [basis[r] for r in keep]
    # phase 2
    obj = [Fraction(v) for v in c] + [ZERO]
    for r, bv in enumerate(basis):
        f = obj[bv]
        if f:
            for k, v in enumerate(T[r]):
                if v:
                    obj[k] -= f * v
    status = _run(T, basis, obj, n)
    if status == "unbounded":
        return LPResult("unbounded")
    y = [ZERO] * n
    for r, bv in enumerate(basis):
        y[bv] = T[r][-1]
    return LPResult("optimal", tuple(y), -obj[-1])


def linprog(
    c: Sequence,
    A_ub: Sequence[Sequence] = (),
    b_ub: Sequence = (),
    A_eq: Sequence[Sequence] = (),
    b_eq: Sequence = (),
    bounds: Sequence[tuple] | None = None,
) -> LPResult:
    """Exact ``min c @ x``; ``bounds`` entries are ``(lo, hi)`` with ``None`` for infinite."""
    nv = len(c)
    if bounds is None:
        bounds = [(0, None)] * nv
    # x_j = offset_j + sum(coef * y_col)
    subst = []
    ncol = 0
    extra = []  # rows "y_col <= ub"
    for lo, hi in bounds:
        if lo is not None:
            subst.append((Fraction(lo), [(ncol, 1)]))
            if hi is not None:
                if hi < lo:
                    return LPResult("infeasible")
                extra.append((ncol, Fraction(hi) - Fraction(lo)))
            ncol += 1
        elif hi is not None:
            subst.append((Fraction(hi), [(ncol, -1)]))
            ncol += 1
        else:
            subst.append((ZERO, [(ncol, 1), (ncol + 1, -1)]))
            ncol += 2

    def expand(coeffs):
        row = [ZERO] * ncol
        const = ZERO
        for j, a in enumerate(coeffs):
            if not a:
                continue
            a = Fraction(a)
            off, terms = subst[j]
            const += a * off
            for col, s in terms:
                row[col] += a * s
        return row, const

    n_slack = len(A_ub) + len(extra)
    width = ncol + n_slack
    A, b = [], []
    for i, coeffs in enumerate(A_ub):
        row, const = expand(coeffs)
        sl = [ZERO] * n_slack
        sl[i] = ONE
        A.append(row + sl)
        b.append(Fraction(b_ub[i]) - const)
    for k, (col, ub) in enumerate(extra):
        row = [ZERO] * ncol
        row[col] = ONE
        sl = [ZERO] * n_slack
        sl[len(A_ub) + k] = ONE
        A.append(row + sl)
        b.append(ub)
    for i, coeffs in enumerate(A_eq):
        row, const = expand(coeffs)
        A.append(row + [ZERO] * n_slack)
        b.append(Fraction(b_eq[i]) - const)
    cost, cconst = expand(c)
    res = simplex_standard(A, b, cost + [ZERO] * n_slack) if A else _no_rows(cost, width)
    if not res.ok:
        return res
    y = res.x
    x = []
    for off, terms in subst:
        x.append(off + sum(s * y[col] for col, s in terms))
    return LPResult("optimal", tuple(x), res.fun + cconst)


def _no_rows(cost, width):
    if any(v < 0 for v in cost):
        return LPResult("unbounded")
    return LPResult("optimal", tuple([ZERO] * width), ZERO)

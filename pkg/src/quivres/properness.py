"""Valuation-level model of the valuative criterion for the two-hub stars.

A tropical representation assigns each double-quiver arrow a valuation in
Z or ``INF`` (a zero arrow). Path valuations add along paths; "valued in R"
means >= 0 and "a unit" means exactly 0. A gauge ``g`` acts by
``val(u -> v) - g(u) + g(v)``, the valuation shadow of
``rho_a -> g_t rho_a g_s^-1``; the diagonal shift by m on I therefore lowers
every path leaving I by m and raises every path entering I by m.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from .errors import NegativeCycle, NoOutgoingPath, PreconditionViolated
from .opensets import Antichain, SupportPattern, check_hub_arrows, in_good_U, spokes_of
from .quiver import DoubleQuiver

INF = math.inf


@dataclass(frozen=True)
class TropicalRep:
    dq: DoubleQuiver
    vals: tuple  # int or INF per double-quiver arrow

    @classmethod
    def from_mapping(cls, dq: DoubleQuiver, vals: Mapping[str, object]) -> TropicalRep:
        """Arrow id -> valuation; ids not listed, ``None`` and ``"inf"`` mean a zero arrow."""
        known = {a.id for a in dq.arrows}
        for k in vals:
            if k not in known:
                raise KeyError(f"unknown arrow id {k!r}")
        out = []
        for a in dq.arrows:
            v = vals.get(a.id)
            if v is None or v == "inf" or v == INF:
                out.append(INF)
            else:
                out.append(int(v))
        return cls(dq, tuple(out))

    def support(self) -> SupportPattern:
        m = sum(1 << k for k, v in enumerate(self.vals) if v != INF)
        return SupportPattern(self.dq, m)

    def as_mapping(self) -> dict:
        return {a.id: v for a, v in zip(self.dq.arrows, self.vals)}


GaugeShift = tuple  # one integer exponent per vertex


def apply_gauge(r: TropicalRep, g: Sequence[int]) -> TropicalRep:
    pairs = r.dq.quiver.arrow_pairs()
    vals = tuple(v if v == INF else v - g[s] + g[t] for v, (s, t) in zip(r.vals, pairs))
    return TropicalRep(r.dq, vals)


def has_nonnegative_cycles(r: TropicalRep) -> bool:
    """Bellman-Ford from a virtual source joined to every vertex."""
    n = r.dq.quiver.n
    edges = [(s, t, v) for v, (s, t) in zip(r.vals, r.dq.quiver.arrow_pairs()) if v != INF]
    dist = [0] * n
    for _ in range(n):
        changed = False
        for s, t, v in edges:
            if dist[s] + v < dist[t]:
                dist[t] = dist[s] + v
                changed = True
        if not changed:
            return True
    return not any(dist[s] + v < dist[t] for s, t, v in edges)


def path_valuations(r: TropicalRep) -> list[list]:
    """All-pairs minimum path valuations (Floyd-Warshall); identity paths count as 0."""
    n = r.dq.quiver.n
    d = [[INF] * n for _ in range(n)]
    for i in range(n):
        d[i][i] = 0
    for v, (s, t) in zip(r.vals, r.dq.quiver.arrow_pairs()):
        if v < d[s][t]:
            d[s][t] = v
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            if dik == INF:
                continue
            di = d[i]
            for j in range(n):
                alt = dik + dk[j]
                if alt < di[j]:
                    di[j] = alt
    if any(d[i][i] < 0 for i in range(n)):
        raise NegativeCycle("some closed path has negative valuation")
    return d


def path_valuation(r: TropicalRep, u: str, v: str):
    q = r.dq.quiver
    return path_valuations(r)[q.index(u)][q.index(v)]


def diagonal_shift(n: int, members: Iterable[int], m: int) -> GaugeShift:
    members = set(members)
    return tuple(m if i in members else 0 for i in range(n))


@dataclass(frozen=True)
class Step:
    m: int
    j: str
    rep: TropicalRep
    gauge: GaugeShift


def expand_step(r: TropicalRep, I: Iterable[str]) -> Step:
    """One expansion step: shift I so that every path leaving it is >= 0.

    m is the minimum valuation over nonzero paths from I to its complement;
    shifting I by m makes all of those >= 0 with some path valued exactly 0,
    and j is the first vertex (canonical order) reached by such a path.
    """
    q = r.dq.quiver
    idx = {q.index(v) for v in I}
    if not idx:
        raise PreconditionViolated("I is empty")
    if not has_nonnegative_cycles(r):
        raise PreconditionViolated("a closed path has negative valuation")
    d = path_valuations(r)
    if any(d[a][b] < 0 for a in idx for b in idx):
        raise PreconditionViolated("a path with both endpoints in I has negative valuation")
    rest = [k for k in range(q.n) if k not in idx]
    best = min((d[a][b] for a in idx for b in rest), default=INF)
    if best == INF:
        raise NoOutgoingPath("no nonzero path leaves I")
    m = int(best)
    g = diagonal_shift(q.n, idx, m)
    new = apply_gauge(r, g)
    d2 = path_valuations(new)
    j = next(b for b in rest if min(d2[a][b] for a in idx) == 0)
    # re-check the postconditions from scratch
    grown = idx | {j}
    if any(d2[a][b] < 0 for a in grown for b in range(q.n)):
        raise RuntimeError("expansion left a negative path out of I + {j}")
    if min(d2[a][j] for a in idx) != 0:
        raise RuntimeError("expansion found no unit path into j")
    return Step(m, q.vertices[j], new, g)


@dataclass
class SearchResult:
    gauge: GaugeShift
    rep: TropicalRep
    I_prime: frozenset[str]
    J_prime: frozenset[str]
    success: bool
    trace: list = field(default_factory=list)


def _closure_contains(family: Antichain, spokes: list[str], chosen: Iterable[str]) -> bool:
    pos = {v: k for k, v in enumerate(spokes)}
    m = sum(1 << pos[v] for v in chosen)
    return any(a & m == a for a in family.members)


def _has_exit(d, inside: set[int], n: int) -> bool:
    return any(d[a][b] != INF for a in inside for b in range(n) if b not in inside)


def audit(r: TropicalRep, I_family: Antichain, J_family: Antichain, x: str, y: str,
          I_prime: Iterable[str], J_prime: Iterable[str]) -> list[str]:
    """Reasons the gauged rep fails to be an integral point of U (empty when it is one)."""
    q = r.dq.quiver
    spokes = spokes_of(r.dq, x, y)
    I_prime, J_prime = set(I_prime), set(J_prime)
    problems = []
    d = path_valuations(r)
    if any(v != INF and v < 0 for row in d for v in row):
        problems.append("a path has negative valuation")
    xi, yi = q.index(x), q.index(y)
    for i in I_prime:
        if d[xi][q.index(i)] != 0:
            problems.append(f"no unit path from {x} to {i}")
    for j in J_prime:
        if d[yi][q.index(j)] != 0:
            problems.append(f"no unit path from {y} to {j}")
    if not _closure_contains(I_family, spokes, I_prime):
        problems.append("I' is not in the upward closure of I")
    if not _closure_contains(J_family, spokes, J_prime):
        problems.append("J' is not in the upward closure of J")
    if I_prime | J_prime != set(spokes):
        problems.append("I' and J' do not cover the spokes")
    # the special fiber (unit arrows) must itself lie in U
    unit = SupportPattern(r.dq, sum(1 << k for k, v in enumerate(r.vals) if v == 0))
    if not in_good_U(unit, I_family, J_family, x, y):
        problems.append("the reduction of the gauged rep is not in U")
    return problems


def integral_point_search(r: TropicalRep, I_family: Antichain, J_family: Antichain,
                          x: str = "x", y: str = "y") -> SearchResult:
    """Gauge a rep whose support lies in U into one with all valuations >= 0.

    Grow I from {x} until nothing leaves it; grow J from {y} to its full
    reach, dropping from I every vertex about to be shifted with J; then,
    while I' is not in the I-family, expand {x} + I' once more, resetting
    J' to the complement of I' (or finishing when the expansion reaches y).
    """
    dq = r.dq
    q = dq.quiver
    spokes = check_hub_arrows(dq, x, y)
    if not has_nonnegative_cycles(r):
        raise PreconditionViolated("has_nonnegative_cycles: a closed path is negative")
    if not in_good_U(r.support(), I_family, J_family, x, y):
        raise PreconditionViolated("support: the support pattern is not in U")
    n = q.n
    total = [0] * n
    cur = r
    trace = []
    steps = 0

    def step(phase, members):
        nonlocal cur, steps
        steps += 1
        if steps > n * n:
            raise RuntimeError("integral point search exceeded |Q0|^2 steps")
        st = expand_step(cur, members)
        for k in range(n):
            total[k] += st.gauge[k]
        cur = st.rep
        trace.append({"phase": phase, "set": sorted(members, key=q.index), "m": st.m, "j": st.j})
        return st.j

    # phase 1: I from {x}
    I = {x}
    while len(I) < n and _has_exit(path_valuations(cur), {q.index(v) for v in I}, n):
        I.add(step("I", I))
    # phase 2: J from {y}
    J = {y}
    while len(J) < n:
        if not _has_exit(path_valuations(cur), {q.index(v) for v in J}, n):
            break
        I -= J
        J.add(step("J", J))
    I_prime = {v for v in I if v in spokes}
    J_prime = {v for v in J if v in spokes}
    d = path_valuations(cur)
    if any(v != INF and v < 0 for row in d for v in row):
        raise RuntimeError("negative path after the J phase")
    # phase 3: repair I'
    while not _closure_contains(I_family, spokes, I_prime):
        J_prime = set(spokes) - I_prime
        j = step("repair", {x} | I_prime)
        if j == y:
            I_prime = set(spokes)
            break
        if j not in spokes:
            raise RuntimeError(f"repair step reached unexpected vertex {j!r}")
        I_prime.add(j)
    gauge = tuple(total)
    if apply_gauge(r, gauge) != cur:
        raise RuntimeError("accumulated gauge does not reproduce the final rep")
    problems = audit(cur, I_family, J_family, x, y, I_prime, J_prime)
    return SearchResult(gauge, cur, frozenset(I_prime), frozenset(J_prime), not problems, trace)

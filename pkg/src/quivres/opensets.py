"""Support patterns, King semistability, U-membership, upward-closed families, orbit cones.

A support pattern marks each double-quiver arrow zero or nonzero. For all-ones
dimension vectors a path is nonzero exactly when every arrow on it is, so all
questions reduce to reachability. Vertex sets are handled as bitmasks over
the canonical vertex order; spoke subsets (for the two-hub stars) as bitmasks
over spokes 1..n, bit i-1 for spoke i.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import NotAllOnes, NotUpwardClosed, ShapeMismatch, TooLarge
from .exactlp import linprog
from .quiver import DoubleQuiver, dot

MAX_VERTICES = 20


@dataclass(frozen=True)
class SupportPattern:
    dq: DoubleQuiver
    mask: int  # bit i set <=> double-quiver arrow i is nonzero

    @classmethod
    def from_arrows(cls, dq: DoubleQuiver, ids: Iterable[str]) -> SupportPattern:
        pos = {a.id: i for i, a in enumerate(dq.arrows)}
        m = 0
        for a in ids:
            if a not in pos:
                raise KeyError(f"unknown arrow id {a!r}")
            m |= 1 << pos[a]
        return cls(dq, m)

    @classmethod
    def full(cls, dq: DoubleQuiver) -> SupportPattern:
        return cls(dq, (1 << len(dq.arrows)) - 1)

    def nonzero(self, i: int) -> bool:
        return bool(self.mask >> i & 1)

    def nonzero_ids(self) -> list[str]:
        return [a.id for i, a in enumerate(self.dq.arrows) if self.nonzero(i)]


def _out_masks(p: SupportPattern) -> list[int]:
    q = p.dq.quiver
    out = [0] * q.n
    for i, (s, t) in enumerate(q.arrow_pairs()):
        if p.mask >> i & 1:
            out[s] |= 1 << t
    return out


def _reach_mask(out: list[int], start: int) -> int:
    seen = start
    frontier = start
    while frontier:
        nxt = 0
        f = frontier
        while f:
            low = f & -f
            nxt |= out[low.bit_length() - 1]
            f ^= low
        frontier = nxt & ~seen
        seen |= nxt
    return seen


def _names(q, m: int) -> frozenset[str]:
    return frozenset(v for i, v in enumerate(q.vertices) if m >> i & 1)


def _vmask(q, verts: Iterable[str]) -> int:
    m = 0
    for v in verts:
        m |= 1 << q.index(v)
    return m


def reachable_set(p: SupportPattern, v: str) -> frozenset[str]:
    q = p.dq.quiver
    return _names(q, _reach_mask(_out_masks(p), 1 << q.index(v)))


def out_closure(p: SupportPattern, S: Iterable[str]) -> frozenset[str]:
    q = p.dq.quiver
    return _names(q, _reach_mask(_out_masks(p), _vmask(q, S)))


def _check_all_ones(alpha: Sequence[int], n: int):
    if len(alpha) != n or any(a != 1 for a in alpha):
        raise NotAllOnes("support patterns model all-ones dimension vectors only")
    if n > MAX_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the guard of {MAX_VERTICES}")


def out_closed_sets(p: SupportPattern) -> set[int]:
    """All out-closed vertex sets (as bitmasks), by closing every subset."""
    n = p.dq.quiver.n
    if n > MAX_VERTICES:
        raise TooLarge(f"{n} vertices exceeds the guard of {MAX_VERTICES}")
    out = _out_masks(p)
    reach = [_reach_mask(out, 1 << v) for v in range(n)]
    closure = [0] * (1 << n)
    for S in range(1, 1 << n):
        low = S & -S
        closure[S] = closure[S ^ low] | reach[low.bit_length() - 1]
    return set(closure)


def _weight(theta, S: int):
    return sum(t for i, t in enumerate(theta) if S >> i & 1)


def is_semistable(p: SupportPattern, theta: Sequence, alpha: Sequence[int]) -> bool:
    _check_all_ones(alpha, p.dq.quiver.n)
    return all(_weight(theta, S) <= 0 for S in out_closed_sets(p))


def is_stable(p: SupportPattern, theta: Sequence, alpha: Sequence[int]) -> bool:
    _check_all_ones(alpha, p.dq.quiver.n)
    full = (1 << p.dq.quiver.n) - 1
    for S in out_closed_sets(p):
        w = _weight(theta, S)
        if w > 0 or (w == 0 and S not in (0, full)):
            return False
    return True


# ---------------------------------------------------------------- two-hub stars


def spokes_of(dq: DoubleQuiver, x: str, y: str) -> list[str]:
    return [v for v in dq.vertices if v not in (x, y)]


def check_hub_arrows(dq: DoubleQuiver, x: str, y: str) -> list[str]:
    """Spokes, after checking every spoke has an arrow to or from each hub."""
    if x == y:
        raise ShapeMismatch("the two hubs must differ")
    spokes = spokes_of(dq, x, y)
    linked = {(a.src, a.tgt) for a in dq.base.arrows}
    for i in spokes:
        for h in (x, y):
            if (h, i) not in linked and (i, h) not in linked:
                raise ShapeMismatch(f"no arrow between hub {h!r} and spoke {i!r}")
    return spokes


def check_bipartite_star(dq: DoubleQuiver, x: str, y: str) -> list[str]:
    """Like ``check_hub_arrows``, and every arrow joins a hub to a spoke."""
    spokes = check_hub_arrows(dq, x, y)
    hubs = {x, y}
    for a in dq.base.arrows:
        if (a.src in hubs) == (a.tgt in hubs):
            raise ShapeMismatch(f"arrow {a.id!r} does not join a hub to a spoke")
    return spokes


@dataclass(frozen=True)
class UnsReport:
    unstable: bool
    uns_spokes: tuple[str, ...]
    uns_x: bool
    uns_y: bool
    semistable: bool  # King's criterion, for cross-checking


def uns_characterization(p: SupportPattern, theta: Sequence, x: str, y: str) -> UnsReport:
    """Instability via Uns(i) (no nonzero arrow into spoke i) and Uns(x), Uns(y).

    Uns(h) holds when the hub weight plus the weights of the spokes it reaches
    stays positive; for theta = (5,-2,..,-2,5) on five spokes that is "the hub
    reaches at most two spokes".
    """
    dq = p.dq
    q = dq.quiver
    spokes = check_bipartite_star(dq, x, y)
    th = [Fraction(t) for t in theta]
    xi, yi = q.index(x), q.index(y)
    if th[xi] <= 0 or th[yi] <= 0 or any(th[q.index(i)] >= 0 for i in spokes):
        raise ShapeMismatch("theta must be positive on the hubs and negative on the spokes")
    alpha = (1,) * q.n
    pairs = q.arrow_pairs()
    uns_i = []
    for i in spokes:
        ii = q.index(i)
        if not any(p.mask >> k & 1 for k, (s, t) in enumerate(pairs) if t == ii):
            uns_i.append(i)
    out = _out_masks(p)

    def hub(h):
        r = _reach_mask(out, 1 << h)
        return th[h] + sum(th[q.index(i)] for i in spokes if r >> q.index(i) & 1) > 0

    ux, uy = hub(xi), hub(yi)
    semi = is_semistable(p, th, alpha)
    return UnsReport(bool(uns_i or ux or uy), tuple(uns_i), ux, uy, semi)


def _crossing(dq: DoubleQuiver, beta: Sequence[int]) -> tuple[int, int]:
    """Masks of double arrows leaving supp(beta), and entering it."""
    out_m = in_m = 0
    for k, (s, t) in enumerate(dq.quiver.arrow_pairs()):
        if beta[s] and not beta[t]:
            out_m |= 1 << k
        elif beta[t] and not beta[s]:
            in_m |= 1 << k
    return out_m, in_m


def in_U_s(p: SupportPattern, theta: Sequence, phi, s) -> bool:
    """Semistable, and for each beta a nonzero arrow out of (s=+) or into (s=-) supp(beta)."""
    if not is_semistable(p, theta, phi.alpha):
        return False
    for sign, beta in zip(s.signs, phi.betas):
        out_m, in_m = _crossing(p.dq, beta)
        if not p.mask & (out_m if sign > 0 else in_m):
            return False
    return True


def _spoke_split(phi, x: str, y: str):
    q = phi.quiver
    xi, yi = q.index(x), q.index(y)
    spokes = [i for i in range(q.n) if i not in (xi, yi)]
    out = []
    for beta in phi.betas:
        if beta[xi] != 1 or beta[yi] != 0 or any(c not in (0, 1) for c in beta):
            raise ShapeMismatch("path form needs classes of the form e_x + e_I")
        I = sum(1 << i for i in spokes if beta[i])
        out.append(I)
    full = sum(1 << i for i in spokes)
    return out, full


def u_s_path_form(p: SupportPattern, phi, s, x: str = "x", y: str = "y") -> bool:
    """Union over I of U_{s,I}: x reaches all of I, y all of I^c, plus the s-clause."""
    check_hub_arrows(p.dq, x, y)
    q = p.dq.quiver
    out = _out_masks(p)
    rx = _reach_mask(out, 1 << q.index(x))
    ry = _reach_mask(out, 1 << q.index(y))
    sets, full = _spoke_split(phi, x, y)
    for sign, I in zip(s.signs, sets):
        Ic = full & ~I
        if rx & I != I or ry & Ic != Ic:
            continue
        if sign > 0 and rx & Ic:
            return True
        if sign < 0 and ry & I:
            return True
    return False


# ------------------------------------------------------------- upward-closed sets


@dataclass(frozen=True)
class Antichain:
    n: int
    members: tuple[int, ...]  # spoke bitmasks, sorted

    def as_sets(self) -> list[tuple[int, ...]]:
        return [mask_to_set(m) for m in self.members]

    def __str__(self) -> str:
        if not self.members:
            return "{}"
        return "{" + ", ".join("{" + ",".join(map(str, s)) + "}" for s in self.as_sets()) + "}"


def set_to_mask(s: Iterable[int]) -> int:
    return sum(1 << (int(i) - 1) for i in set(s))


def mask_to_set(m: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(m.bit_length()) if m >> i & 1)


def _antichain_key(m: int):
    return (bin(m).count("1"), mask_to_set(m))


def _minimal(masks: Iterable[int]) -> tuple[int, ...]:
    masks = sorted(set(masks), key=_antichain_key)
    keep = []
    for m in masks:
        if not any(k & m == k for k in keep):
            keep.append(m)
    return tuple(sorted(keep, key=_antichain_key))


def normalize_antichain(sets: Iterable[Iterable[int]], n: int) -> Antichain:
    masks = []
    for s in sets:
        s = {int(i) for i in s}
        if any(not 1 <= i <= n for i in s):
            raise ValueError(f"set {sorted(s)} is not inside 1..{n}")
        masks.append(set_to_mask(s))
    return Antichain(n, _minimal(masks))


def _closure_flags(a: Antichain) -> np.ndarray:
    allm = np.arange(1 << a.n, dtype=np.int64)
    flags = np.zeros(1 << a.n, dtype=bool)
    for m in a.members:
        flags |= (allm & m) == m
    return flags


def upward_closure(a: Antichain) -> frozenset[int]:
    return frozenset(int(m) for m in np.flatnonzero(_closure_flags(a)))


def _minimal_of_upward(flags: np.ndarray, n: int) -> tuple[int, ...]:
    allm = np.arange(1 << n, dtype=np.int64)
    minimal = flags.copy()
    for b in range(n):
        has = (allm >> b & 1).astype(bool)
        below = np.zeros_like(flags)
        below[has] = flags[allm[has] ^ (1 << b)]
        minimal &= ~below
    return tuple(sorted((int(m) for m in np.flatnonzero(minimal)), key=_antichain_key))


def dual_family(a: Antichain, method: str = "definition") -> Antichain:
    """Minimal sets meeting every member of the upward closure of ``a``.

    ``method="complement"`` uses J = { I^c : I not in closure(a) } instead.
    """
    n = a.n
    allm = np.arange(1 << n, dtype=np.int64)
    if method == "definition":
        flags = np.ones(1 << n, dtype=bool)
        for m in a.members:
            flags &= (allm & m) != 0
    elif method == "complement":
        closed = _closure_flags(a)
        full = (1 << n) - 1
        flags = ~closed[full ^ allm]
    else:
        raise ValueError(f"unknown method {method!r}")
    return Antichain(n, _minimal_of_upward(flags, n))


def is_upward_closed(family: Iterable[int], n: int) -> bool:
    fam = set(family)
    return all(m | (1 << b) in fam for m in fam for b in range(n))


def _box(alpha_hat):
    return itertools.product(*(range(a + 1) for a in alpha_hat))


def vector_dual_family(family: Iterable[Sequence[int]], alpha_hat: Sequence[int]) -> frozenset:
    """J = { w in P : alpha_hat - w not in I } on the box P = prod [0, alpha_hat_i]."""
    alpha_hat = tuple(int(a) for a in alpha_hat)
    fam = {tuple(int(c) for c in v) for v in family}
    for v in fam:
        if len(v) != len(alpha_hat) or any(not 0 <= c <= a for c, a in zip(v, alpha_hat)):
            raise NotUpwardClosed(f"{v} is outside the box")
        for i in range(len(v)):
            if v[i] < alpha_hat[i]:
                up = v[:i] + (v[i] + 1,) + v[i + 1:]
                if up not in fam:
                    raise NotUpwardClosed(f"{up} is missing above {v}")
    return frozenset(
        w for w in _box(alpha_hat) if tuple(a - c for a, c in zip(alpha_hat, w)) not in fam
    )


def in_good_U(p: SupportPattern, I_family: Antichain, J_family: Antichain, x: str, y: str) -> bool:
    """x reaches a member of I, y reaches a member of J, and together the hubs reach every spoke."""
    spokes = check_hub_arrows(p.dq, x, y)
    if I_family.n != len(spokes) or J_family.n != len(spokes):
        raise ShapeMismatch("family ground size differs from the number of spokes")
    rx = reachable_set(p, x)
    ry = reachable_set(p, y)
    sx = sum(1 << k for k, v in enumerate(spokes) if v in rx)
    sy = sum(1 << k for k, v in enumerate(spokes) if v in ry)
    ok1 = any(m & sx == m for m in I_family.members)
    ok2 = any(m & sy == m for m in J_family.members)
    ok3 = (sx | sy) == (1 << len(spokes)) - 1
    return ok1 and ok2 and ok3


def hub_pattern(dq: DoubleQuiver, x: str, y: str, from_x: Iterable[int], from_y: Iterable[int]):
    """Pattern whose nonzero arrows are exactly the hub-to-spoke arrows to the given spokes."""
    spokes = spokes_of(dq, x, y)
    targets = {(x, spokes[i - 1]) for i in from_x} | {(y, spokes[i - 1]) for i in from_y}
    m = 0
    for k, a in enumerate(dq.arrows):
        if (a.src, a.tgt) in targets:
            m |= 1 << k
    return SupportPattern(dq, m)


def good_set_witness_patterns(dq: DoubleQuiver, I_family: Antichain, J_family: Antichain,
                              x: str = "x", y: str = "y") -> list[tuple[str, SupportPattern]]:
    """V^I (x to I, y to everything) and V_J (x to everything, y to J).

    Every spoke is a sink in these patterns, so each also exposes the simple
    S_i at every spoke.
    """
    n = len(check_hub_arrows(dq, x, y))
    every = range(1, n + 1)
    out = []
    for I in I_family.as_sets():
        out.append(("V^{" + ",".join(map(str, I)) + "}", hub_pattern(dq, x, y, I, every)))
    for J in J_family.as_sets():
        out.append(("V_{" + ",".join(map(str, J)) + "}", hub_pattern(dq, x, y, every, J)))
    return out


# -------------------------------------------------------------------- orbit cones


@dataclass(frozen=True)
class OrbitCone:
    alpha: tuple[int, ...]
    normals: tuple[tuple[int, ...], ...]  # theta . n <= 0 for each

    def contains(self, theta: Sequence) -> bool:
        return dot(theta, self.alpha) == 0 and all(dot(theta, nv) <= 0 for nv in self.normals)


def orbit_cone(p: SupportPattern, alpha: Sequence[int]) -> OrbitCone:
    n = p.dq.quiver.n
    _check_all_ones(alpha, n)
    full = (1 << n) - 1
    normals = sorted(
        tuple(S >> i & 1 for i in range(n)) for S in out_closed_sets(p) if S not in (0, full)
    )
    return OrbitCone(tuple(alpha), tuple(normals))


@dataclass(frozen=True)
class ConeIntersection:
    cone: OrbitCone
    is_zero_only: bool
    witness: tuple[int, ...] | None  # a nonzero member when the cone is not {0}


def common_semistable_stabilities(patterns: Sequence[SupportPattern], alpha) -> ConeIntersection:
    """Intersect orbit cones and decide exactly whether only theta = 0 survives."""
    alpha = tuple(alpha)
    normals = set()
    for p in patterns:
        normals.update(orbit_cone(p, alpha).normals)
    cone = OrbitCone(alpha, tuple(sorted(normals)))
    d = len(alpha)
    A_ub = [list(nv) for nv in cone.normals]
    for v in range(d):
        for sign in (1, -1):
            c = [0] * d
            c[v] = -sign  # minimize -sign*theta_v
            res = linprog(c, A_ub, [0] * len(A_ub), [list(alpha)], [0], [(-1, 1)] * d)
            if res.ok and res.fun < 0:
                return ConeIntersection(cone, False, _primitive(res.x))
    return ConeIntersection(cone, True, None)


def _primitive(vals) -> tuple[int, ...]:
    den = 1
    for v in vals:
        den = math.lcm(den, Fraction(v).denominator)
    ints = [int(Fraction(v) * den) for v in vals]
    g = 0
    for v in ints:
        g = math.gcd(g, v)
    return tuple(v // g for v in ints)


# --------------------------------------------------------------- batch sweeps


def _integer_weights(theta) -> list[int]:
    th = [Fraction(t) for t in theta]
    den = 1
    for t in th:
        den = math.lcm(den, t.denominator)
    return [int(t * den) for t in th]


class PatternBatch:
    """Vectorized predicates over an array of pattern masks on one double quiver.

    Rows of the internal arrays are vertices; columns are patterns. Used by the
    exhaustive sweeps; the scalar functions above are the reference.
    """

    def __init__(self, dq: DoubleQuiver, masks: np.ndarray):
        self.dq = dq
        self.q = dq.quiver
        self.masks = np.asarray(masks, dtype=np.int64)
        n = self.q.n
        if n > MAX_VERTICES:
            raise TooLarge(f"{n} vertices exceeds the guard of {MAX_VERTICES}")
        out = [np.zeros(len(self.masks), dtype=np.int64) for _ in range(n)]
        for k, (s, t) in enumerate(self.q.arrow_pairs()):
            out[s] |= ((self.masks >> k) & 1) << t
        self.out = out
        reach = [out[v] | (1 << v) for v in range(n)]
        while True:
            changed = False
            for v in range(n):
                r = reach[v]
                new = r.copy()
                for u in range(n):
                    if u != v:
                        new |= np.where((r >> u) & 1 == 1, reach[u], 0)
                if not np.array_equal(new, r):
                    reach[v] = new
                    changed = True
            if not changed:
                break
        self.reach = reach

    def semistable(self, theta) -> np.ndarray:
        """King's criterion: no closure of a vertex subset has positive weight."""
        n = self.q.n
        w = _integer_weights(theta)
        table = np.zeros(1 << n, dtype=np.int64)
        for S in range(1, 1 << n):
            low = S & -S
            table[S] = table[S ^ low] + w[low.bit_length() - 1]
        bad = np.zeros(len(self.masks), dtype=bool)
        # depth-first over subsets so only n closure arrays are alive at once
        stack = [(0, np.zeros(len(self.masks), dtype=np.int64))]
        while stack:
            start, clos = stack.pop()
            for v in range(start, n):
                c = clos | self.reach[v]
                bad |= table[c] > 0
                stack.append((v + 1, c))
        return ~bad

    def uns(self, theta, x: str, y: str) -> np.ndarray:
        """True where some Uns condition holds (the pattern is unstable)."""
        spokes = check_bipartite_star(self.dq, x, y)
        q = self.q
        w = _integer_weights(theta)
        pairs = q.arrow_pairs()
        res = np.zeros(len(self.masks), dtype=bool)
        for i in spokes:
            ii = q.index(i)
            into = sum(1 << k for k, (s, t) in enumerate(pairs) if t == ii)
            res |= (self.masks & into) == 0
        spoke_idx = [q.index(i) for i in spokes]
        for h in (q.index(x), q.index(y)):
            total = np.full(len(self.masks), w[h], dtype=np.int64)
            for i in spoke_idx:
                total += np.where((self.reach[h] >> i) & 1 == 1, w[i], 0)
            res |= total > 0
        return res

    def _sign_bits(self, s_bits, k):
        s_bits = np.asarray(s_bits)
        if s_bits.ndim == 1 and len(s_bits) == k:
            s_bits = np.repeat(s_bits[:, None], len(self.masks), axis=1)
        return s_bits.astype(bool)  # True means minus

    def u_s_arrow(self, theta, phi, s_bits) -> np.ndarray:
        """Arrow-level U_s. ``s_bits[i]`` is 1 where class i is labelled minus
        (shape (|Phi|,) for one sign function or (|Phi|, N) per pattern)."""
        minus = self._sign_bits(s_bits, len(phi))
        ok = self.semistable(theta)
        for i, beta in enumerate(phi.betas):
            out_m, in_m = _crossing(self.dq, beta)
            has_out = (self.masks & out_m) != 0
            has_in = (self.masks & in_m) != 0
            ok &= np.where(minus[i], has_in, has_out)
        return ok

    def u_s_path(self, phi, s_bits, x: str = "x", y: str = "y") -> np.ndarray:
        check_hub_arrows(self.dq, x, y)
        minus = self._sign_bits(s_bits, len(phi))
        sets, full = _spoke_split(phi, x, y)
        rx = self.reach[self.q.index(x)]
        ry = self.reach[self.q.index(y)]
        res = np.zeros(len(self.masks), dtype=bool)
        for i, I in enumerate(sets):
            Ic = full & ~I
            base = ((rx & I) == I) & ((ry & Ic) == Ic)
            clause = np.where(minus[i], (ry & I) != 0, (rx & Ic) != 0)
            res |= base & clause
        return res

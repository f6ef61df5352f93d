"""Quivers, dimension vectors, stability weights, Euler/Tits forms and roots.

Vectors (dimension vectors and stability weights) are plain tuples aligned
with ``Quiver.vertices``; dimension vectors hold ints and stability weights
hold ``Fraction``s. Nothing in here touches floating point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from .errors import (
    DuplicateArrowId,
    DuplicateVertexId,
    InvalidStability,
    Unsupported,
    UnknownVertex,
    ZeroVector,
)

DimVector = tuple  # tuple[int, ...] aligned with Quiver.vertices
Stability = tuple  # tuple[Fraction, ...]


@dataclass(frozen=True)
class Arrow:
    id: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Quiver:
    vertices: tuple[str, ...]
    arrows: tuple[Arrow, ...]
    _index: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        object.__setattr__(self, "_index", {v: i for i, v in enumerate(self.vertices)})

    @property
    def n(self) -> int:
        return len(self.vertices)

    def index(self, v: str) -> int:
        try:
            return self._index[v]
        except KeyError:
            raise UnknownVertex(f"unknown vertex {v!r}") from None

    def has_vertex(self, v: str) -> bool:
        return v in self._index

    def unit(self, v: str) -> DimVector:
        e = [0] * self.n
        e[self.index(v)] = 1
        return tuple(e)

    def vector(self, values: Mapping[str, object] | Sequence, *, rational=False) -> tuple:
        """Align a per-vertex mapping (or an already ordered sequence) with the vertex order."""
        conv = parse_rational if rational else _as_int
        if isinstance(values, Mapping):
            for k in values:
                self.index(k)
            return tuple(conv(values.get(v, 0)) for v in self.vertices)
        values = list(values)
        if len(values) != self.n:
            raise ValueError(f"expected {self.n} entries, got {len(values)}")
        return tuple(conv(a) for a in values)

    def edge_counts(self) -> list[list[int]]:
        """Symmetric matrix of arrow counts between vertices (loops counted twice on the diagonal)."""
        c = [[0] * self.n for _ in range(self.n)]
        for a in self.arrows:
            i, j = self.index(a.src), self.index(a.tgt)
            c[i][j] += 1
            c[j][i] += 1
        return c

    def loops_at(self, v: str) -> int:
        return sum(1 for a in self.arrows if a.src == v and a.tgt == v)

    def arrow_pairs(self) -> list[tuple[int, int]]:
        return [(self.index(a.src), self.index(a.tgt)) for a in self.arrows]


def _as_int(a) -> int:
    if isinstance(a, bool):
        raise TypeError("boolean is not a dimension")
    if isinstance(a, Fraction):
        if a.denominator != 1:
            raise ValueError(f"non-integral dimension {a}")
        return int(a)
    return int(a)


def parse_rational(a) -> Fraction:
    """Accept ints, Fractions, and strings like ``"-3/4"``."""
    if isinstance(a, Fraction):
        return a
    if isinstance(a, bool):
        raise TypeError("boolean is not a rational")
    if isinstance(a, int):
        return Fraction(a)
    if isinstance(a, str):
        return Fraction(a.strip())
    raise TypeError(f"cannot read {a!r} as an exact rational")


def build_quiver(vertices: Iterable[str], arrows: Iterable) -> Quiver:
    """Validate and build a quiver.

    ``arrows`` items may be ``(src, tgt)``, ``(src, tgt, id)`` or dicts with
    ``src``/``tgt`` and an optional ``id``. Missing ids are generated as
    ``"src->tgt"``, with ``#2``, ``#3``... for parallel copies.
    """
    verts = tuple(str(v) for v in vertices)
    seen = set()
    for v in verts:
        if v in seen:
            raise DuplicateVertexId(f"vertex {v!r} declared twice")
        seen.add(v)
    out = []
    ids = set()
    for item in arrows:
        if isinstance(item, Mapping):
            src, tgt, aid = item["src"], item["tgt"], item.get("id")
        elif len(item) == 3:
            src, tgt, aid = item
        else:
            (src, tgt), aid = item, None
        src, tgt = str(src), str(tgt)
        for v in (src, tgt):
            if v not in seen:
                raise UnknownVertex(f"arrow endpoint {v!r} is not a declared vertex")
        if aid is None:
            aid = f"{src}->{tgt}"
            k = 2
            while aid in ids:
                aid = f"{src}->{tgt}#{k}"
                k += 1
        aid = str(aid)
        if aid in ids:
            raise DuplicateArrowId(f"arrow id {aid!r} used twice")
        ids.add(aid)
        out.append(Arrow(aid, src, tgt))
    return Quiver(verts, tuple(out))


@dataclass(frozen=True)
class DoubleQuiver:
    """The base quiver plus a reversed partner ``a*`` for each arrow ``a``.

    ``quiver.arrows`` lists the base arrows first and then their partners in
    the same order, so arrow ``i`` and arrow ``i + k`` are partners.
    """

    base: Quiver
    quiver: Quiver

    @property
    def vertices(self) -> tuple[str, ...]:
        return self.base.vertices

    @property
    def arrows(self) -> tuple[Arrow, ...]:
        return self.quiver.arrows

    def partner(self, i: int) -> int:
        k = len(self.base.arrows)
        return i + k if i < k else i - k


def double(q: Quiver) -> DoubleQuiver:
    stars = []
    names = {a.id for a in q.arrows}
    for a in q.arrows:
        sid = a.id + "*"
        while sid in names:
            sid += "*"
        names.add(sid)
        stars.append(Arrow(sid, a.tgt, a.src))
    return DoubleQuiver(q, Quiver(q.vertices, q.arrows + tuple(stars)))


def dot(a: Sequence, b: Sequence):
    return sum(x * y for x, y in zip(a, b))


def euler_form(q: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    total = dot(a, b)
    for s, t in q.arrow_pairs():
        total -= a[s] * b[t]
    return total


def sym_form(q: Quiver, a: Sequence[int], b: Sequence[int]) -> int:
    return euler_form(q, a, b) + euler_form(q, b, a)


def tits_q(q: Quiver, a: Sequence[int]) -> int:
    return sym_form(q, a, a) // 2


def validate_stability(theta: Sequence, alpha: Sequence[int]) -> bool:
    if len(theta) != len(alpha):
        raise InvalidStability("stability and dimension vector have different lengths")
    return dot(theta, alpha) == 0


def support(b: Sequence[int]) -> list[int]:
    return [i for i, c in enumerate(b) if c]


def is_connected(q: Quiver, verts: Iterable[int]) -> bool:
    """Connectivity of the underlying graph restricted to ``verts``."""
    verts = set(verts)
    if not verts:
        return False
    adj = {v: set() for v in verts}
    for s, t in q.arrow_pairs():
        if s in verts and t in verts:
            adj[s].add(t)
            adj[t].add(s)
    start = next(iter(verts))
    seen = {start}
    stack = [start]
    while stack:
        v = stack.pop()
        for w in adj[v] - seen:
            seen.add(w)
            stack.append(w)
    return seen == verts


def is_positive_root(q: Quiver, b: Sequence[int]) -> bool:
    """Kac's reflection test for loop-free supports.

    Reflect at vertices where the symmetric pairing with the simple root is
    positive; this lowers the height, so the loop ends at a simple root, at a
    vector with a negative entry, or in the fundamental region.
    """
    b = [int(c) for c in b]
    if any(c < 0 for c in b):
        raise ValueError("dimension vector has a negative entry")
    if not any(b):
        raise ZeroVector("the zero vector is not a root")
    loops = [0] * q.n
    for s, t in q.arrow_pairs():
        if s == t:
            loops[s] += 1
    if any(loops[i] for i in support(b)):
        raise Unsupported("support contains a vertex with a loop")
    counts = q.edge_counts()
    n = q.n

    def pair_with_simple(v, i):
        # (v, e_i) for loop-free i
        return 2 * v[i] - sum(counts[i][j] * v[j] for j in range(n) if j != i)

    bound = 10 * sum(b) ** 2
    steps = 0
    while True:
        if sum(b) == 1:
            return True
        supp = support(b)
        hit = None
        for i in range(n):
            if loops[i] and b[i] == 0:
                continue
            p = pair_with_simple(b, i)
            if p > 0:
                hit = (i, p)
                break
        if hit is None:
            return is_connected(q, supp)
        i, p = hit
        b[i] -= p
        if b[i] < 0:
            return False
        if any(loops[j] for j in support(b)):
            raise Unsupported("reflection moved the support onto a loop vertex")
        steps += 1
        if steps > bound:  # height drops every step, so this is unreachable
            raise RuntimeError("reflection loop failed to terminate")


@dataclass(frozen=True)
class Unframed:
    quiver: Quiver
    alpha: DimVector
    infinity: str
    theta: Stability | None = None


def framed_to_unframed(
    q: Quiver,
    alpha: Sequence[int],
    w: Mapping[str, int] | Sequence[int],
    theta: Sequence | None = None,
    infinity: str = "inf",
) -> Unframed:
    """Trade the framing for one extra vertex of dimension 1 with ``w_i`` arrows into ``i``."""
    if q.has_vertex(infinity):
        raise DuplicateVertexId(f"vertex {infinity!r} already exists")
    wv = q.vector(w)
    if any(c < 0 for c in wv):
        raise ValueError("framing must be nonnegative")
    arrows = [(a.src, a.tgt, a.id) for a in q.arrows]
    for v, k in zip(q.vertices, wv):
        for r in range(k):
            arrows.append((infinity, v, f"{infinity}->{v}" + (f"#{r + 1}" if r else "")))
    nq = build_quiver(q.vertices + (infinity,), arrows)
    nalpha = tuple(int(c) for c in alpha) + (1,)
    ntheta = None
    if theta is not None:
        th = tuple(parse_rational(t) for t in theta)
        ntheta = th + (-dot(th, alpha),)
    return Unframed(nq, nalpha, infinity, ntheta)


def delete_vertex(q: Quiver, v: str) -> Quiver:
    q.index(v)
    verts = [u for u in q.vertices if u != v]
    arrows = [(a.src, a.tgt, a.id) for a in q.arrows if v not in (a.src, a.tgt)]
    return build_quiver(verts, arrows)


@dataclass(frozen=True)
class Instance:
    """A quiver with a dimension vector, a stability weight and the hub vertices."""

    name: str
    quiver: Quiver
    alpha: DimVector
    theta: Stability
    x: str
    y: str | None = None
    phi: tuple | None = None  # optional hard-coded decomposition classes
    note: str = ""

    def __post_init__(self):
        if not validate_stability(self.theta, self.alpha):
            raise InvalidStability(f"{self.name}: theta . alpha != 0")
        self.quiver.index(self.x)
        if self.y is not None:
            self.quiver.index(self.y)


def instance_from_json(doc: Mapping, name: str = "input") -> Instance:
    """Read the JSON quiver description used by the command line."""
    q = build_quiver(doc["vertices"], doc.get("arrows", []))
    dim = doc.get("dim")
    alpha = q.vector(dim) if dim is not None else tuple([1] * q.n)
    theta = q.vector(doc.get("theta", {}), rational=True)
    x = doc.get("x")
    y = doc.get("y")
    if "framing" in doc:
        inf = doc.get("infinity", "inf")
        u = framed_to_unframed(q, alpha, doc["framing"], theta, infinity=inf)
        q, alpha, theta = u.quiver, u.alpha, u.theta
        if y is None:
            y = inf
    if x is None:
        x = q.vertices[0]
    phi = None
    if doc.get("phi") is not None:
        phi = tuple(q.vector(b) for b in doc["phi"])
    return Instance(name, q, alpha, theta, str(x), None if y is None else str(y), phi)

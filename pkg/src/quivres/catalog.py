"""Built-in example instances."""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction

from .errors import QuiverError
from .quiver import Instance, build_quiver


@dataclass(frozen=True)
class Example:
    instance: Instance
    description: str
    # named sign functions: name -> {beta vector: +1 / -1}
    signs: dict = field(default_factory=dict)


def _theta(*vals):
    return tuple(Fraction(v) for v in vals)


def star(n: int, m: int, arrows_per_edge: int = 1, name: str | None = None) -> Instance:
    """Hubs x and y with arrows into spokes 1..n; theta = (m, -1, ..., -1, n - m)."""
    spokes = [str(i) for i in range(1, n + 1)]
    verts = ["x"] + spokes + ["y"]
    arrows = [(h, i) for h in ("x", "y") for i in spokes for _ in range(arrows_per_edge)]
    q = build_quiver(verts, arrows)
    theta = _theta(m, *([-1] * n), n - m)
    return Instance(name or f"star{n}_{m}", q, tuple([1] * (n + 2)), theta, "x", "y")


def _edges(name, edges, note):
    verts = ["x", "1", "2", "3", "4", "y"]
    q = build_quiver(verts, edges)
    return Instance(name, q, (1,) * 6, _theta(2, -1, -1, -1, -1, 2), "x", "y", note=note)


def _vec(q, coeffs):
    return q.vector(coeffs)


def _star4() -> Example:
    inst = star(4, 2, name="star4")
    q = inst.quiver

    def b(i, j):
        return _vec(q, {"x": 1, str(i): 1, str(j): 1})

    s = {b(1, 2): 1, b(3, 4): 1, b(1, 3): -1, b(2, 4): -1, b(1, 4): 1, b(2, 3): 1}
    return Example(inst, "four-pointed star, theta=(2,-1,-1,-1,-1,2)", {"nonprojective": s})


def _legs3() -> Example:
    verts = ["x", "1", "2", "3", "4", "5", "6", "y"]
    arrows = [("x", "1"), ("x", "2"), ("x", "3"), ("1", "4"), ("2", "5"), ("3", "6"),
              ("y", "4"), ("y", "5"), ("y", "6")]
    q = build_quiver(verts, arrows)
    inst = Instance("legs3", q, (1,) * 8, _theta(3, -1, -1, -1, -1, -1, -1, 3), "x", "y")

    def b(*idx):
        d = {"x": 1}
        d.update({str(i): 1 for i in idx})
        return _vec(q, d)

    s = {b(1, 2, 3): 1}
    for i in (1, 2, 3):
        nxt = i % 3 + 1
        prv = (i + 1) % 3 + 1
        s[b(i, i + 3, nxt)] = 1
        s[b(i, i + 3, prv)] = -1
    return Example(inst, "three-legged star, theta=(3,-1,...,-1,3)", {"nonprojective": s})


def _threevertex() -> Example:
    q = build_quiver(["x", "1", "2"], [("x", "1")] * 3 + [("x", "2")] * 3)
    inst = Instance(
        "threevertex", q, (2, 3, 3), _theta(3, -1, -1), "x", None,
        phi=((1, 3, 0), (1, 2, 1), (1, 1, 2), (1, 0, 3)),
    )
    s = {(1, 3, 0): 1, (1, 0, 3): 1, (1, 2, 1): -1, (1, 1, 2): -1}
    return Example(inst, "three vertices, triple edges x-1 and x-2, alpha=(2,3,3)",
                   {"nonprojective": s})


def _fourvertex() -> Example:
    arrows = [("x", "1")] * 2 + [("x", "2")] * 2 + [("y", "1")] * 2 + [("y", "2")] * 2
    q = build_quiver(["x", "1", "2", "y"], arrows)
    inst = Instance(
        "fourvertex", q, (1, 2, 2, 1), _theta(2, -1, -1, 2), "x", "y",
        phi=((1, 2, 0, 0), (1, 1, 1, 0), (1, 0, 2, 0)),
    )
    s = {(1, 2, 0, 0): 1, (1, 0, 2, 0): 1, (1, 1, 1, 0): -1}
    return Example(inst, "four vertices, double edges, alpha=(1,2,2,1)", {"nonprojective": s})


def _star4x2() -> Example:
    base = star(4, 2, arrows_per_edge=2)
    inst = Instance("star4x2", base.quiver, (1, 2, 2, 2, 2, 1),
                    _theta(2, -1, -1, -1, -1, 6), "x", "y")
    return Example(inst, "four-pointed star with doubled arrows, alpha=(1,2,2,2,2,1)")


SIXV_EDGES = {
    "sixv1": [("x", "1"), ("x", "3"), ("1", "2"), ("1", "4"), ("2", "3"), ("3", "4"),
              ("y", "1"), ("y", "3")],
    "sixv2": [("x", "2"), ("x", "4"), ("1", "2"), ("1", "4"), ("2", "3"), ("3", "4"),
              ("y", "1"), ("y", "3")],
    "sixv3": [("x", "1"), ("x", "2"), ("x", "3"), ("1", "4"), ("y", "1"), ("y", "2"),
              ("y", "3"), ("3", "4")],
    "sixv4": [("x", "1"), ("x", "3"), ("2", "3"), ("x", "4"), ("y", "1"), ("y", "2"),
              ("1", "2"), ("3", "4"), ("y", "4")],
}


def _builders():
    out = {
        "star4": _star4,
        "legs3": _legs3,
        "threevertex": _threevertex,
        "fourvertex": _fourvertex,
        "star4x2": _star4x2,
        "star5": lambda: Example(
            Instance("star5", star(5, 2).quiver, (1,) * 7,
                     _theta(5, -2, -2, -2, -2, -2, 5), "x", "y"),
            "five-pointed star, theta=(5,-2,-2,-2,-2,-2,5); good set {12, 345}",
        ),
    }
    for k, edges in SIXV_EDGES.items():
        out[k] = (lambda k=k, e=edges: Example(_edges(k, e, ""), f"six-vertex graph {k[-1]}"))
    return out


NAMES = ["star4", "sixv1", "sixv2", "sixv3", "sixv4", "legs3", "threevertex", "fourvertex",
         "star4x2", "star5"]

# Good set of the five-pointed star (spoke subsets).
STAR5_GOOD = [{1, 2}, {3, 4, 5}]


def get_example(name: str) -> Example:
    """Look up a built-in; ``starN_M`` (e.g. ``star6_3``) builds the general star."""
    m = re.fullmatch(r"star(\d+)_(\d+)", name)
    if m:
        n, k = int(m.group(1)), int(m.group(2))
        if not 1 <= k <= n - 1:
            raise QuiverError(f"star{n}_{k}: need 1 <= m <= n-1")
        return Example(star(n, k, name=name), f"star with {n} spokes, theta_x={k}")
    builders = _builders()
    if name not in builders:
        raise QuiverError(f"unknown example {name!r}; known: {', '.join(NAMES)}, starN_M")
    return builders[name]()


def all_examples() -> list[Example]:
    return [get_example(n) for n in NAMES]

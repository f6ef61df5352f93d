from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivres.catalog import STAR5_GOOD, get_example, star
from quivres.classifier import SignFunction
from quivres.errors import NotAllOnes, ShapeMismatch
from quivres.leaves import phi_for
from quivres.opensets import (
    PatternBatch,
    SupportPattern,
    common_semistable_stabilities,
    dual_family,
    good_set_witness_patterns,
    hub_pattern,
    in_good_U,
    in_U_s,
    is_semistable,
    is_stable,
    normalize_antichain,
    orbit_cone,
    out_closure,
    reachable_set,
    u_s_path_form,
    uns_characterization,
)
from quivres.quiver import build_quiver, double

STAR5 = get_example("star5").instance
DQ5 = double(STAR5.quiver)
THETA5 = STAR5.theta
ALPHA5 = STAR5.alpha
I0 = normalize_antichain(STAR5_GOOD, 5)
J0 = dual_family(I0)
EVERY = range(1, 6)


def brute_semistable(p, theta):
    """King's criterion by listing every vertex subset and testing out-closure."""
    q = p.dq.quiver
    n = q.n
    edges = [(s, t) for k, (s, t) in enumerate(q.arrow_pairs()) if p.mask >> k & 1]
    for r in range(1, n):
        for S in itertools.combinations(range(n), r):
            S = set(S)
            if all(t in S for s, t in edges if s in S) and sum(theta[i] for i in S) > 0:
                return False
    return True


def test_reachability_and_closure():
    v12 = hub_pattern(DQ5, "x", "y", [1, 2], EVERY)
    assert reachable_set(v12, "x") == {"x", "1", "2"}
    assert out_closure(v12, {"y"}) == {"y", "1", "2", "3", "4", "5"}
    assert out_closure(v12, set()) == frozenset()
    zero = SupportPattern(DQ5, 0)
    assert reachable_set(zero, "3") == {"3"}
    full = SupportPattern.full(DQ5)
    assert reachable_set(full, "3") == set(STAR5.quiver.vertices)
    assert out_closure(full, {"y"}) == set(STAR5.quiver.vertices)


def test_semistability_examples():
    base = SupportPattern(DQ5, (1 << 10) - 1)
    assert is_semistable(base, THETA5, ALPHA5)
    into1 = [k for k, a in enumerate(DQ5.arrows) if a.tgt == "1"]
    p = SupportPattern(DQ5, ((1 << 20) - 1) & ~sum(1 << k for k in into1))
    assert not is_semistable(p, THETA5, ALPHA5)
    assert not is_semistable(SupportPattern(DQ5, 0), THETA5, ALPHA5)
    assert is_stable(SupportPattern.full(DQ5), THETA5, ALPHA5)
    with pytest.raises(NotAllOnes):
        is_semistable(base, THETA5, (1, 2, 1, 1, 1, 1, 1))


def test_uns_examples():
    v12 = hub_pattern(DQ5, "x", "y", [1, 2], EVERY)
    r = uns_characterization(v12, THETA5, "x", "y")
    assert r.uns_x and r.unstable and not r.semistable
    full = uns_characterization(SupportPattern(DQ5, (1 << 10) - 1), THETA5, "x", "y")
    assert not full.unstable and full.semistable
    into3 = [k for k, a in enumerate(DQ5.arrows) if a.tgt == "3"]
    p = SupportPattern(DQ5, ((1 << 20) - 1) & ~sum(1 << k for k in into3))
    r = uns_characterization(p, THETA5, "x", "y")
    assert r.uns_spokes == ("3",) and r.unstable and not is_semistable(p, THETA5, ALPHA5)


def test_uns_needs_bipartite_shape():
    q = build_quiver(["x", "1", "2", "y"], [("x", "1"), ("x", "2"), ("y", "1"), ("y", "2"), ("1", "2")])
    with pytest.raises(ShapeMismatch):
        uns_characterization(SupportPattern.full(double(q)), (2, -1, -1, 0), "x", "y")


@settings(max_examples=300, deadline=None)
@given(st.integers(0, (1 << 20) - 1))
def test_king_matches_brute_force_and_uns(mask):
    p = SupportPattern(DQ5, mask)
    semi = is_semistable(p, THETA5, ALPHA5)
    assert semi == brute_semistable(p, THETA5)
    assert semi == (not uns_characterization(p, THETA5, "x", "y").unstable)


def test_pattern_batch_matches_scalar():
    rng = np.random.default_rng(2)
    masks = rng.integers(0, 1 << 20, 400)
    b = PatternBatch(DQ5, masks)
    semi = b.semistable(THETA5)
    uns = b.uns(THETA5, "x", "y")
    for m, a, u in zip(masks, semi, uns):
        p = SupportPattern(DQ5, int(m))
        assert bool(a) == is_semistable(p, THETA5, ALPHA5)
        assert bool(u) == uns_characterization(p, THETA5, "x", "y").unstable


def test_u_s_examples():
    inst = get_example("star4").instance
    dq = double(inst.quiver)
    phi = phi_for(inst)
    full = SupportPattern.full(dq)
    for m in range(64):
        s = SignFunction.from_mask(6, m)
        assert in_U_s(full, inst.theta, phi, s)
        assert u_s_path_form(full, phi, s)
    # beta_{12}: keep the arrows crossing supp(beta_12) only in the outgoing direction
    b12 = phi.betas[0]
    keep = 0
    for k, (src, tgt) in enumerate(dq.quiver.arrow_pairs()):
        if not (b12[tgt] and not b12[src]):
            keep |= 1 << k
    p = SupportPattern(dq, keep)
    s = SignFunction.from_string("-+++++")
    assert not in_U_s(p, inst.theta, phi, s)
    assert not u_s_path_form(p, phi, s)


def test_u_s_batch_matches_scalar():
    inst = star(5, 2)
    dq = double(inst.quiver)
    phi = phi_for(inst)
    rng = np.random.default_rng(4)
    masks = rng.integers(0, 1 << 20, 300)
    bits = rng.integers(0, 2, size=(len(phi), 300))
    b = PatternBatch(dq, masks)
    arrow = b.u_s_arrow(inst.theta, phi, bits)
    path = b.u_s_path(phi, bits)
    for k, m in enumerate(masks):
        s = SignFunction(tuple(-1 if v else 1 for v in bits[:, k]))
        p = SupportPattern(dq, int(m))
        assert bool(arrow[k]) == in_U_s(p, inst.theta, phi, s)
        assert bool(path[k]) == u_s_path_form(p, phi, s)


def test_good_U_membership():
    assert in_good_U(hub_pattern(DQ5, "x", "y", [1, 2], EVERY), I0, J0, "x", "y")
    # vertex 3 reached by neither hub
    assert not in_good_U(hub_pattern(DQ5, "x", "y", [1, 2], [1, 2, 4, 5]), I0, J0, "x", "y")
    assert not in_good_U(hub_pattern(DQ5, "x", "y", [1], [3]), I0, J0, "x", "y")
    with pytest.raises(ShapeMismatch):
        in_good_U(SupportPattern(DQ5, 0), normalize_antichain([[1]], 4), J0, "x", "y")


def test_orbit_cone_reproduces_semistability():
    v12 = hub_pattern(DQ5, "x", "y", [1, 2], EVERY)
    cone = orbit_cone(v12, ALPHA5)
    rng = np.random.default_rng(9)
    for _ in range(100):
        th = [Fraction(int(v)) for v in rng.integers(-4, 5, 6)]
        th.append(-sum(th))
        assert cone.contains(th) == is_semistable(v12, th, ALPHA5)


def test_orbit_cone_extremes():
    full = SupportPattern.full(DQ5)
    assert orbit_cone(full, ALPHA5).normals == ()
    assert not common_semistable_stabilities([full], ALPHA5).is_zero_only
    assert common_semistable_stabilities([SupportPattern(DQ5, 0)], ALPHA5).is_zero_only


def test_theta_zero_on_good_set():
    pats = good_set_witness_patterns(DQ5, I0, J0)
    res = common_semistable_stabilities([p for _, p in pats], ALPHA5)
    assert res.is_zero_only and res.witness is None
    upper = [p for name, p in pats if name.startswith("V^")]
    res = common_semistable_stabilities(upper, ALPHA5)
    assert not res.is_zero_only
    assert any(res.witness)
    for p in upper:
        assert is_semistable(p, res.witness, ALPHA5)

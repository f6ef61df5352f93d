from __future__ import annotations

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quivres.catalog import get_example
from quivres.classifier import (
    FeasibilityResult,
    MultisetCertificate,
    SignFunction,
    census,
    check_multiset_certificate,
    extend_sign_function,
    k2_nonprojective,
    monte_carlo_nonprojective,
    multiset_certificate_search,
    realizable,
    realizable_fm,
    star_phi,
    verify_feasibility_result,
)
from quivres.errors import CapExceeded, InvalidParams, NotAnExtension
from quivres.leaves import PhiSet, phi_for
from quivres.quiver import build_quiver


def example(name):
    ex = get_example(name)
    phi = phi_for(ex.instance)
    return ex, phi


def named_signs(name):
    ex, phi = example(name)
    return phi, SignFunction.from_mapping(phi, ex.signs["nonprojective"])


def test_sign_function_strings_and_masks():
    s = SignFunction.from_string("+-+")
    assert s.signs == (1, -1, 1) and str(s) == "+-+"
    assert s.mask == 0b010
    assert SignFunction.from_mask(3, 0b010) == s
    assert str(-s) == "-+-"
    with pytest.raises(ValueError):
        SignFunction.from_string("+x")


def test_four_star_identity_certificate():
    phi, s = named_signs("star4")
    r = realizable(phi, s)
    assert not r.feasible
    assert verify_feasibility_result(phi, s, r)
    assert not realizable_fm(phi, s)
    c = multiset_certificate_search(phi, s, 2)
    assert c is not None and c.k == 2
    q = phi.quiver
    b = lambda i, j: q.vector({"x": 1, str(i): 1, str(j): 1})  # noqa: E731
    plus = sorted(phi.betas[i] for i in c.plus)
    minus = sorted(phi.betas[i] for i in c.minus)
    assert plus == sorted([b(1, 2), b(3, 4)]) and minus == sorted([b(1, 3), b(2, 4)])
    # the explicit certificate: lambda = 1 on those four, mu = 0
    lam = tuple(1 if beta in (b(1, 2), b(3, 4), b(1, 3), b(2, 4)) else 0 for beta in phi.betas)
    assert verify_feasibility_result(phi, s, FeasibilityResult(False, lam=lam, mu=Fraction(0)))


def test_all_plus_is_projective():
    _, phi = example("star4")
    s = SignFunction.constant(len(phi), 1)
    r = realizable(phi, s)
    assert r.feasible and verify_feasibility_result(phi, s, r)
    assert verify_feasibility_result(phi, s, FeasibilityResult(True, witness=(4, -1, -1, -1, -1, 0)))
    assert multiset_certificate_search(phi, s, 4) is None


def test_verify_rejects_corruption():
    phi, s = named_signs("star4")
    r = realizable(phi, s)
    bad = FeasibilityResult(False, lam=(-1,) + r.lam[1:], mu=r.mu)
    assert not verify_feasibility_result(phi, s, bad)
    assert not verify_feasibility_result(phi, s, FeasibilityResult(False, lam=(0,) * 6, mu=Fraction(0)))
    assert not verify_feasibility_result(phi, s, FeasibilityResult(True, witness=(4, -1, -1, -1, -1, 0)))
    plus = SignFunction.constant(6, 1)
    assert not verify_feasibility_result(phi, plus, FeasibilityResult(True, witness=(1, 0, 0, 0, 0, 0)))


def test_single_class_either_sign_is_feasible():
    q = build_quiver(["x", "1", "y"], [("x", "1"), ("y", "1")])
    phi = PhiSet(q, (1, 1, 1), (1, -1, 0), "x", ((1, 1, 0),), (2,))
    for text in "+-":
        s = SignFunction.from_string(text)
        r = realizable(phi, s)
        assert r.feasible and verify_feasibility_result(phi, s, r)


def test_legs3_three_term_identity():
    phi, s = named_signs("legs3")
    r = realizable(phi, s)
    assert not r.feasible and verify_feasibility_result(phi, s, r)
    assert multiset_certificate_search(phi, s, 2) is None
    c = multiset_certificate_search(phi, s, 3)
    assert c.k == 3 and check_multiset_certificate(phi, s, c)
    q = phi.quiver
    b = lambda *i: q.vector({"x": 1, **{str(v): 1 for v in i}})  # noqa: E731
    assert sorted(phi.betas[i] for i in c.plus) == sorted([b(1, 4, 2), b(2, 5, 3), b(3, 6, 1)])
    assert sorted(phi.betas[i] for i in c.minus) == sorted([b(1, 4, 3), b(2, 5, 1), b(3, 6, 2)])


def test_three_vertex_identity():
    phi, s = named_signs("threevertex")
    c = multiset_certificate_search(phi, s, 2)
    assert c.k == 2 and check_multiset_certificate(phi, s, c)
    assert sorted(phi.betas[i] for i in c.plus) == [(1, 0, 3), (1, 3, 0)]
    assert sorted(phi.betas[i] for i in c.minus) == [(1, 1, 2), (1, 2, 1)]


def test_check_certificate_rejects_wrong_signs():
    phi, s = named_signs("threevertex")
    c = multiset_certificate_search(phi, s, 2)
    assert not check_multiset_certificate(phi, -s, c)
    assert not check_multiset_certificate(phi, s, MultisetCertificate(c.plus, c.minus[:1]))
    with pytest.raises(InvalidParams):
        multiset_certificate_search(phi, s, 1)


def test_census_jobs_do_not_change_results():
    _, phi = example("sixv2")
    a = census(phi, jobs=1)
    b = census(phi, jobs=2)
    assert [r.feasible for r in a.results] == [r.feasible for r in b.results]
    assert (a.total, a.nonprojective) == (32, 4)
    with pytest.raises(CapExceeded):
        census(phi, cap=3)


def test_census_is_flip_symmetric_and_fm_consistent():
    _, phi = example("star4")
    rep = census(phi)
    n = len(phi)
    full = (1 << n) - 1
    for m, r in enumerate(rep.results):
        assert r.feasible == rep.results[full ^ m].feasible
        assert r.feasible == realizable_fm(phi, SignFunction.from_mask(n, m))


def test_extension_identity_and_mismatch():
    _, phi = example("star4")
    s = SignFunction.from_string("+-+--+")
    assert extend_sign_function(phi, phi, s) == s
    _, small = example("sixv1")
    with pytest.raises(NotAnExtension):
        extend_sign_function(phi, small, s)


def test_extension_to_doubled_star_stays_nonprojective():
    phi, s = named_signs("star4")
    _, big = example("star4x2")
    s2 = extend_sign_function(phi, big, s, default_sign=-1)
    r = realizable(big, s2)
    assert not r.feasible and verify_feasibility_result(big, s2, r)


def test_monte_carlo_validation():
    with pytest.raises(InvalidParams):
        monte_carlo_nonprojective(5, 2, 0)
    with pytest.raises(InvalidParams):
        monte_carlo_nonprojective(5, 3, 10, method="k2-criterion")
    with pytest.raises(InvalidParams):
        monte_carlo_nonprojective(5, 2, 10, method="magic")


def test_monte_carlo_is_reproducible_and_near_four_star_fraction():
    a = monte_carlo_nonprojective(4, 2, 10_000, seed=3)
    b = monte_carlo_nonprojective(4, 2, 10_000, seed=3)
    assert a == b
    assert abs(float(a.estimate) - 18 / 64) <= 3 * a.stderr


def test_k2_criterion_implies_lp_nonprojective():
    phi = star_phi(6, 3)
    import numpy as np

    rng = np.random.default_rng(11)
    hits = 0
    for _ in range(200):
        s = SignFunction(tuple(int(v) for v in rng.choice([-1, 1], size=len(phi))))
        if k2_nonprojective(phi, 3, s):
            hits += 1
            r = realizable(phi, s)
            assert not r.feasible and verify_feasibility_result(phi, s, r)
    assert hits > 0


vec6 = st.lists(st.integers(0, 2), min_size=4, max_size=4)


@settings(max_examples=200, deadline=None)
@given(st.lists(vec6.filter(any), min_size=1, max_size=6), st.data())
def test_lp_and_fourier_motzkin_agree(betas, data):
    alpha = (2, 2, 2, 2)
    q = build_quiver(["a", "b", "c", "d"], [])
    betas = tuple(dict.fromkeys(tuple(b) for b in betas))
    phi = PhiSet(q, alpha, (0, 0, 0, 0), "a", betas, (3,) * len(betas))
    s = SignFunction(tuple(data.draw(st.sampled_from([-1, 1])) for _ in betas))
    r = realizable(phi, s)
    assert verify_feasibility_result(phi, s, r)
    assert r.feasible == realizable_fm(phi, s)

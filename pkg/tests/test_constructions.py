import dataclasses
import random

import pytest

from equnif import theories as th
from equnif.constructions import (ShrinkError, more_general_poset, refute_old_shrink_condition, rename_away,
                                  shrink_general, validate_certificate, verify_descending_chain)
from equnif.errors import Refusal
from equnif.generate import terms_up_to
from equnif.preorder import ALL, equivalent, leq
from equnif.terms import Permutation, Substitution, Var, compose_subst
from equnif.theories import el

from conftest import subst, term
from gen import composed_instance


def test_rename_away():
    theta = subst(th.EMPTY, x="f(y,y)")
    out, pi = rename_away(theta, {"x", "y"})
    w = pi("y")
    assert w not in {"x", "y"} and out == Substitution({"x": term(th.EMPTY, f"f({w},{w})"), w: Var("y"), "y": Var(w)})
    restricted, _ = rename_away(theta, {"x", "y"}, restrict=True)
    assert restricted == Substitution({"x": term(th.EMPTY, f"f({w},{w})"), "y": Var(w)})
    assert not restricted.vran & {"x", "y"}
    assert equivalent(th.EMPTY, theta, out, ALL)
    same, pi0 = rename_away(subst(th.EMPTY, x="f(z,z)"), {"x"})
    assert same == subst(th.EMPTY, x="f(z,z)") and pi0.is_identity()


def test_shrink_permutation_collapses_to_identity():
    e = th.EMPTY
    sigma = Permutation.from_dict({"x": "z", "z": "x"}).as_subst()
    theta = subst(e, x="f(y,y)")
    lam = compose_subst(theta, sigma)          # θσ⁻¹ with σ an involution
    c = shrink_general(e, sigma, theta, lam)
    assert c.sigma_prime == Substitution()
    assert not validate_certificate(e, sigma, theta, c)


def test_shrink_fg_is_already_small():
    sigma = Substitution({"x": Var("y"), "y": term(th.FG, "f(y)")})
    theta = subst(th.FG, x="g(y)")
    c = shrink_general(th.FG, sigma, theta, subst(th.FG, y="g(y)"))
    assert c.sigma_prime == sigma


def test_shrink_rejects_bad_witness():
    with pytest.raises(ValueError):
        shrink_general(th.EMPTY, subst(th.EMPTY, x="y"), subst(th.EMPTY, x="z"), Substitution())


def test_shrink_refuses_non_regular(monkeypatch):
    real = th.theory_info

    def fake(tid):
        return dataclasses.replace(real(tid), regular="no")

    monkeypatch.setattr(th, "theory_info", fake)
    with pytest.raises(Refusal):
        shrink_general(th.EMPTY, Substitution(), Substitution(), Substitution())


@pytest.mark.parametrize("tid", [th.EMPTY, th.C, th.AC, th.ACU, th.ACUI, th.FG], ids=str)
def test_shrink_random(tid):
    rng = random.Random(99)
    for _ in range(60):
        sigma, theta, lam = composed_instance(rng, tid)
        c = shrink_general(tid, sigma, theta, lam)
        assert not validate_certificate(tid, sigma, theta, c)
        assert equivalent(tid, sigma, c.sigma_prime, ALL)


@pytest.mark.parametrize("tid", [th.ACU, th.ACUI], ids=str)
def test_shrinking_counterexample_with_unit(tid):
    """σ = {x↦f(x,z)}, θ = λ = {z↦0}: σ ≤^V θ, yet nothing ∼^V σ lives on {z}."""
    sigma = subst(tid, x="f(x,z)")
    theta = subst(tid, z="0")
    assert leq(tid, sigma, theta, ALL)
    with pytest.raises(ShrinkError) as err:
        shrink_general(tid, sigma, theta, theta)
    assert err.value.stage == "stage 1"
    for t in terms_up_to(tid, ("z",), 4):
        assert not equivalent(tid, sigma, Substitution({"z": t}), ALL)


def test_old_condition_fails_for_fg():
    sigma = Substitution({"x": Var("y"), "y": term(th.FG, "f(y)")})
    theta = subst(th.FG, x="g(y)")
    r = refute_old_shrink_condition(th.FG, sigma, theta, 4)
    assert r.refuted and r.checked > 0


def test_old_condition_holds_in_easy_cases():
    r = refute_old_shrink_condition(th.EMPTY, subst(th.EMPTY, x="y"), subst(th.EMPTY, x="f(z,z)"), 2)
    assert not r.refuted
    sigma = subst(th.FG, x="f(y)")
    r = refute_old_shrink_condition(th.FG, sigma, subst(th.FG, x="f(g(f(y)))"), 2)
    assert r.sigma_prime == sigma


def test_poset_empty_theory():
    theta = subst(th.EMPTY, x="f(y,y)")
    rep = more_general_poset(th.EMPTY, theta)
    assert Substitution() in rep.classes
    assert any(equivalent(th.EMPTY, c, theta, ALL) for c in rep.classes)
    assert [rep.classes[i] for i in rep.minimal] == [Substitution()]
    assert rep.every_class_above_minimal()


def test_poset_acui_finite():
    rep = more_general_poset(th.ACUI, subst(th.ACUI, x="f(y,z)"))
    assert 1 < len(rep.classes) < 50 and rep.every_class_above_minimal()
    edges = set(rep.edges)
    for i, j in edges:                 # strict order: irreflexive, antisymmetric, transitive
        assert i != j and (j, i) not in edges
        for k in range(len(rep.classes)):
            if (j, k) in edges:
                assert (i, k) in edges


def test_poset_el_respects_role_depth():
    tid = th.EL("r")
    theta = subst(tid, x="ex_r(y)")
    rep = more_general_poset(tid, theta)
    assert rep.every_class_above_minimal()
    for c in rep.classes:
        for v in ("x", "y"):
            assert el.role_depth(c(v)) <= el.role_depth(theta(v))
            assert {s.fn for s in _subterms(c(v)) if hasattr(s, "fn")} <= {"and", "top", "ex_r"}


def _subterms(t):
    yield t
    for a in getattr(t, "args", ()):
        yield from _subterms(a)


def test_poset_refuses_non_noetherian_candidates():
    with pytest.raises(Refusal):
        more_general_poset(th.ACU, subst(th.ACU, x="f(y,z)"))


def test_chains():
    e = th.EMPTY
    theta = subst(e, x="f(y,y)")
    assert verify_descending_chain(e, [theta, Substitution()]).valid
    twin, _ = rename_away(theta, {"x", "y"})
    bad = verify_descending_chain(e, [theta, twin])
    assert not bad.valid and bad.links == ("equivalent",) and bad.first_failure == 0


def test_acui_chain_bounded_by_poset():
    rep = more_general_poset(th.ACUI, subst(th.ACUI, x="f(y,z)"))
    edges = set(rep.edges)
    n = len(rep.classes)
    longest = {}

    def depth(j):                        # longest chain of strictly more general classes ending at j
        if j not in longest:
            longest[j] = 1 + max((depth(i) for i in range(n) if (i, j) in edges), default=0)
        return longest[j]

    end = max(range(n), key=depth)
    chain = [end]
    while True:
        nxt = [i for i in range(n) if (i, chain[-1]) in edges and depth(i) == depth(chain[-1]) - 1]
        if not nxt:
            break
        chain.append(nxt[0])
    report = verify_descending_chain(th.ACUI, [rep.classes[i] for i in chain])
    assert report.valid and len(chain) <= n


def test_shrink_collapses_idempotent_binding():
    sigma = subst(th.I, x="f(x,x)")
    c = shrink_general(th.I, sigma, Substitution(), Substitution())
    assert c.sigma_prime == Substitution() and c.collapsed == frozenset({"x"})
    assert not validate_certificate(th.I, sigma, Substitution(), c)

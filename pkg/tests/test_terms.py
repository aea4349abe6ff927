import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equnif import theories as th
from equnif.terms import (App, Permutation, Signature, Substitution, TermError, Var, apply_subst,
                          compose_subst, fresh_names, parse_term, permutation_extending,
                          permutation_from_renaming, print_term, restrict_subst, vars_of)

from conftest import subst, term, terms_strategy

F2 = Signature.of(("f", 2))
FG = Signature.of(("f", 2), ("g", 1))


def test_parse_nested():
    assert parse_term("f(x,f(y,z))", F2) == App("f", (Var("x"), App("f", (Var("y"), Var("z")))))


def test_parse_constant():
    assert parse_term("0", Signature.of(("f", 2), ("0", 0))) == App("0")


@pytest.mark.parametrize("bad", ["f(x)", "f(x,y", "x(y)", "f(x,y))", "", "f(x;y)"])
def test_parse_errors(bad):
    with pytest.raises(TermError):
        parse_term(bad, F2)


def test_printer_is_compact():
    assert print_term(parse_term("f( x , g(y) )", FG)) == "f(x,g(y))"


@given(terms_strategy(th.EMPTY))
def test_parse_print_roundtrip(t):
    assert parse_term(print_term(t), th.signature(th.EMPTY)) == t


def test_apply_subst_examples():
    e = th.EMPTY
    assert apply_subst(subst(e, x="f(y,y)"), Var("x")) == term(e, "f(y,y)")
    assert apply_subst(Substitution(), term(e, "f(x,y)")) == term(e, "f(x,y)")
    s = Substitution({"x": Var("y"), "y": term(th.FG, "f(y)")})
    assert apply_subst(s, term(th.EMPTY, "f(x,y)")) == App("f", (Var("y"), App("f", (Var("y"),))))


def test_compose_fg_example():
    lam = Substitution({"y": term(th.FG, "g(y)")})
    sigma = Substitution({"x": Var("y"), "y": term(th.FG, "f(y)")})
    assert compose_subst(lam, sigma) == Substitution({"x": term(th.FG, "g(y)"), "y": term(th.FG, "f(g(y))")})
    assert compose_subst(lam, Substitution()) == lam


def test_compose_prunes_identity():
    lam = Substitution({"x": Var("y")})
    sigma = Substitution({"y": Var("x")})
    rho = compose_subst(lam, sigma)
    assert rho == Substitution({"x": Var("y")})
    for v in ("x", "y"):
        assert rho(v) == apply_subst(lam, sigma(v))


def test_identity_bindings_pruned_and_dom():
    s = Substitution({"x": Var("x"), "y": Var("z")})
    assert s.dom == {"y"} and s.vran == {"z"}
    assert str(s) == "{y:=z}"


def test_restrict():
    th_ = subst(th.EMPTY, x="f(y,y)", z="g(y)")
    assert restrict_subst(th_, {"x"}) == subst(th.EMPTY, x="f(y,y)")
    assert restrict_subst(th_, th_.dom) == th_
    assert restrict_subst(subst(th.EMPTY, x="f(y,y)"), set()) == Substitution()


def test_permutation_from_renaming():
    pi = permutation_from_renaming({"y"}, {"x", "y"})
    w = pi("y")
    assert w not in {"x", "y"} and pi(w) == "y"
    assert permutation_from_renaming(set(), {"x"}).is_identity()


def test_permutation_must_be_closed():
    with pytest.raises(TermError):
        Permutation((("x", "y"),))
    with pytest.raises(TermError):
        permutation_extending({"x": "z", "y": "z"})


def test_permutation_extending_agrees_on_domain():
    pi = permutation_extending({"x": "z", "y": "x"})
    assert pi("x") == "z" and pi("y") == "x"
    assert sorted(pi(v) for v in pi.support) == sorted(pi.support)


def test_fresh_names_avoid_and_deterministic():
    assert fresh_names(3, {"_w1"}) == ["_w0", "_w2", "_w3"]
    assert fresh_names(2) == fresh_names(2)


names = st.sampled_from(["x", "y", "z", "u"])
substs = st.dictionaries(names, terms_strategy(th.EMPTY, ("x", "y", "z", "u"), 4), max_size=3).map(Substitution)


@given(substs, terms_strategy(th.EMPTY, ("x", "y", "z", "u")))
def test_vars_of_application(sigma, t):
    lhs = vars_of(apply_subst(sigma, t))
    rhs = (vars_of(t) - sigma.dom) | restrict_subst(sigma, vars_of(t)).vran
    assert lhs <= rhs


@given(substs, substs, substs)
@settings(max_examples=60)
def test_compose_associative(a, b, c):
    left = compose_subst(compose_subst(a, b), c)
    right = compose_subst(a, compose_subst(b, c))
    for v in ("x", "y", "z", "u", "v"):
        assert left(v) == right(v)


@given(st.sets(names, max_size=3), terms_strategy(th.EMPTY, ("x", "y", "z", "u")))
def test_permutation_inverse_roundtrip(vs, t):
    pi = permutation_from_renaming(vs, {"x", "y", "z", "u"})
    assert apply_subst(pi.inverse().as_subst(), apply_subst(pi.as_subst(), t)) == t
    assert len({pi(v) for v in pi.support}) == len(pi.support)

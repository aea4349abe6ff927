import random
from itertools import product

import pytest

from equnif import theories as th
from equnif.errors import Refusal
from equnif.monoidal import (HypothesisError, Int, Nat, NatPoly, SemiringMatrix, SemiringVector, WordSets,
                             apply_via_matrix, check_restrictive_window, coincide_on_P, greater_than_P,
                             int_abs_candidate, int_usual_candidate, int_window, m_length, nat_preorder,
                             nat_window, pairs_n, poly_preorder, poly_window, refute_restrictive_candidate,
                             subst_to_matrix, term_to_vector, transfer_witness, vector_to_term, violates,
                             words_preorder, words_window)
from equnif.terms import Substitution, Var, apply_subst

from conftest import random_term, subst, term

B2 = ("x1", "x2")
B3 = ("x1", "x2", "x3")


def test_vector_examples():
    v = term_to_vector(th.ACU, term(th.ACU, "f(x1,f(x2,x2))"), B2)
    assert v.entries == (1, 2) and str(v) == "(1, 2)"
    assert term_to_vector(th.ACU, term(th.ACU, "0"), B2).entries == (0, 0)
    fl = th.FL0(1)
    w = term_to_vector(fl, term(fl, "and(x1,all_r1(x1))"), B2)
    assert w.entries == (frozenset({(), ("r1",)}), frozenset())
    assert term_to_vector(fl, term(fl, "top"), B2).entries == (frozenset(), frozenset())
    with pytest.raises(ValueError):
        term_to_vector(th.ACU, term(th.ACU, "f(x1,y)"), B2)


def test_vector_to_term_examples():
    S = Nat()
    assert vector_to_term(th.ACU, SemiringVector(S, (1, 2)), B2) == th.normal_form(th.ACU, term(th.ACU, "f(x1,f(x2,x2))"))
    assert vector_to_term(th.ACU, SemiringVector(S, (0, 0)), B2) == term(th.ACU, "0")
    assert vector_to_term(th.ACU, SemiringVector(S, (1, 0)), B2) == Var("x1")


def test_unsupported_theories_refused():
    with pytest.raises(Refusal):
        term_to_vector(th.ACUh(2), Var("x1"), B2)
    with pytest.raises(Refusal):
        term_to_vector(th.AC, Var("x1"), B2)


def test_matrix_examples():
    M = subst_to_matrix(th.ACU, subst(th.ACU, x1="x2", x2="f(x1,x1)"), B2, B2)
    assert M.rows == ((0, 1), (2, 0)) and M.shape == (2, 2)
    assert subst_to_matrix(th.ACU, Substitution(), B2, B2).rows == ((1, 0), (0, 1))
    assert subst_to_matrix(th.ACU, subst(th.ACU, x1="0"), B2, B2).rows == ((0, 0), (0, 1))
    with pytest.raises(ValueError):
        subst_to_matrix(th.ACU, subst(th.ACU, y="x1"), B2, B2)
    with pytest.raises(ValueError):
        subst_to_matrix(th.ACU, subst(th.ACU, x1="y"), B2, B2)


def test_apply_via_matrix_examples():
    S = Nat()
    M = SemiringMatrix(S, ((0, 1), (2, 0)))
    assert apply_via_matrix(SemiringVector(S, (1, 2)), M).entries == (4, 1)
    v = SemiringVector(S, (3, 5))
    assert apply_via_matrix(v, SemiringMatrix(S, ((1, 0), (0, 1)))) == v
    assert apply_via_matrix(v, SemiringMatrix(S, ((0, 0), (0, 0)))).entries == (0, 0)
    with pytest.raises(ValueError):
        apply_via_matrix(SemiringVector(S, (1,)), M)


def _samples(S, rng):
    if isinstance(S, Int):
        return list(range(-4, 5))
    if isinstance(S, Nat):
        return list(range(6))
    if isinstance(S, WordSets):
        return words_window(S.alphabet, 2, 12, seed=rng.randrange(1000))
    return poly_window(S.k, 2, 12, seed=rng.randrange(1000))


@pytest.mark.parametrize("S", [Nat(), Int(), WordSets(()), WordSets(("r1", "r2")), NatPoly(1), NatPoly(2)], ids=repr)
def test_semiring_laws(S, rng):
    els = _samples(S, rng) + [S.zero, S.one]
    for a in els:
        assert S.add(a, S.zero) == a and S.mul(a, S.one) == a == S.mul(S.one, a)
        assert S.mul(a, S.zero) == S.zero == S.mul(S.zero, a)
    for a, b, c in product(els[:8], repeat=3):
        assert S.add(a, b) == S.add(b, a)
        assert S.add(S.add(a, b), c) == S.add(a, S.add(b, c))
        assert S.mul(S.mul(a, b), c) == S.mul(a, S.mul(b, c))
        assert S.mul(a, S.add(b, c)) == S.add(S.mul(a, b), S.mul(a, c))
        assert S.mul(S.add(a, b), c) == S.add(S.mul(a, c), S.mul(b, c))


MONOIDAL = [th.ACU, th.ACUI, th.FL0(1), th.FL0(2), th.ACUh(1)]


@pytest.mark.parametrize("tid", MONOIDAL, ids=str)
def test_faithfulness(tid):
    rng = random.Random(5)
    terms = [random_term(rng, tid, B3, 3) for _ in range(120)]
    for s, t in zip(terms, terms[1:] + terms[:1]):
        same = term_to_vector(tid, s, B3) == term_to_vector(tid, t, B3)
        assert same == th.eq_modulo(tid, s, t)
        v = term_to_vector(tid, s, B3)
        assert term_to_vector(tid, vector_to_term(tid, v, B3), B3) == v
        assert th.eq_modulo(tid, vector_to_term(tid, v, B3), s)


@pytest.mark.parametrize("tid", MONOIDAL, ids=str)
def test_functoriality(tid):
    rng = random.Random(6)
    for _ in range(80):
        t = random_term(rng, tid, B3, 3)
        sigma = Substitution({x: random_term(rng, tid, B2, 2) for x in B3 if rng.random() < 0.7})
        lhs = term_to_vector(tid, apply_subst(sigma, t), B3)
        rhs = apply_via_matrix(term_to_vector(tid, t, B3), subst_to_matrix(tid, sigma, B3, B3))
        assert lhs == rhs


def test_m_length():
    assert m_length(frozenset()) == -1
    assert m_length(frozenset({()})) == 0
    assert m_length(frozenset({("h1",), ("h1", "h2", "h1")})) == 3


def test_windows_clean():
    assert check_restrictive_window(nat_preorder(), nat_window(20)).ok
    sample = words_window(("h1", "h2"), 3, 14, seed=1)
    assert check_restrictive_window(words_preorder(("h1", "h2")), sample).ok
    assert check_restrictive_window(poly_preorder(1), poly_window(1, 3, 20, seed=2)).ok


def test_words_below_set():
    pre = words_preorder(("h1", "h2"))
    below = set(pre.below(frozenset({("h1", "h1")})))
    assert len(below) == 2 ** 7           # subsets of the 7 words of length ≤ 2
    assert all(m_length(b) <= 2 for b in below)


def test_refuter_int_abs():
    pre = int_abs_candidate()
    assert violates(pre, 2, 1, 5, -5)
    r = refute_restrictive_candidate(pre, int_window(6))
    assert r.condition2 is not None and violates(pre, 2, *r.condition2)
    assert r.first[0] in ("condition 1", "condition 2")


def test_refuter_nat_and_int_usual():
    r = refute_restrictive_candidate(nat_preorder(), nat_window(6))
    assert r.first is None
    u = refute_restrictive_candidate(int_usual_candidate(), int_window(6), below_bound=5)
    assert u.condition3 == (-1, 6)
    pre = int_usual_candidate()
    grow = [sum(1 for b in int_window(n) if pre.leq(b, 0)) for n in (3, 6, 9)]
    assert grow == [4, 7, 10]


def test_greater_than_P():
    pre = nat_preorder()
    S = Nat()
    a, b = SemiringMatrix(S, ((5,),)), SemiringMatrix(S, ((2,),))
    assert greater_than_P(a, b, [(1, 1)], pre) and not greater_than_P(b, a, [(1, 1)], pre)
    assert greater_than_P(b, a, [], pre)
    with pytest.raises(ValueError):
        greater_than_P(a, SemiringMatrix(S, ((1, 2), (3, 4))), [], pre)
    with pytest.raises(ValueError):
        greater_than_P(a, b, [(0, 1)], pre)


def test_greater_than_P_transitive():
    rng = random.Random(8)
    pre = nat_preorder()
    S = Nat()
    mats = [SemiringMatrix(S, tuple(tuple(rng.randrange(6) for _ in range(2)) for _ in range(2))) for _ in range(25)]
    Ps = [[], [(1, 1)], [(1, 2), (2, 1)], pairs_n(2)]
    for P in Ps:
        for a, b, c in product(mats, repeat=3):
            if greater_than_P(a, b, P, pre) and greater_than_P(b, c, P, pre):
                assert greater_than_P(a, c, P, pre)


def test_coincide_on_P():
    S = Nat()
    a = SemiringMatrix(S, ((1, 0), (0, 1)))
    b = SemiringMatrix(S, ((1, 7), (0, 1)))
    assert coincide_on_P(a, a, pairs_n(2))
    assert not coincide_on_P(a, b, [(1, 2)])
    assert coincide_on_P(a, b, [(1, 1), (2, 2)])


def test_transfer_witness_examples():
    tid = th.ACU
    s2 = subst(tid, x2="0")
    s1 = subst(tid, x1="f(x1,f(x2,x2))", x2="0")
    lam = subst(tid, x2="0")
    s3 = subst(tid, x1="f(x1,x2)", x2="0")
    w = transfer_witness(tid, s1, s2, s3, [(1, 2)], lam, B2)
    assert all(th.eq_modulo(tid, apply_subst(w.lam, s3(x)), s2(x)) for x in B2)
    assert transfer_witness(tid, s1, s2, s1, [], lam, B2).lam == lam
    with pytest.raises(HypothesisError):
        transfer_witness(tid, s2, s1, s3, [(1, 2)], Substitution(), B2)
    with pytest.raises(HypothesisError):       # s1 is not ⊐ s2 at (1,1)
        transfer_witness(tid, s1, s2, s3, [(1, 1)], lam, B2)


def test_transfer_witness_random():
    """Whenever the hypotheses validate, the transferred witness validates (checked inside)."""
    tid = th.ACU
    rng = random.Random(11)
    validated = 0
    for _ in range(400):
        s1 = Substitution({x: random_term(rng, tid, B2, 2) for x in B2})
        lam = Substitution({x: random_term(rng, tid, B2, 1) for x in B2 if rng.random() < 0.6})
        s2 = Substitution({x: apply_subst(lam, s1(x)) for x in B2})
        s3 = Substitution({x: random_term(rng, tid, B2, 2) for x in B2})
        P = rng.choice([[], [(1, 1)], [(1, 2)], [(2, 1)], [(1, 2), (2, 2)]])
        try:
            transfer_witness(tid, s1, s2, s3, P, lam, B2)
            validated += 1
        except HypothesisError:
            pass
    assert validated > 0

"""Semiring representations of monoidal theories and restrictive preorders."""
from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations, product
from typing import Any, Callable, Iterable, Iterator, Sequence

from . import theories as th
from .errors import Refusal
from .preorder import Witness
from .terms import Substitution, Term, Var, apply_subst, check_signature, vars_of

Elem = Any


# ---------------------------------------------------------------- semirings

class Semiring:
    name = "semiring"
    zero: Elem
    one: Elem

    def add(self, a: Elem, b: Elem) -> Elem:
        raise NotImplementedError

    def mul(self, a: Elem, b: Elem) -> Elem:
        raise NotImplementedError

    def fmt(self, a: Elem) -> str:
        return str(a)

    def sum(self, items: Iterable[Elem]) -> Elem:
        out = self.zero
        for a in items:
            out = self.add(out, a)
        return out

    def __repr__(self) -> str:
        return self.name


@dataclass(frozen=True, repr=False)
class Nat(Semiring):
    name = "nat"
    zero, one = 0, 1

    def add(self, a, b):
        return a + b

    def mul(self, a, b):
        return a * b


@dataclass(frozen=True, repr=False)
class Int(Nat):
    name = "int"


@dataclass(frozen=True, repr=False)
class WordSets(Semiring):
    """Finite sets of words over Δ; union and element-wise concatenation."""

    alphabet: tuple[str, ...] = ()

    @property
    def name(self) -> str:
        return f"words:{','.join(self.alphabet)}"

    zero = frozenset()
    one = frozenset({()})

    def add(self, a, b):
        return a | b

    def mul(self, a, b):
        return frozenset(u + v for u in a for v in b)

    def fmt(self, a) -> str:
        words = sorted(a, key=lambda w: (len(w), w))
        return "{" + ",".join("".join(w) if w else "ε" for w in words) + "}"

    def words_up_to(self, n: int) -> list[tuple[str, ...]]:
        return [w for k in range(n + 1) for w in product(self.alphabet, repeat=k)]


def m_length(lang: frozenset) -> int:
    """Maximal word length; the empty language gets −1 so it sits below {ε}."""
    return max((len(w) for w in lang), default=-1)


@dataclass(frozen=True, repr=False)
class NatPoly(Semiring):
    """ℕ[x1..xk] with polynomials stored as sorted (exponent tuple, coefficient) pairs."""

    k: int = 1

    @property
    def name(self) -> str:
        return f"poly:{self.k}"

    @property
    def zero(self):
        return ()

    @property
    def one(self):
        return (((0,) * self.k, 1),)

    @staticmethod
    def _norm(d: dict) -> tuple:
        return tuple(sorted((e, c) for e, c in d.items() if c))

    def add(self, a, b):
        d = dict(a)
        for e, c in b:
            d[e] = d.get(e, 0) + c
        return self._norm(d)

    def mul(self, a, b):
        d: dict = {}
        for e1, c1 in a:
            for e2, c2 in b:
                e = tuple(x + y for x, y in zip(e1, e2))
                d[e] = d.get(e, 0) + c1 * c2
        return self._norm(d)

    def monomial(self, exps: Sequence[int], coeff: int = 1):
        return self._norm({tuple(exps): coeff})

    def fmt(self, a) -> str:
        if not a:
            return "0"
        parts = []
        for e, c in sorted(a, reverse=True):
            mono = "*".join(f"x{i + 1}^{p}" if p > 1 else f"x{i + 1}" for i, p in enumerate(e) if p)
            parts.append(mono if c == 1 and mono else (f"{c}*{mono}" if mono else str(c)))
        return " + ".join(parts)


def coeff_max(p) -> int:
    return max((c for _, c in p), default=0)


def exp_max(p) -> int:
    return max((x for e, _ in p for x in e), default=0)


# ---------------------------------------------------------------- vectors and matrices

@dataclass(frozen=True)
class SemiringVector:
    semiring: Semiring
    entries: tuple

    def __len__(self) -> int:
        return len(self.entries)

    def __str__(self) -> str:
        return "(" + ", ".join(self.semiring.fmt(a) for a in self.entries) + ")"


@dataclass(frozen=True)
class SemiringMatrix:
    semiring: Semiring
    rows: tuple[tuple, ...]

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def entry(self, i: int, j: int) -> Elem:
        return self.rows[i][j]

    def __str__(self) -> str:
        return "\n".join("(" + ", ".join(self.semiring.fmt(a) for a in r) + ")" for r in self.rows)


def semiring_of(tid: th.TheoryId) -> Semiring:
    if tid.kind == "acu":
        return Nat()
    if tid.kind == "acui":
        return WordSets(())
    if tid.kind == "fl0":
        return WordSets(tuple(f"r{i}" for i in range(1, tid.k + 1)))
    if tid.kind == "acuh":
        if tid.k != 1:
            raise Refusal("term vectors for ACUh are supported for k = 1 only")
        return NatPoly(1)
    raise Refusal(f"{tid} is not a supported monoidal theory")


def term_to_vector(tid: th.TheoryId, t: Term, basis: Sequence[str]) -> SemiringVector:
    S = semiring_of(tid)
    check_signature(t, th.signature(tid))
    extra = vars_of(t) - set(basis)
    if extra:
        raise ValueError(f"variables {sorted(extra)} are outside the basis")
    idx = {x: i for i, x in enumerate(basis)}
    vec = [S.zero] * len(basis)
    if tid.kind in ("acu", "acui"):
        nf = th.normal_form(tid, t)
        leaves = [] if nf == th.ZERO else th._flatten(nf, "f")
        for leaf in leaves:
            i = idx[leaf.name]
            vec[i] = S.add(vec[i], S.one)
    else:
        for word, v in th.word_atoms(tid, t):
            i = idx[v]
            if isinstance(S, NatPoly):
                elem = S.monomial((len(word),))
            else:
                elem = frozenset({word})
            vec[i] = S.add(vec[i], elem)
    return SemiringVector(S, tuple(vec))


def vector_to_term(tid: th.TheoryId, v: SemiringVector, basis: Sequence[str]) -> Term:
    S = v.semiring
    if tid.kind in ("acu", "acui"):
        leaves: list[Term] = []
        for x, a in zip(basis, v.entries):
            n = a if isinstance(S, Nat) else (1 if a else 0)
            leaves.extend([Var(x)] * n)
        return th.normal_form(tid, th._nest("f", leaves, th.ZERO))
    atoms = []
    for x, a in zip(basis, v.entries):
        if isinstance(S, NatPoly):
            for e, c in a:
                atoms.extend([(("h1",) * e[0], x)] * c)
        else:
            atoms.extend((w, x) for w in a)
    return th.normal_form(tid, th.atoms_to_term(tid, atoms))


def subst_to_matrix(tid: th.TheoryId, sigma: Substitution, dom_basis: Sequence[str],
                    ran_basis: Sequence[str]) -> SemiringMatrix:
    if not sigma.dom <= set(dom_basis):
        raise ValueError(f"Dom(σ) = {sorted(sigma.dom)} is not within {list(dom_basis)}")
    rows = tuple(term_to_vector(tid, sigma(x), ran_basis).entries for x in dom_basis)
    return SemiringMatrix(semiring_of(tid), rows)


def apply_via_matrix(v: SemiringVector, M: SemiringMatrix) -> SemiringVector:
    n, m = M.shape
    if len(v) != n:
        raise ValueError(f"vector of length {len(v)} against a {n}×{m} matrix")
    S = v.semiring
    out = tuple(S.sum(S.mul(v.entries[k], M.rows[k][j]) for k in range(n)) for j in range(m))
    return SemiringVector(S, out)


# ---------------------------------------------------------------- restrictive preorders

@dataclass(frozen=True)
class RestrictivePreorder:
    semiring: Semiring
    leq: Callable[[Elem, Elem], bool]
    below: Callable[[Elem], Iterable[Elem]] | None = None
    label: str = ""

    def lt(self, a: Elem, b: Elem) -> bool:
        return self.leq(a, b) and not self.leq(b, a)


def nat_preorder() -> RestrictivePreorder:
    return RestrictivePreorder(Nat(), lambda a, b: a <= b, lambda a: range(a + 1), "usual order on ℕ")


def words_preorder(alphabet: Sequence[str]) -> RestrictivePreorder:
    S = WordSets(tuple(alphabet))

    def below(a):
        words = S.words_up_to(m_length(a)) if m_length(a) >= 0 else []
        for r in range(len(words) + 1):
            for ws in combinations(words, r):
                yield frozenset(ws)

    return RestrictivePreorder(S, lambda a, b: m_length(a) <= m_length(b), below, "maximal word length")


def poly_preorder(k: int = 1) -> RestrictivePreorder:
    S = NatPoly(k)

    def weight(p) -> int:
        return coeff_max(p) + exp_max(p)

    def below(a):
        n = weight(a)
        monos = list(product(range(n + 1), repeat=k))
        for coeffs in product(range(n + 1), repeat=len(monos)):
            p = S._norm(dict(zip(monos, coeffs)))
            if weight(p) <= n:
                yield p

    return RestrictivePreorder(S, lambda a, b: weight(a) <= weight(b), below,
                               "max coefficient plus max exponent")


def int_abs_candidate() -> RestrictivePreorder:
    return RestrictivePreorder(Int(), lambda a, b: abs(a) <= abs(b), None, "|a| ≤ |b| on ℤ")


def int_usual_candidate() -> RestrictivePreorder:
    return RestrictivePreorder(Int(), lambda a, b: a <= b, None, "usual order on ℤ")


def preorder_for(tid: th.TheoryId) -> RestrictivePreorder:
    S = semiring_of(tid)
    if isinstance(S, Nat):
        return nat_preorder()
    if isinstance(S, WordSets):
        return words_preorder(S.alphabet)
    return poly_preorder(S.k)


# ---------------------------------------------------------------- samples

def nat_window(n: int) -> list[int]:
    return list(range(n + 1))


def int_window(n: int) -> list[int]:
    return list(range(-n, n + 1))


def words_window(alphabet: Sequence[str], max_len: int, size: int, seed: int = 0) -> list[frozenset]:
    S = WordSets(tuple(alphabet))
    words = S.words_up_to(max_len)
    rng = random.Random(seed)
    out = {frozenset(), frozenset({()})}
    size = min(size, 2 ** len(words))
    while len(out) < size:
        out.add(frozenset(w for w in words if rng.random() < 0.25))
    return sorted(out, key=lambda a: (m_length(a), sorted(a)))


def poly_window(k: int, bound: int, size: int, seed: int = 0) -> list[tuple]:
    S = NatPoly(k)
    monos = list(product(range(bound + 1), repeat=k))
    rng = random.Random(seed)
    out = {S.zero, S.one}
    while len(out) < size:
        out.add(S._norm({e: rng.randint(0, bound) for e in monos if rng.random() < 0.5}))
    return sorted(out)


# ---------------------------------------------------------------- checks

@dataclass(frozen=True)
class WindowReport:
    label: str
    sample_size: int
    triples: int
    violations: tuple[tuple, ...]
    below_sizes: tuple[int, ...]

    @property
    def ok(self) -> bool:
        return not self.violations


def violates(pre: RestrictivePreorder, cond: int, a: Elem, b: Elem, c: Elem) -> bool:
    S = pre.semiring
    if not pre.lt(a, b):
        return False
    if cond == 1:
        return c != S.zero and not pre.lt(a, S.mul(b, c))
    return not pre.lt(a, S.add(b, c))


def check_restrictive_window(pre: RestrictivePreorder, sample: Sequence[Elem]) -> WindowReport:
    S = pre.semiring
    bad: list[tuple] = []
    for a in sample:
        if not pre.leq(a, a):
            bad.append(("reflexive", a))
        for b in sample:
            if not (pre.leq(a, b) or pre.leq(b, a)):
                bad.append(("total", a, b))
    triples = 0
    for a, b, c in product(sample, repeat=3):
        triples += 1
        if pre.leq(a, b) and pre.leq(b, c) and not pre.leq(a, c):
            bad.append(("transitive", a, b, c))
        for cond in (1, 2):
            if violates(pre, cond, a, b, c):
                bad.append((f"condition {cond}", a, b, c))
    sizes = []
    if pre.below is None:
        bad.append(("condition 3", "no enumerator"))
    else:
        for a in sample:
            below = set(pre.below(a))
            sizes.append(len(below))
            if any(not pre.leq(b, a) for b in below):
                bad.append(("condition 3", a, "enumerator yields an element not below"))
            missing = [b for b in sample if pre.leq(b, a) and b not in below]
            if missing:
                bad.append(("condition 3", a, "enumerator misses", missing[0]))
    return WindowReport(pre.label, len(sample), triples, tuple(bad), tuple(sizes))


@dataclass(frozen=True)
class Refutation:
    condition1: tuple | None
    condition2: tuple | None
    condition3: tuple | None

    @property
    def first(self) -> tuple | None:
        for label, v in (("condition 1", self.condition1), ("condition 2", self.condition2),
                         ("condition 3", self.condition3)):
            if v is not None:
                return (label,) + v
        return None


def all_violations(pre: RestrictivePreorder, window: Sequence[Elem], cond: int) -> Iterator[tuple]:
    for a, b, c in product(window, repeat=3):
        if violates(pre, cond, a, b, c):
            yield (a, b, c)


def refute_restrictive_candidate(pre: RestrictivePreorder, window: Sequence[Elem],
                                 below_bound: int | None = None) -> Refutation:
    """First violations of conditions 1 and 2 in window order, and condition-3 evidence."""
    c1 = next(all_violations(pre, window, 1), None)
    c2 = next(all_violations(pre, window, 2), None)
    c3 = None
    if below_bound is not None:
        for a in window:
            n = sum(1 for b in window if pre.leq(b, a))
            if n > below_bound:
                c3 = (a, n)
                break
    return Refutation(c1, c2, c3)


# ---------------------------------------------------------------- ⊐_P and witness transfer

Pairs = Iterable[tuple[int, int]]


def _same_shape(s1: SemiringMatrix, s2: SemiringMatrix) -> int:
    n, m = s1.shape
    if s2.shape != (n, m) or n != m:
        raise ValueError(f"expected equal square matrices, got {s1.shape} and {s2.shape}")
    return n


def greater_than_P(s1: SemiringMatrix, s2: SemiringMatrix, P: Pairs, pre: RestrictivePreorder) -> bool:
    """For all (i,j) ∈ P and every k: s1[i][j] is strictly above s2[i][k].  Indices run from 1."""
    n = _same_shape(s1, s2)
    P = _check_pairs(P, n)
    return all(pre.lt(s2.rows[i - 1][k], s1.rows[i - 1][j - 1]) for i, j in P for k in range(n))


def coincide_on_P(s1: SemiringMatrix, s2: SemiringMatrix, P: Pairs) -> bool:
    n = _same_shape(s1, s2)
    return all(s1.rows[i - 1][j - 1] == s2.rows[i - 1][j - 1] for i, j in _check_pairs(P, n))


def pairs_n(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]


def _check_pairs(P: Pairs, n: int) -> list[tuple[int, int]]:
    P = list(P)
    for i, j in P:
        if not (1 <= i <= n and 1 <= j <= n):
            raise ValueError(f"pair {(i, j)} outside pairs({n})")
    return P


class HypothesisError(ValueError):
    pass


def normalize_witness(lam: Substitution, basis: Sequence[str]) -> Substitution:
    """λ′ with Dom ∪ VRan within X_n: outside variables go to x1, bindings outside X_n dropped."""
    X = set(basis)
    outside = {z: Var(basis[0]) for z in lam.vran - X}
    return Substitution({x: apply_subst(outside, lam(x)) for x in basis})


def transfer_witness(tid: th.TheoryId, s1: Substitution, s2: Substitution, s3: Substitution,
                     P: Pairs, lam: Substitution, basis: Sequence[str],
                     pre: RestrictivePreorder | None = None) -> Witness:
    """The witness λ of s1 ≤ s2 reused for s3 ≤ s2 under the three-substitution hypotheses."""
    P = list(P)
    pre = pre or preorder_for(tid)
    n = len(basis)
    X = set(basis)
    for name, s in (("σ1", s1), ("σ2", s2), ("σ3", s3)):
        if not (s.dom | s.vran) <= X:
            raise HypothesisError(f"{name} leaves the basis {list(basis)}")
    lam = normalize_witness(lam, basis)
    for x in basis:
        if not th.eq_modulo(tid, apply_subst(lam, s1(x)), s2(x)):
            raise HypothesisError(f"λσ1 ≉ σ2 at {x}")
    m1, m2, m3 = (subst_to_matrix(tid, s, basis, basis) for s in (s1, s2, s3))
    if not greater_than_P(m1, m2, P, pre):
        raise HypothesisError("σ1 is not greater than σ2 w.r.t. P")
    rest = [ij for ij in pairs_n(n) if ij not in set(P)]
    if not coincide_on_P(m1, m3, rest):
        raise HypothesisError("σ1 and σ3 differ outside P")
    for x in basis:
        if not th.eq_modulo(tid, apply_subst(lam, s3(x)), s2(x)):
            raise AssertionError(f"transferred witness fails at {x}")
    return Witness(lam)

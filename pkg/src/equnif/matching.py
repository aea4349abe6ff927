"""Matching modulo a theory: find λ with λ(p) ≈_E t, target variables frozen.

Each theory gets a dedicated engine.  Engines yield candidate bindings; the
caller re-validates every witness with ``eq_modulo``.
"""
from __future__ import annotations

from collections import Counter
from itertools import product
from typing import Iterator, Sequence

from . import theories as th
from .diophantine import DioSystem, min_solutions_inhomogeneous
from .errors import Undecided
from .rewriting import match as syn_match
from .terms import App, Term, Var, term_key, vars_of, vars_of_all
from .theories import band, el

Pairs = Sequence[tuple[Term, Term]]

PRODUCT_CAP = 2_000_000


def _flat_leaves(t: Term, fn: str = "f") -> list[Term]:
    return th._flatten(t, fn)


def _nest(leaves: list[Term], fn: str = "f", unit: Term | None = None) -> Term:
    return th._nest(fn, leaves, unit)


# ---------------------------------------------------------------- ∅, C, I: tree walkers

def _walk_empty(pairs: Pairs) -> Iterator[dict[str, Term]]:
    b: dict[str, Term] | None = {}
    for p, t in pairs:
        b = syn_match(p, t, b)
        if b is None:
            return
    yield b


def _walk_c(pairs: list[tuple[Term, Term]], b: dict[str, Term]) -> Iterator[dict[str, Term]]:
    if not pairs:
        yield b
        return
    (p, t), rest = pairs[0], pairs[1:]
    if isinstance(p, Var):
        bound = b.get(p.name)
        if bound is None:
            nb = dict(b)
            nb[p.name] = t
            yield from _walk_c(rest, nb)
        elif bound == t:
            yield from _walk_c(rest, b)
        return
    if not isinstance(t, App) or t.fn != p.fn or len(t.args) != len(p.args):
        return
    if p.fn == "f" and len(p.args) == 2:
        orders = [t.args] if t.args[0] == t.args[1] else [t.args, t.args[::-1]]
        for ta in orders:
            yield from _walk_c(list(zip(p.args, ta)) + rest, b)
    else:
        yield from _walk_c(list(zip(p.args, t.args)) + rest, b)


def _walk_i(pairs: list[tuple[Term, Term]], b: dict[str, Term]) -> Iterator[dict[str, Term]]:
    """Matching modulo f(x,x)=x against I-normal targets."""
    if not pairs:
        yield b
        return
    (p, t), rest = pairs[0], pairs[1:]
    if isinstance(p, Var):
        bound = b.get(p.name)
        if bound is None:
            nb = dict(b)
            nb[p.name] = t
            yield from _walk_i(rest, nb)
        elif th._nf_i(bound) == t:
            yield from _walk_i(rest, b)
        return
    # λ(f(p1,p2)) normalizes to t iff both sides hit t, or t = f(t1,t2) split
    p1, p2 = p.args
    yield from _walk_i([(p1, t), (p2, t)] + rest, b)
    if isinstance(t, App) and t.fn == "f":
        t1, t2 = t.args
        if t1 != t2:
            yield from _walk_i([(p1, t1), (p2, t2)] + rest, b)


# ---------------------------------------------------------------- A: sequence splits

def _walk_a(eqs: list[tuple[list[str], list[str]]], b: dict[str, tuple[str, ...]]) -> Iterator[dict]:
    if not eqs:
        yield b
        return
    (ps, ts), rest = eqs[0], eqs[1:]
    if not ps:
        if not ts:
            yield from _walk_a(rest, b)
        return
    v, more = ps[0], ps[1:]
    bound = b.get(v)
    if bound is not None:
        if tuple(ts[:len(bound)]) == bound:
            yield from _walk_a([(more, ts[len(bound):])] + rest, b)
        return
    max_len = len(ts) - len(more)
    for k in range(1, max_len + 1):
        nb = dict(b)
        nb[v] = tuple(ts[:k])
        yield from _walk_a([(more, ts[k:])] + rest, nb)


# ---------------------------------------------------------------- AC / ACU: per-coordinate Diophantine

def _counts(t: Term) -> Counter:
    c: Counter = Counter()
    for leaf in _flat_leaves(t):
        if isinstance(leaf, Var):
            c[leaf.name] += 1
        elif leaf != th.ZERO:
            raise Undecided(f"non-elementary leaf {leaf} in AC-like matching")
    return c


def _walk_acu(pairs: Pairs, nonempty: bool) -> Iterator[dict[str, Term]]:
    pats = [_counts(p) for p, _ in pairs]
    tgts = [_counts(t) for _, t in pairs]
    pvars = sorted(set().union(*pats)) if pats else []
    consts = sorted(set().union(*tgts)) if tgts else []
    # every equation with an empty pattern must have an empty target
    for pc, tc in zip(pats, tgts):
        if not pc and tc:
            return
    per_const: list[list[tuple[int, ...]]] = []
    for c in consts:
        rows = [tuple(pc.get(v, 0) for v in pvars) for pc in pats]
        rhs = [tc.get(c, 0) for tc in tgts]
        sols, _ = min_solutions_inhomogeneous(DioSystem.inhomogeneous(rows, rhs, pvars))
        if not sols:
            return
        per_const.append(sorted(sols))
    if nonempty:
        yield from _ac_choose(pvars, consts, per_const)
        return
    choice = [s[0] for s in per_const]
    yield _multiset_binding(pvars, consts, choice)


def _ac_choose(pvars, consts, per_const) -> Iterator[dict[str, Term]]:
    n = len(pvars)
    chosen: list[tuple[int, ...]] = []

    def rec(i: int, covered: int) -> Iterator[dict[str, Term]]:
        if i == len(per_const):
            if covered == (1 << n) - 1:
                yield _multiset_binding(pvars, consts, chosen)
            return
        remaining_mask = 0
        for sols in per_const[i:]:
            for s in sols:
                for j, x in enumerate(s):
                    if x:
                        remaining_mask |= 1 << j
        if (covered | remaining_mask) != (1 << n) - 1:
            return
        for s in per_const[i]:
            chosen.append(s)
            mask = covered
            for j, x in enumerate(s):
                if x:
                    mask |= 1 << j
            yield from rec(i + 1, mask)
            chosen.pop()

    yield from rec(0, 0)


def _multiset_binding(pvars, consts, choice) -> dict[str, Term]:
    b: dict[str, Term] = {}
    for j, v in enumerate(pvars):
        leaves: list[Term] = []
        for c, sol in zip(consts, choice):
            leaves.extend([Var(c)] * sol[j])
        b[v] = _nest(leaves, "f", th.ZERO)
    return b


# ---------------------------------------------------------------- ACUI / ACI: maximal set solution

def _var_set(t: Term) -> frozenset[str]:
    out = set()
    for leaf in _flat_leaves(t):
        if isinstance(leaf, Var):
            out.add(leaf.name)
        elif leaf != th.ZERO:
            raise Undecided(f"non-elementary leaf {leaf} in set matching")
    return frozenset(out)


def set_match(pats: list[frozenset[str]], tgts: list[frozenset[str]], nonempty: bool) -> dict[str, frozenset[str]] | None:
    pvars = sorted(set().union(*pats)) if pats else []
    lam: dict[str, frozenset[str]] = {}
    for v in pvars:
        acc: frozenset[str] | None = None
        for ps, ts in zip(pats, tgts):
            if v in ps:
                acc = ts if acc is None else acc & ts
        lam[v] = acc or frozenset()
        if nonempty and not lam[v]:
            return None
    for ps, ts in zip(pats, tgts):
        got = frozenset().union(*(lam[v] for v in ps)) if ps else frozenset()
        if got != ts:
            return None
    return lam


def _walk_acui(pairs: Pairs, nonempty: bool) -> Iterator[dict[str, Term]]:
    pats = [_var_set(p) for p, _ in pairs]
    tgts = [_var_set(t) for _, t in pairs]
    lam = set_match(pats, tgts, nonempty)
    if lam is None:
        return
    yield {v: _nest([Var(c) for c in sorted(s)], "f", None if nonempty else th.ZERO) for v, s in lam.items()}


# ---------------------------------------------------------------- AI: free band candidates

AI_LETTER_CAP = 3


def _walk_ai(pairs: Pairs) -> Iterator[dict[str, Term]]:
    pwords = [[leaf.name for leaf in _flat_leaves(p)] for p, _ in pairs]
    twords = [tuple(leaf.name for leaf in _flat_leaves(t)) for _, t in pairs]
    tkeys = [band.band_key(w) for w in twords]
    pvars = sorted({v for w in pwords for v in w})
    allowed: dict[str, set[str]] = {}
    for w, tw in zip(pwords, twords):
        for v in w:
            allowed[v] = set(tw) if v not in allowed else allowed[v] & set(tw)
    cands: dict[str, tuple] = {}
    total = 1
    for v in pvars:
        letters = tuple(sorted(allowed[v]))
        if len(letters) > AI_LETTER_CAP:
            raise Undecided(f"AI matching bound: {len(letters)} letters exceed {AI_LETTER_CAP}")
        cands[v] = band.band_elements(letters) if letters else ()
        total *= max(1, len(cands[v]))
    if total > PRODUCT_CAP:
        raise Undecided("AI matching candidate space exceeds its bound")
    # check an equation as soon as all of its variables are assigned
    order = pvars
    ready: dict[int, list[int]] = {}
    for e, w in enumerate(pwords):
        last = max(order.index(v) for v in w)
        ready.setdefault(last, []).append(e)
    assign: dict[str, tuple] = {}

    def rec(i: int) -> Iterator[dict[str, Term]]:
        if i == len(order):
            yield {v: _nest([Var(c) for c in assign[v]]) for v in order}
            return
        v = order[i]
        for cand in cands[v]:
            assign[v] = cand
            ok = True
            for e in ready.get(i, ()):
                word = tuple(c for x in pwords[e] for c in assign[x])
                if band.band_key(word) != tkeys[e]:
                    ok = False
                    break
            if ok:
                yield from rec(i + 1)
        assign.pop(v, None)

    yield from rec(0)


# ---------------------------------------------------------------- D: finite classes of targets

def _walk_finite(tid: th.TheoryId, pairs: Pairs) -> Iterator[dict[str, Term]]:
    classes = [sorted(th.enumerate_class(tid, t), key=term_key) for _, t in pairs]
    total = 1
    for c in classes:
        total *= len(c)
    pats = [p for p, _ in pairs]

    def rec(i: int, b: dict[str, Term]) -> Iterator[dict[str, Term]]:
        if i == len(pats):
            yield b
            return
        for member in classes[i]:
            nb = syn_match(pats[i], member, b)
            if nb is not None:
                yield from rec(i + 1, nb)

    yield from rec(0, {})


# ---------------------------------------------------------------- FG: bicyclic words

def _fg_word(t: Term) -> tuple[int, int, str]:
    """Normal form g^a f^b (x) read outside-in; returns (a, b, x)."""
    a = b = 0
    s = t
    while isinstance(s, App):
        if s.fn == "g":
            if b:
                raise ValueError("not in FG normal form")
            a += 1
        else:
            b += 1
        s = s.args[0]
    return a, b, s.name


def _fg_term(a: int, b: int, x: str) -> Term:
    t: Term = Var(x)
    for _ in range(b):
        t = App("f", (t,))
    for _ in range(a):
        t = App("g", (t,))
    return t


def _fg_solutions(pa: int, pb: int, ta: int, tb: int) -> set[tuple[int, int]]:
    """All (c, d) with (pa,pb)·(c,d) = (ta,tb) in the bicyclic monoid."""
    out = set()
    c = ta - pa + pb
    if ta >= pa and c >= pb:
        out.add((c, tb))
    if pa == ta:
        for c in range(0, pb):
            d = tb - pb + c
            if d >= 0:
                out.add((c, d))
    return out


def _walk_fg(pairs: Pairs) -> Iterator[dict[str, Term]]:
    sols: dict[str, set[tuple[int, int, str]]] = {}
    for p, t in pairs:
        pa, pb, v = _fg_word(th._nf_fg(p))
        ta, tb, c = _fg_word(t)
        here = {(x, y, c) for x, y in _fg_solutions(pa, pb, ta, tb)}
        sols[v] = here if v not in sols else sols[v] & here
        if not sols[v]:
            return
    yield {v: _fg_term(*min(s)) for v, s in sorted(sols.items())}


# ---------------------------------------------------------------- EL: bounded candidates

def _el_apply(c: el.Concept, lam: dict[str, el.Concept]) -> el.Concept:
    atoms: set[str] = set()
    exs: set = set()
    for a in c.atoms:
        if a in lam:
            atoms |= lam[a].atoms
            exs |= lam[a].exists
        else:
            atoms.add(a)
    for r, d in c.exists:
        exs.add((r, _el_apply(d, lam)))
    return el.Concept(frozenset(atoms), frozenset(exs))


def _walk_el(tid: th.TheoryId, pairs: Pairs) -> Iterator[dict[str, Term]]:
    pats = [el.from_term(p) for p, _ in pairs]
    tgts = [el.reduce(el.from_term(t)) for _, t in pairs]
    pvars = sorted(vars_of_all(p for p, _ in pairs))
    cands: dict[str, list[el.Concept]] = {}
    total = 1
    for v in pvars:
        names: set[str] = set()
        roles: set[str] = set()
        rd = 0
        for (p, t), tc in zip(pairs, tgts):
            if v in vars_of(p):
                names |= tc.names()
                roles |= tc.roles()
                rd = max(rd, tc.depth())
        pool = el.concepts_up_to(tuple(names), tuple(roles), rd)
        for pc, tc in zip(pats, tgts):
            if v in pc.atoms:  # top-level conjunct: target must be subsumed by λ(v)
                pool = [x for x in pool if el.subsumed(tc, x)]
        cands[v] = pool
        total *= max(1, len(pool))
    if total > PRODUCT_CAP:
        raise Undecided("EL matching candidate space exceeds its bound")
    order = pvars
    ready: dict[int, list[int]] = {}
    for e, (p, _) in enumerate(pairs):
        vs = vars_of(p)
        last = max((order.index(v) for v in vs), default=-1)
        ready.setdefault(last, []).append(e)
    for e in ready.get(-1, ()):
        if el.reduce(pats[e]) != tgts[e]:
            return
    assign: dict[str, el.Concept] = {}

    def rec(i: int) -> Iterator[dict[str, Term]]:
        if i == len(order):
            yield {v: el.to_term(assign[v]) for v in order}
            return
        v = order[i]
        for cand in cands[v]:
            assign[v] = cand
            if all(el.reduce(_el_apply(pats[e], assign)) == tgts[e] for e in ready.get(i, ())):
                yield from rec(i + 1)
        assign.pop(v, None)

    yield from rec(0)


# ---------------------------------------------------------------- FL0 / ACUh: word languages

def _word_table(tid: th.TheoryId, t: Term) -> dict[str, Counter]:
    out: dict[str, Counter] = {}
    for word, v in th.word_atoms(tid, t):
        out.setdefault(v, Counter())[word] += 1
    if tid.kind == "fl0":
        for v in out:
            out[v] = Counter({w: 1 for w in out[v]})
    return out


def _walk_words(tid: th.TheoryId, pairs: Pairs) -> Iterator[dict[str, Term]]:
    idem = tid.kind == "fl0"
    pats = [_word_table(tid, p) for p, _ in pairs]
    tgts = [_word_table(tid, t) for _, t in pairs]
    pvars = sorted({v for pt in pats for v in pt})
    consts = sorted({c for tt in tgts for c in tt})
    for pt, tt in zip(pats, tgts):
        if not pt and tt:
            return
    lam: dict[str, list[tuple[tuple[str, ...], str]]] = {v: [] for v in pvars}
    for c in consts:
        # candidate words for λ(v) at coordinate c: all w with p·w in the target for every prefix p
        cand: dict[str, list[tuple[str, ...]]] = {}
        for v in pvars:
            ws: set[tuple[str, ...]] | None = None
            for pt, tt in zip(pats, tgts):
                if v not in pt:
                    continue
                tw = tt.get(c, Counter())
                here: set[tuple[str, ...]] | None = None
                for p in pt[v]:
                    ok = {u[len(p):] for u in tw if u[:len(p)] == p}
                    here = ok if here is None else here & ok
                ws = (here or set()) if ws is None else ws & (here or set())
            cand[v] = sorted(ws or ())
        if idem:
            # maximal solution decides solvability for languages
            for pt, tt in zip(pats, tgts):
                got = {p + w for v in pt for p in pt[v] for w in cand[v]}
                if got != set(tt.get(c, Counter())):
                    return
            for v in pvars:
                lam[v].extend((w, c) for w in cand[v])
            continue
        unknowns = [(v, w) for v in pvars for w in cand[v]]
        targets = sorted({u for tt in tgts for u in tt.get(c, Counter())}
                         | {p + w for v, w in unknowns for pt in pats for p in pt.get(v, ())})
        rows, rhs = [], []
        for pt, tt in zip(pats, tgts):
            tw = tt.get(c, Counter())
            for u in targets:
                row = []
                for v, w in unknowns:
                    row.append(sum(k for p, k in pt.get(v, Counter()).items() if p + w == u))
                rows.append(row)
                rhs.append(tw.get(u, 0))
        if len(unknowns) > 48:
            raise Undecided("homomorphism matching system exceeds its bound")
        if not unknowns:
            if any(rhs):
                return
            continue
        sols, _ = min_solutions_inhomogeneous(DioSystem.inhomogeneous(rows, rhs, [f"n{i}" for i in range(len(unknowns))]))
        if not sols:
            return
        sol = min(sols)
        for (v, w), k in zip(unknowns, sol):
            lam[v].extend([(w, c)] * k)
    yield {v: th.atoms_to_term(tid, atoms) for v, atoms in lam.items()}


# ---------------------------------------------------------------- dispatcher

def iter_matches(tid: th.TheoryId, pairs: Pairs) -> Iterator[dict[str, Term]]:
    """Candidate witnesses for λ(p) ≈ t for all pairs; targets in normal form."""
    k = tid.kind
    pairs = [(p, th.normal_form(tid, t, check=False)) for p, t in pairs]
    if k == "empty":
        return _walk_empty(pairs)
    if k == "c":
        return _walk_c([(th._nf_c(p), t) for p, t in pairs], {})
    if k == "i":
        return _walk_i(list(pairs), {})
    if k == "a":
        eqs = [([leaf.name for leaf in _flat_leaves(p)], [leaf.name for leaf in _flat_leaves(t)]) for p, t in pairs]
        return ({v: _nest([Var(c) for c in s]) for v, s in b.items()} for b in _walk_a(eqs, {}))
    if k in ("ac", "acu"):
        return _walk_acu(pairs, nonempty=(k == "ac"))
    if k in ("aci", "acui"):
        return _walk_acui(pairs, nonempty=(k == "aci"))
    if k == "ai":
        return _walk_ai(pairs)
    if k == "d":
        return _walk_finite(tid, pairs)
    if k == "fg":
        return _walk_fg(pairs)
    if k == "el":
        return _walk_el(tid, pairs)
    if k in ("fl0", "acuh"):
        return _walk_words(tid, pairs)
    raise Undecided(f"no matcher for theory {tid}")

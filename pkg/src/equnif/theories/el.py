"""EL concepts: structural subsumption and reduced normal forms.

Concept terms use the symbols ``and/2``, ``top/0`` and ``ex_<role>/1``;
variables play the role of concept names.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import combinations, product

from ..terms import App, Term, TermError, Var, term_key

AND, TOP, EX = "and", "top", "ex_"


@dataclass(frozen=True)
class Concept:
    atoms: frozenset[str]
    exists: frozenset[tuple[str, "Concept"]]

    def depth(self) -> int:
        return max((1 + c.depth() for _, c in self.exists), default=0)

    def roles(self) -> frozenset[str]:
        out = {r for r, _ in self.exists}
        for _, c in self.exists:
            out |= c.roles()
        return frozenset(out)

    def names(self) -> frozenset[str]:
        out = set(self.atoms)
        for _, c in self.exists:
            out |= c.names()
        return frozenset(out)


TOP_CONCEPT = Concept(frozenset(), frozenset())


def from_term(t: Term) -> Concept:
    if isinstance(t, Var):
        return Concept(frozenset([t.name]), frozenset())
    if t.fn == TOP and not t.args:
        return TOP_CONCEPT
    if t.fn == AND and len(t.args) == 2:
        a, b = from_term(t.args[0]), from_term(t.args[1])
        return Concept(a.atoms | b.atoms, a.exists | b.exists)
    if t.fn.startswith(EX) and len(t.args) == 1:
        return Concept(frozenset(), frozenset([(t.fn[len(EX):], from_term(t.args[0]))]))
    raise TermError(f"symbol {t.fn} is not an EL constructor")


@lru_cache(maxsize=100_000)
def subsumed(c: Concept, d: Concept) -> bool:
    """c ⊑ d by structural subsumption."""
    if not d.atoms <= c.atoms:
        return False
    for r, d1 in d.exists:
        if not any(r == s and subsumed(c1, d1) for s, c1 in c.exists):
            return False
    return True


@lru_cache(maxsize=100_000)
def reduce(c: Concept) -> Concept:
    exs = {(r, reduce(d)) for r, d in c.exists}
    keep = set()
    for r, d in exs:
        # drop ∃r.d when a distinct ∃r.d' with d' ⊑ d is present
        if any(s == r and e != d and subsumed(e, d) for s, e in exs):
            continue
        keep.add((r, d))
    return Concept(c.atoms, frozenset(keep))


def equivalent(c: Concept, d: Concept) -> bool:
    return subsumed(c, d) and subsumed(d, c)


def conj(parts: list[Term]) -> Term:
    if not parts:
        return App(TOP)
    out = parts[-1]
    for p in reversed(parts[:-1]):
        out = App(AND, (p, out))
    return out


def to_term(c: Concept) -> Term:
    parts: list[Term] = [Var(a) for a in sorted(c.atoms)]
    exs = [App(EX + r, (to_term(d),)) for r, d in c.exists]
    exs.sort(key=term_key)
    return conj(parts + exs)


def normal_form(t: Term) -> Term:
    return to_term(reduce(from_term(t)))


def role_depth(t: Term) -> int:
    if isinstance(t, Var):
        return 0
    if t.fn == TOP:
        return 0
    if t.fn == AND:
        return max(role_depth(a) for a in t.args)
    if t.fn.startswith(EX):
        return 1 + role_depth(t.args[0])
    raise TermError(f"symbol {t.fn} is not an EL constructor")


def concepts_up_to(names: tuple[str, ...], roles: tuple[str, ...], rd: int,
                   limit: int = 200_000) -> list[Concept]:
    """All reduced concepts with role depth ≤ rd over the given names and roles."""
    names = tuple(sorted(names))
    roles = tuple(sorted(roles))
    atom_sets = [frozenset(s) for k in range(len(names) + 1) for s in combinations(names, k)]
    level = [Concept(a, frozenset()) for a in atom_sets]
    for _ in range(rd):
        fillers = level
        # antichains of fillers per role, keeping only reduced combinations
        per_role: list[list[frozenset]] = []
        for r in roles:
            chains = _antichains(fillers, limit)
            per_role.append([frozenset((r, c) for c in ch) for ch in chains])
        exs_choices = [frozenset().union(*combo) for combo in product(*per_role)]
        if len(atom_sets) * len(exs_choices) > limit:
            from ..errors import Undecided
            raise Undecided("EL concept enumeration exceeds its bound")
        level = [Concept(a, e) for a in atom_sets for e in exs_choices]
    return level


def _antichains(items: list[Concept], limit: int) -> list[tuple[Concept, ...]]:
    """Sets of pairwise ⊑-incomparable concepts (the reduced existential parts)."""
    out: list[tuple[Concept, ...]] = [()]
    n = len(items)

    def comparable(a: Concept, b: Concept) -> bool:
        return subsumed(a, b) or subsumed(b, a)

    def rec(start: int, chosen: list[Concept]) -> None:
        for i in range(start, n):
            c = items[i]
            if all(not comparable(c, d) for d in chosen):
                chosen.append(c)
                out.append(tuple(chosen))
                if len(out) > limit:
                    from ..errors import Undecided
                    raise Undecided("EL antichain enumeration exceeds its bound")
                rec(i + 1, chosen)
                chosen.pop()

    rec(0, [])
    return out

"""Syntactic matching, positions and syntactic unification helpers."""
from __future__ import annotations

from typing import Iterator

from .terms import App, Substitution, Term, Var, apply_subst

Position = tuple[int, ...]


def match(pattern: Term, t: Term, binding: dict[str, Term] | None = None) -> dict[str, Term] | None:
    """Syntactic matching; returns an extension of ``binding`` or None."""
    b = dict(binding) if binding else {}
    stack = [(pattern, t)]
    while stack:
        p, s = stack.pop()
        if isinstance(p, Var):
            bound = b.get(p.name)
            if bound is None:
                b[p.name] = s
            elif bound != s:
                return None
            continue
        if not isinstance(s, App) or s.fn != p.fn or len(s.args) != len(p.args):
            return None
        stack.extend(zip(p.args, s.args))
    return b


def positions(t: Term) -> Iterator[tuple[Position, Term]]:
    stack: list[tuple[Position, Term]] = [((), t)]
    while stack:
        pos, s = stack.pop()
        yield pos, s
        if isinstance(s, App):
            for i in range(len(s.args) - 1, -1, -1):
                stack.append((pos + (i,), s.args[i]))


def subterm_at(t: Term, pos: Position) -> Term:
    for i in pos:
        assert isinstance(t, App)
        t = t.args[i]
    return t


def replace_at(t: Term, pos: Position, s: Term) -> Term:
    if not pos:
        return s
    assert isinstance(t, App)
    i = pos[0]
    args = list(t.args)
    args[i] = replace_at(args[i], pos[1:], s)
    return App(t.fn, tuple(args))


def occurs(x: str, t: Term) -> bool:
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            if s.name == x:
                return True
        else:
            stack.extend(s.args)
    return False


def unify_syntactic(pairs: list[tuple[Term, Term]]) -> Substitution | None:
    """Robinson-style syntactic unification with occurs check.

    Returns an idempotent most general unifier using only the variables of
    the input pairs, or None on clash or occurs-check failure.
    """
    sol: dict[str, Term] = {}
    work = list(reversed(pairs))
    while work:
        s, t = work.pop()
        s = apply_subst(sol, s)
        t = apply_subst(sol, t)
        if s == t:
            continue
        if isinstance(s, App) and isinstance(t, Var):
            s, t = t, s
        if isinstance(s, Var):
            if occurs(s.name, t):
                return None
            single = {s.name: t}
            sol = {k: apply_subst(single, v) for k, v in sol.items()}
            sol[s.name] = t
            continue
        assert isinstance(s, App) and isinstance(t, App)
        if s.fn != t.fn or len(s.args) != len(t.args):
            return None
        work.extend(reversed(list(zip(s.args, t.args))))
    return Substitution(sol)

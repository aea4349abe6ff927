"""Bounded term and substitution generators used by oracles and probes."""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import Iterable, Iterator, Sequence

from . import theories as th
from .errors import Undecided
from .terms import App, Substitution, Term, Var, term_key

TERM_CAP = 50_000


@lru_cache(maxsize=1024)
def terms_up_to(tid: th.TheoryId, pool: tuple[str, ...], depth: int, cap: int = TERM_CAP) -> tuple[Term, ...]:
    """Normal forms of all terms of depth ≤ ``depth`` over ``pool`` and the signature."""
    sig = th.signature(tid)
    seen: dict[Term, None] = {}
    level: list[Term] = [Var(v) for v in pool] + [App(c) for c in sig.constants()]
    for t in level:
        seen.setdefault(th.normal_form(tid, t, check=False), None)
    for _ in range(depth):
        current = list(seen)
        for sym in sig.functions():
            for args in product(current, repeat=sym.arity):
                nf = th.normal_form(tid, App(sym.name, args), check=False)
                if nf not in seen:
                    seen[nf] = None
                    if len(seen) > cap:
                        raise Undecided(f"term universe exceeds {cap} at depth {depth}")
    return tuple(sorted(seen, key=lambda t: (len(str(t)), term_key(t))))


def substitutions_over(domain: Sequence[str], values: Sequence[Term], cap: int = 5_000_000) -> Iterator[Substitution]:
    n = len(values) ** len(domain)
    if n > cap:
        raise Undecided(f"substitution universe of size {n} exceeds {cap}")
    for combo in product(values, repeat=len(domain)):
        yield Substitution(dict(zip(domain, combo)))


def dedupe_by_nf(tid: th.TheoryId, terms: Iterable[Term]) -> list[Term]:
    out: dict[Term, None] = {}
    for t in terms:
        out.setdefault(th.normal_form(tid, t, check=False), None)
    return list(out)

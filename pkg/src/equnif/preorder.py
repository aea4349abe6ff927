"""The instantiation preorders ≤_E^X (finite X) and ≤_E^V.

σ ≤_E^X θ iff some λ has λ(σ(x)) ≈_E θ(x) for every x ∈ X.  The
unrestricted preorder quantifies over all variables; it reduces to a finite
matching problem: with D = Dom(σ) ∪ Dom(θ) and W = Var(σ(D)) \\ D, solve
σ(x) ⪯ θ(x) for x ∈ D while keeping λ(y) ≈ y for y ∈ W.  Every other
variable may keep λ(y) = y.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence, Union

from . import theories as th
from .errors import Undecided
from .generate import terms_up_to
from .matching import iter_matches
from .terms import Substitution, Term, Var, apply_subst, vars_of_all


@dataclass(frozen=True)
class VarSet:
    X: frozenset[str]

    def __init__(self, X: Iterable[str]) -> None:
        object.__setattr__(self, "X", frozenset(X))

    def __str__(self) -> str:
        return "vars=" + ",".join(sorted(self.X))


@dataclass(frozen=True)
class AllVars:
    def __str__(self) -> str:
        return "unrestricted"


Scope = Union[VarSet, AllVars]
ALL = AllVars()


def parse_scope(text: str, problem_vars: Iterable[str] = ()) -> Scope:
    t = text.strip().lower()
    if t in ("unrestricted", "all", "v"):
        return ALL
    if t == "restricted":
        return VarSet(problem_vars)
    if t.startswith("vars="):
        return VarSet(v.strip() for v in text.split("=", 1)[1].split(",") if v.strip())
    raise ValueError(f"unknown scope {text!r}")


@dataclass(frozen=True)
class MatchProblem:
    theory: th.TheoryId
    equations: tuple[tuple[Term, Term], ...]
    identity_constrained: frozenset[str] = field(default_factory=frozenset)

    def pairs(self) -> list[tuple[Term, Term]]:
        return list(self.equations) + [(Var(y), Var(y)) for y in sorted(self.identity_constrained)]

    def pattern_vars(self) -> frozenset[str]:
        return vars_of_all(p for p, _ in self.equations) | self.identity_constrained


@dataclass(frozen=True)
class Witness:
    lam: Substitution


def _valid(tid: th.TheoryId, lam: Substitution, pairs: Sequence[tuple[Term, Term]]) -> bool:
    return all(th.eq_modulo(tid, apply_subst(lam, p), t, check=False) for p, t in pairs)


def match_modulo(p: MatchProblem) -> Witness | None:
    """A validated witness, None when none exists; Undecided past the engine's bound."""
    pairs = p.pairs()
    for b in iter_matches(p.theory, pairs):
        lam = Substitution(b)
        if _valid(p.theory, lam, pairs):
            return Witness(lam)
    return None


def brute_force_matcher(p: MatchProblem, depth_bound: int, var_pool: Iterable[str]) -> Witness | None:
    """Exhaustive search over λ with values of depth ≤ depth_bound over var_pool."""
    pairs = p.pairs()
    pvars = sorted(p.pattern_vars())
    values = terms_up_to(p.theory, tuple(sorted(set(var_pool))), depth_bound)
    for combo in product(values, repeat=len(pvars)):
        lam = Substitution(dict(zip(pvars, combo)))
        if _valid(p.theory, lam, pairs):
            return Witness(lam)
    return None


def instance_problem(tid: th.TheoryId, sigma: Substitution, theta: Substitution, scope: Scope) -> MatchProblem:
    D = sigma.dom | theta.dom
    if isinstance(scope, AllVars):
        eq_vars = sorted(D)
        pvars = vars_of_all(sigma(x) for x in eq_vars)
        constrained = pvars - D
    else:
        eq_vars = sorted(scope.X & D)
        pvars = vars_of_all(sigma(x) for x in eq_vars)
        constrained = (scope.X - D) & pvars
    eqs = tuple((sigma(x), theta(x)) for x in eq_vars)
    return MatchProblem(tid, eqs, frozenset(constrained))


@lru_cache(maxsize=400_000)
def decide_instance(tid: th.TheoryId, sigma: Substitution, theta: Substitution,
                    scope: Scope) -> tuple[bool, Witness | None]:
    """Is σ ≤ θ in the given scope?  Returns the verdict and a witness λ."""
    if sigma == theta:
        return True, Witness(Substitution())
    w = match_modulo(instance_problem(tid, sigma, theta, scope))
    if w is None:
        return False, None
    _recheck(tid, sigma, theta, scope, w.lam)
    return True, w


def _recheck(tid, sigma, theta, scope, lam) -> None:
    D = sigma.dom | theta.dom | lam.dom
    xs = D if isinstance(scope, AllVars) else scope.X & D
    for x in xs:
        if not th.eq_modulo(tid, apply_subst(lam, sigma(x)), theta(x), check=False):
            raise AssertionError(f"witness {lam} fails at {x}")


def leq(tid, sigma, theta, scope) -> bool:
    return decide_instance(tid, sigma, theta, scope)[0]


def equivalent(tid: th.TheoryId, sigma: Substitution, theta: Substitution, scope: Scope) -> bool:
    return leq(tid, sigma, theta, scope) and leq(tid, theta, sigma, scope)


def strictly_more_general(tid: th.TheoryId, sigma: Substitution, theta: Substitution, scope: Scope) -> bool:
    return leq(tid, sigma, theta, scope) and not leq(tid, theta, sigma, scope)


def is_unifier(tid: th.TheoryId, sigma: Substitution, equations: Iterable[tuple[Term, Term]]) -> bool:
    return all(th.eq_modulo(tid, apply_subst(sigma, s), apply_subst(sigma, t), check=False) for s, t in equations)

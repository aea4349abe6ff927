"""Constructive versions of renaming-away, witness shrinking and poset exploration."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from . import theories as th
from .errors import Refusal, Undecided
from .generate import terms_up_to
from .preorder import ALL, MatchProblem, leq, match_modulo, strictly_more_general
from .terms import (Permutation, Substitution, Term, Var, apply_subst, compose_subst, depth,
                    permutation_extending, permutation_from_renaming, restrict_subst, vars_of)
from .theories import el as el_mod
from .theories.band import band_elements

POSET_CAP = 200_000


class ShrinkError(AssertionError):
    """A step of the shrinking construction failed its own invariant check."""

    def __init__(self, stage: str, detail: str) -> None:
        super().__init__(f"{stage}: {detail}")
        self.stage = stage
        self.detail = detail


# ---------------------------------------------------------------- renaming away

def rename_away(theta: Substitution, X: Iterable[str], restrict: bool = False) -> tuple[Substitution, Permutation]:
    """πθ with π swapping VRan(θ) ∩ X for fresh variables; πθ ∼_∅^V θ.

    With ``restrict`` the result is πθ|X, whose range avoids X.
    """
    X = frozenset(X)
    clash = theta.vran & X
    pi = permutation_from_renaming(clash, X | theta.dom | theta.vran)
    out = compose_subst(pi.as_subst(), theta)
    return (restrict_subst(out, X) if restrict else out), pi


# ---------------------------------------------------------------- shrinking

@dataclass(frozen=True)
class ShrinkCertificate:
    sigma_prime: Substitution
    forward: Substitution       # forward σ ≈ σ′
    backward: Substitution      # backward σ′ ≈ σ
    permutation: Permutation = field(default_factory=lambda: Permutation(()))
    collapsed: frozenset[str] = frozenset()


def _agree_everywhere(tid, lam: Substitution, sigma: Substitution, target: Substitution) -> str | None:
    """First variable x with λ(σ(x)) ≉ target(x), checking every variable that can differ."""
    for x in sorted(lam.dom | sigma.dom | target.dom):
        if not th.eq_modulo(tid, apply_subst(lam, sigma(x)), target(x), check=False):
            return x
    return None


def validate_certificate(tid: th.TheoryId, sigma: Substitution, theta: Substitution, c: ShrinkCertificate) -> list[str]:
    problems = []
    scope = theta.dom | theta.vran
    if not (c.sigma_prime.dom | c.sigma_prime.vran) <= scope:
        problems.append(f"Dom ∪ VRan of {c.sigma_prime} leaves {sorted(scope)}")
    bad = _agree_everywhere(tid, c.forward, sigma, c.sigma_prime)
    if bad is not None:
        problems.append(f"forward witness fails at {bad}")
    bad = _agree_everywhere(tid, c.backward, c.sigma_prime, sigma)
    if bad is not None:
        problems.append(f"backward witness fails at {bad}")
    return problems


def shrink_general(tid: th.TheoryId, sigma: Substitution, theta: Substitution, lam: Substitution) -> ShrinkCertificate:
    """σ′ ∼^V σ inside Dom(θ) ∪ VRan(θ), built from a witness λσ ≈ θ in two stages."""
    info = th.theory_info(tid)
    if info.regular != "yes":
        raise Refusal(f"{tid} is not known to be regular")
    bad = _agree_everywhere(tid, lam, sigma, theta)
    if bad is not None:
        raise ValueError(f"λσ ≉ θ at {bad}")
    Y = theta.dom | theta.vran
    ident = Substitution()
    if (sigma.dom | sigma.vran) <= Y:
        return ShrinkCertificate(sigma, ident, ident)

    # stage 1: make Var(σ1(x)) = {x} on Dom(σ1) \ Dom(θ) via a permutation
    X1 = sorted(sigma.dom - theta.dom)
    tau: dict[str, str] = {}
    for x in X1:
        zs = [z for z in sorted(vars_of(sigma(x))) if x in vars_of(lam(z))]
        if not zs:
            raise ShrinkError("stage 1", f"no variable of σ({x}) carries {x} under λ")
        tau[x] = zs[0]
    pi = permutation_extending(tau) if any(k != v for k, v in tau.items()) else Permutation(())
    pinv = pi.inverse().as_subst()
    sigma1 = compose_subst(pinv, sigma)
    lam1 = compose_subst(lam, pi.as_subst())
    for x in sorted(sigma1.dom - theta.dom):
        if vars_of(sigma1(x)) != {x}:
            raise ShrinkError("stage 1", f"Var(σ1({x})) = {sorted(vars_of(sigma1(x)))}, expected [{x!r}]")

    # stage 2: collapse X2 = Dom(σ1) \ (Dom(θ) ∪ VRan(θ)) to the identity
    X2 = sigma1.dom - Y
    sigma_p = Substitution({x: t for x, t in sigma1.items() if x not in X2})
    tau1 = Substitution({x: lam1(x) for x in X2})
    tau2 = Substitution({x: sigma1(x) for x in X2})
    forward = compose_subst(tau1, pinv)
    backward = compose_subst(pi.as_subst(), tau2)
    cert = ShrinkCertificate(sigma_p, forward, backward, pi, frozenset(X2))
    problems = validate_certificate(tid, sigma, theta, cert)
    if problems:
        raise ShrinkError("stage 2", "; ".join(problems))
    return cert


# ---------------------------------------------------------------- the older condition

@dataclass(frozen=True)
class OldConditionResult:
    sigma_prime: Substitution | None
    checked: int
    bound: int
    pool: tuple[str, ...]

    @property
    def refuted(self) -> bool:
        return self.sigma_prime is None


def refute_old_shrink_condition(tid: th.TheoryId, sigma: Substitution, theta: Substitution, bound: int,
                                extra_vars: int = 1) -> OldConditionResult:
    """Search σ′ with Dom(σ′) ⊆ Dom(θ) and σ′ ∼^V σ over terms of depth ≤ bound.

    The pool holds Dom ∪ VRan of σ and θ plus ``extra_vars`` fresh names.
    """
    from .terms import fresh_names
    base = sorted(sigma.dom | sigma.vran | theta.dom | theta.vran)
    pool = tuple(base + fresh_names(extra_vars, base))
    values = terms_up_to(tid, pool, bound)
    dom = sorted(theta.dom)
    checked = 0
    for combo in product(values, repeat=len(dom)):
        cand = Substitution(dict(zip(dom, combo)))
        checked += 1
        if leq(tid, sigma, cand, ALL) and leq(tid, cand, sigma, ALL):
            return OldConditionResult(cand, checked, bound, pool)
    return OldConditionResult(None, checked, bound, pool)


# ---------------------------------------------------------------- posets below θ

@dataclass(frozen=True)
class PosetReport:
    theory: str
    root: Substitution
    classes: tuple[Substitution, ...]
    edges: tuple[tuple[int, int], ...]      # (i, j): classes[i] strictly more general than classes[j]
    minimal: tuple[int, ...]
    candidates: int
    depth: int
    caveats: tuple[str, ...] = ()

    def every_class_above_minimal(self) -> bool:
        below = {j: {i for i, k in self.edges if k == j} for j in range(len(self.classes))}
        mins = set(self.minimal)
        return all(j in mins or below[j] & mins for j in range(len(self.classes)))


def _saturate(tid: th.TheoryId, pool: tuple[str, ...], cap: int = 50_000) -> tuple[Term, ...]:
    """All classes over pool for a locally finite theory (depth raised to a fixpoint)."""
    d, prev = 0, -1
    while True:
        ts = terms_up_to(tid, pool, d, cap)
        if len(ts) == prev:
            return ts
        prev = len(ts)
        d += 1


def _candidate_values(tid: th.TheoryId, theta: Substitution, pool: tuple[str, ...], depth_bound: int | None):
    info = th.theory_info(tid)
    caveats: list[str] = []
    if tid.kind == "el":
        rd = max(el_mod.role_depth(theta(v)) for v in pool)
        values = tuple(el_mod.to_term(c) for c in el_mod.concepts_up_to(pool, tid.roles, rd))
        return values, rd, [f"EL candidates: role depth ≤ {rd}, roles {list(tid.roles)}, names {list(pool)}"]
    if tid.kind == "ai":
        words = band_elements(pool)
        values = tuple(th._nest("f", [Var(a) for a in w], None) for w in words)
        return values, 0, ["AI candidates: all free-band elements over the pool"]
    if info.locally_finite == "yes":
        values = _saturate(tid, pool)
        return values, 0, ["locally finite: all classes over the pool"]
    if info.finite == "yes":
        d = 0
        for v in pool:
            d = max(d, max(depth(s) for s in th.enumerate_class(tid, theta(v))))
        if depth_bound is not None and depth_bound < d:
            caveats.append(f"depth bound {depth_bound} below the class depth {d}; result is partial")
            d = depth_bound
        return terms_up_to(tid, pool, d), d, caveats
    raise Refusal(f"{tid} is neither finite, locally finite nor EL; no finite poset is guaranteed")


def more_general_poset(tid: th.TheoryId, theta: Substitution, depth_bound: int | None = None,
                       cap: int = POSET_CAP) -> PosetReport:
    """∼^V-classes of σ ≤^V θ with Dom(σ) ∪ VRan(σ) ⊆ Dom(θ) ∪ VRan(θ)."""
    pool = tuple(sorted(theta.dom | theta.vran))
    values, d, caveats = _candidate_values(tid, theta, pool, depth_bound)
    per_var = []
    for v in pool:
        tv = theta(v)
        ok = [s for s in values if match_modulo(MatchProblem(tid, ((s, tv),))) is not None]
        per_var.append(ok)
    total = 1
    for ok in per_var:
        total *= len(ok)
    if total > cap:
        raise Undecided(f"{total} candidate substitutions below θ exceed the cap {cap}")
    members = []
    for combo in product(*per_var):
        s = Substitution(dict(zip(pool, combo)))
        if leq(tid, s, theta, ALL):
            members.append(s)
    reps: list[Substitution] = []
    for s in sorted(members, key=lambda s: (len(str(s)), str(s))):
        if not any(leq(tid, r, s, ALL) and leq(tid, s, r, ALL) for r in reps):
            reps.append(s)
    edges = tuple((i, j) for i, a in enumerate(reps) for j, b in enumerate(reps)
                  if i != j and leq(tid, a, b, ALL))
    has_below = {j for _, j in edges}
    minimal = tuple(i for i in range(len(reps)) if i not in has_below)
    return PosetReport(str(tid), theta, tuple(reps), edges, minimal, total, d, tuple(caveats))


# ---------------------------------------------------------------- chains

@dataclass(frozen=True)
class ChainReport:
    valid: bool
    links: tuple[str, ...]
    first_failure: int | None
    direction: str = "each link σ_i >^V σ_(i+1): the later element is strictly more general"


def verify_descending_chain(tid: th.TheoryId, chain: Sequence[Substitution]) -> ChainReport:
    links = []
    first = None
    for i in range(len(chain) - 1):
        try:
            ok = strictly_more_general(tid, chain[i + 1], chain[i], ALL)
            status = "strict" if ok else ("equivalent" if leq(tid, chain[i], chain[i + 1], ALL) else "not-below")
        except Undecided as exc:
            ok, status = False, f"undecided: {exc}"
        links.append(status)
        if not ok and first is None:
            first = i
    return ChainReport(first is None, tuple(links), first)

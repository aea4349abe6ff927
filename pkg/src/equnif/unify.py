"""Unifiers per theory, minimal sets, bounded universes and type probes."""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Iterable, Sequence

from . import kernels
from . import theories as th
from .diophantine import DioSystem, hilbert_basis
from .errors import Refusal, Undecided
from .generate import terms_up_to
from .preorder import ALL, AllVars, Scope, VarSet, leq
from .rewriting import positions, replace_at, subterm_at, unify_syntactic
from .terms import (App, Substitution, Term, Var, apply_subst, check_signature, compose_subst,
                    fresh_names, parse_term, restrict_subst, vars_of, vars_of_all)

UNIVERSE_CAP = 200_000
AC_BASIS_CAP = 14
MINIMIZE_CAP = 256


@dataclass(frozen=True)
class UnificationProblem:
    theory: th.TheoryId
    equations: tuple[tuple[Term, Term], ...]

    def __post_init__(self) -> None:
        sig = th.signature(self.theory)
        for s, t in self.equations:
            check_signature(s, sig)
            check_signature(t, sig)

    @classmethod
    def of(cls, tid: th.TheoryId, *eqs: tuple[str, str]) -> "UnificationProblem":
        sig = th.signature(tid)
        return cls(tid, tuple((parse_term(s, sig), parse_term(t, sig)) for s, t in eqs))

    @property
    def vars(self) -> frozenset[str]:
        return vars_of_all(x for e in self.equations for x in e)

    def __str__(self) -> str:
        return "{" + ", ".join(f"{s} =? {t}" for s, t in self.equations) + "}"


@dataclass(frozen=True)
class UnifierSet:
    unifiers: tuple[Substitution, ...]
    scope: Scope
    status: str = "complete"          # complete | complete-within-universe | unknown
    minimal: bool = False
    bounds: tuple[tuple[str, int], ...] = ()

    def __len__(self) -> int:
        return len(self.unifiers)

    def __iter__(self):
        return iter(self.unifiers)


def subst_order(s: Substitution) -> tuple:
    return (len(str(s)), str(s))


def is_unifier(tid: th.TheoryId, sigma: Substitution, equations: Iterable[tuple[Term, Term]]) -> bool:
    return all(th.eq_modulo(tid, apply_subst(sigma, s), apply_subst(sigma, t), check=False) for s, t in equations)


def _restricted(gamma: UnificationProblem) -> VarSet:
    return VarSet(gamma.vars)


# ---------------------------------------------------------------- syntactic / C / I

def mgu_syntactic(gamma: UnificationProblem) -> Substitution | None:
    if gamma.theory != th.EMPTY:
        raise Refusal("mgu_syntactic needs the empty theory")
    return unify_syntactic(list(gamma.equations))


def _c_unifiers(pairs: list[tuple[Term, Term]]) -> list[Substitution]:
    out: list[Substitution] = []

    def go(work: tuple[tuple[Term, Term], ...], sol: dict[str, Term]) -> None:
        while work:
            (s, t), work = work[-1], work[:-1]
            s, t = apply_subst(sol, s), apply_subst(sol, t)
            if s == t:
                continue
            if isinstance(s, App) and isinstance(t, Var):
                s, t = t, s
            if isinstance(s, Var):
                if s.name in vars_of(t):
                    return
                one = {s.name: t}
                sol = {k: apply_subst(one, v) for k, v in sol.items()}
                sol[s.name] = t
                continue
            if s.fn != t.fn or len(s.args) != len(t.args):
                return
            if s.fn == "f":
                a, b = s.args
                c, d = t.args
                go(work + ((b, d), (a, c)), dict(sol))
                go(work + ((b, c), (a, d)), dict(sol))
                return
            work = work + tuple(reversed(list(zip(s.args, t.args))))
        out.append(Substitution(sol))

    go(tuple(reversed(pairs)), {})
    return out


def _i_unifiers(pairs: list[tuple[Term, Term]], X: frozenset[str]) -> list[Substitution]:
    """Basic narrowing with f(x,x) → x followed by syntactic unification."""
    goal = App("$eq", tuple(t for p in pairs for t in p))
    start = frozenset(p for p, s in positions(goal) if p and isinstance(s, App) and s.fn == "f")
    found: dict[Substitution, None] = {}

    def go(t: App, basic: frozenset, acc: Substitution) -> None:
        m = unify_syntactic([(t.args[i], t.args[i + 1]) for i in range(0, len(t.args), 2)])
        if m is not None:
            found.setdefault(restrict_subst(compose_subst(m, acc), X), None)
        for p in sorted(basic):
            s = subterm_at(t, p)
            m = unify_syntactic([(s.args[0], s.args[1])])
            if m is None:
                continue
            t2 = replace_at(apply_subst(m, t), p, apply_subst(m, s.args[0]))
            rest = frozenset(q for q in basic if q[:len(p)] != p)
            go(t2, rest, compose_subst(m, acc))

    go(goal, start, Substitution())
    return list(found)


# ---------------------------------------------------------------- AC family

def _leaves(tid: th.TheoryId, t: Term) -> list[Term]:
    nf = th.normal_form(tid, t, check=False)
    if nf == th.ZERO:
        return []
    return th._flatten(nf, "f")


def linear_system(gamma: UnificationProblem) -> DioSystem:
    """Homogeneous system of an elementary AC/ACU problem, unknowns = sorted Var(Γ)."""
    names = tuple(sorted(gamma.vars))
    rows = []
    for s, t in gamma.equations:
        row = dict.fromkeys(names, 0)
        for leaf in _leaves(gamma.theory, s):
            row[leaf.name] += 1
        for leaf in _leaves(gamma.theory, t):
            row[leaf.name] -= 1
        rows.append(tuple(row[n] for n in names))
    return DioSystem(tuple(rows), names)


def _vector_subst(names: Sequence[str], vectors: Sequence[Sequence[int]], fresh: Sequence[str],
                  unit: bool) -> Substitution:
    out = {}
    for i, x in enumerate(names):
        leaves = [Var(fresh[j]) for j, v in enumerate(vectors) for _ in range(v[i])]
        out[x] = th._nest("f", leaves, th.ZERO if unit else None)
    return Substitution(out)


def _acu_mgu(gamma: UnificationProblem) -> Substitution:
    sys = linear_system(gamma)
    basis = hilbert_basis(sys)
    fresh = fresh_names(len(basis), gamma.vars)
    return _vector_subst(sys.unknowns, basis.vectors, fresh, unit=True)


def _ac_unifiers(gamma: UnificationProblem) -> list[Substitution]:
    sys = linear_system(gamma)
    basis = hilbert_basis(sys).vectors
    if len(basis) > AC_BASIS_CAP:
        raise Undecided(f"AC Hilbert basis has {len(basis)} vectors, subset search capped at {AC_BASIS_CAP}")
    n = len(sys.unknowns)
    out = []
    for r in range(1, len(basis) + 1):
        for sub in combinations(basis, r):
            if all(any(v[i] for v in sub) for i in range(n)):
                fresh = fresh_names(r, gamma.vars)
                out.append(_vector_subst(sys.unknowns, sub, fresh, unit=False))
    return out


def _set_of(tid: th.TheoryId, t: Term, index: dict[str, int]) -> int:
    mask = 0
    for leaf in _leaves(tid, t):
        mask |= 1 << index[leaf.name]
    return mask


def consistent_patterns(gamma: UnificationProblem) -> tuple[tuple[str, ...], list[int]]:
    """Sorted Var(Γ) and the nonempty consistent subsets M as bitmasks."""
    names = tuple(sorted(gamma.vars))
    if len(names) > 16:
        raise Undecided("consistent-subset construction capped at 16 variables")
    index = {x: i for i, x in enumerate(names)}
    sides = [(_set_of(gamma.theory, s, index), _set_of(gamma.theory, t, index)) for s, t in gamma.equations]
    pats = [m for m in range(1, 1 << len(names))
            if all(bool(m & a) == bool(m & b) for a, b in sides)]
    pats.sort(key=lambda m: (bin(m).count("1"), m))
    return names, pats


def _acui_mgu(gamma: UnificationProblem) -> Substitution:
    names, pats = consistent_patterns(gamma)
    fresh = fresh_names(len(pats), gamma.vars)
    vecs = [[(m >> i) & 1 for i in range(len(names))] for m in pats]
    return _vector_subst(names, vecs, fresh, unit=True)


ACI_PATTERN_CAP = 10


def _aci_below(S: Sequence[int], T: Sequence[int]) -> bool:
    """σ_S ≤ σ_T without units: each T pattern is a union of S patterns inside it,
    and each S pattern lies inside some T pattern."""
    for t in T:
        u = 0
        for p in S:
            if p & ~t == 0:
                u |= p
        if u != t:
            return False
    return all(any(p & ~t == 0 for t in T) for p in S)


def _aci_unifiers(gamma: UnificationProblem) -> list[Substitution]:
    """One unifier per minimal covering set of consistent patterns (no pattern maps to 0)."""
    names, pats = consistent_patterns(gamma)
    if len(pats) > ACI_PATTERN_CAP:
        raise Undecided(f"ACI covering-set search capped at {ACI_PATTERN_CAP} consistent patterns, got {len(pats)}")
    full = (1 << len(names)) - 1
    covering = []
    for r in range(1, len(pats) + 1):
        for S in combinations(pats, r):
            u = 0
            for p in S:
                u |= p
            if u == full:
                covering.append(S)
    minimal = [S for S in covering
               if not any(T is not S and _aci_below(T, S) and not _aci_below(S, T) for T in covering)]
    reps: list[tuple[int, ...]] = []
    for S in minimal:
        if not any(_aci_below(S, R) and _aci_below(R, S) for R in reps):
            reps.append(S)
    out = []
    for S in reps:
        fresh = fresh_names(len(S), gamma.vars)
        vecs = [[(m >> i) & 1 for i in range(len(names))] for m in S]
        out.append(_vector_subst(names, vecs, fresh, unit=False))
    return out


# ---------------------------------------------------------------- dispatcher

UNIFY_THEORIES = ("empty", "c", "i", "ac", "acu", "acui", "aci")


def unify_theory(gamma: UnificationProblem) -> UnifierSet:
    """A complete set of unifiers w.r.t. the restricted preorder ≤^{Var(Γ)}."""
    tid = gamma.theory
    scope = _restricted(gamma)
    pairs = list(gamma.equations)
    if tid.kind not in UNIFY_THEORIES:
        raise Refusal(f"no unification algorithm for {tid}; use probe_type for bounded evidence")
    if tid == th.EMPTY:
        m = unify_syntactic(pairs)
        cands = [] if m is None else [m]
    elif tid == th.C:
        cands = _c_unifiers(pairs)
    elif tid == th.I:
        cands = _i_unifiers(pairs, gamma.vars)
    elif tid == th.ACU:
        cands = [_acu_mgu(gamma)]
    elif tid == th.AC:
        cands = _ac_unifiers(gamma)
    elif tid == th.ACI:
        cands = _aci_unifiers(gamma)
    else:
        cands = [_acui_mgu(gamma)]
    for s in cands:
        if not is_unifier(tid, s, pairs):
            raise AssertionError(f"{tid} construction produced a non-unifier {s}")
    us = UnifierSet(tuple(sorted(dict.fromkeys(cands), key=subst_order)), scope, "complete", False)
    if len(us) <= MINIMIZE_CAP:
        us = minimize_set(us, tid, scope)
    return us


def minimize_set(us: UnifierSet, tid: th.TheoryId, scope: Scope) -> UnifierSet:
    """Drop every member that is an instance of another; one representative per class."""
    kept: list[Substitution] = []

    def below(a: Substitution, b: Substitution) -> bool:
        try:
            return leq(tid, a, b, scope)
        except Undecided:
            return False

    for s in sorted(us.unifiers, key=subst_order):
        if any(below(k, s) for k in kept):
            continue
        kept = [k for k in kept if not below(s, k)]
        kept.append(s)
    return UnifierSet(tuple(sorted(kept, key=subst_order)), scope, us.status, True, us.bounds)


def is_complete_within(candidate: UnifierSet | Iterable[Substitution], universe: Iterable[Substitution],
                       tid: th.TheoryId, scope: Scope) -> bool:
    return not completeness_gaps(candidate, universe, tid, scope)


def completeness_gaps(candidate, universe, tid: th.TheoryId, scope: Scope) -> list[Substitution]:
    """Universe members not above any candidate (undecided comparisons count as gaps)."""
    cands = list(candidate)
    gaps = []
    for theta in universe:
        ok = False
        for s in cands:
            try:
                if leq(tid, s, theta, scope):
                    ok = True
                    break
            except Undecided:
                continue
        if not ok:
            gaps.append(theta)
    return gaps


# ---------------------------------------------------------------- bounded universes

def universe_pool(gamma: UnificationProblem, k: int) -> tuple[str, ...]:
    X = sorted(gamma.vars)
    return tuple(X) + tuple(fresh_names(k, X))


def bounded_universe(gamma: UnificationProblem, k: int, d: int, cap: int = UNIVERSE_CAP) -> list[Substitution]:
    """All unifiers with Dom ⊆ Var(Γ), VRan ⊆ Var(Γ) ∪ {k fresh}, depth ≤ d (one per normal form)."""
    X = sorted(gamma.vars)
    values = terms_up_to(gamma.theory, universe_pool(gamma, k), d)
    total = len(values) ** len(X)
    if total > cap:
        raise Undecided(f"bounded universe has {total} candidate substitutions (cap {cap})")
    out = []
    pairs = list(gamma.equations)
    for combo in product(values, repeat=len(X)):
        s = Substitution(dict(zip(X, combo)))
        if is_unifier(gamma.theory, s, pairs):
            out.append(s)
    return out


def classes_of(tid: th.TheoryId, members: Sequence[Substitution], scope: Scope) -> list[list[Substitution]]:
    reps: list[Substitution] = []
    groups: list[list[Substitution]] = []
    for s in members:
        for i, r in enumerate(reps):
            if leq(tid, r, s, scope) and leq(tid, s, r, scope):
                groups[i].append(s)
                break
        else:
            reps.append(s)
            groups.append([s])
    return groups


def minimal_classes(tid: th.TheoryId, reps: Sequence[Substitution], scope: Scope) -> list[int]:
    return [i for i, r in enumerate(reps)
            if not any(j != i and leq(tid, s, r, scope) for j, s in enumerate(reps))]


def enumerate_unifiers_bounded(gamma: UnificationProblem, k: int, d: int, scope: Scope) -> UnifierSet:
    bounds = (("fresh", k), ("depth", d))
    if gamma.theory == th.ACUI and isinstance(scope, VarSet) and scope.X == gamma.vars:
        lat = AcuiLattice(gamma, k)
        reps = tuple(lat.representative(c) for c in sorted(lat.closures))
        return UnifierSet(tuple(sorted(reps, key=subst_order)), scope, "complete-within-universe", False, bounds)
    members = bounded_universe(gamma, k, d)
    reps = [g[0] for g in classes_of(gamma.theory, members, scope)]
    return UnifierSet(tuple(sorted(reps, key=subst_order)), scope, "complete-within-universe", False, bounds)


# ---------------------------------------------------------------- ACUI lattice

class AcuiLattice:
    """Restricted-scope classes of ACUI unifiers over X = Var(Γ) with |X| + k range variables.

    A unifier is a tuple of columns b_c = {x ∈ X : c ∈ σ(x)}, each empty or
    consistent.  σ ≤^X θ iff every column of θ is a union of columns of σ,
    so classes correspond to union closures of column sets.
    """

    def __init__(self, gamma: UnificationProblem, k: int) -> None:
        if gamma.theory != th.ACUI:
            raise Refusal("the lattice method applies to ACUI")
        self.gamma = gamma
        self.names, self.patterns = consistent_patterns(gamma)
        self.m = len(self.names) + k
        self.range_vars = universe_pool(gamma, k)
        self.universe_size = (len(self.patterns) + 1) ** self.m
        self.closures = self._closures()

    def add(self, c: int, p: int) -> int:
        out = c | (1 << p)
        bits = c
        while bits:
            low = bits & -bits
            out |= 1 << ((low.bit_length() - 1) | p)
            bits ^= low
        return out

    def closure_of(self, cols: Iterable[int]) -> int:
        c = 0
        for p in cols:
            if p:
                c = self.add(c, p)
        return c

    def _closures(self) -> dict[int, tuple[int, ...]]:
        level: dict[int, tuple[int, ...]] = {0: ()}
        seen = dict(level)
        for _ in range(self.m):
            nxt: dict[int, tuple[int, ...]] = {}
            for c, gens in level.items():
                for p in self.patterns:
                    c2 = self.add(c, p)
                    if c2 not in seen and c2 not in nxt:
                        nxt[c2] = gens + (p,)
            seen.update(nxt)
            level = nxt
        return seen

    @property
    def full(self) -> int:
        return self.closure_of(self.patterns)

    def maximal(self) -> list[int]:
        out: list[int] = []
        for c in sorted(self.closures, key=lambda c: (-bin(c).count("1"), c)):
            if not any(c & ~m == 0 for m in out):
                out.append(c)
        return out

    def representative(self, closure: int) -> Substitution:
        gens = self.closures[closure]
        out = {}
        for i, x in enumerate(self.names):
            leaves = [Var(self.range_vars[j]) for j, p in enumerate(gens) if (p >> i) & 1]
            out[x] = th._nest("f", leaves, th.ZERO)
        return Substitution(out)

    def most_general_count(self) -> tuple[int, int]:
        """(universe size, number of unifiers above nothing but their own class) via the cover kernel."""
        n = len(self.names)
        covers = [0]
        full = 0
        for j, mj in enumerate(self.patterns):
            full |= mj << (n * j)
        for p in self.patterns:
            cov = 0
            for j, mj in enumerate(self.patterns):
                if p & ~mj == 0:
                    cov |= p << (n * j)
            covers.append(cov)
        return kernels.cover_scan(covers, full, self.m)


# ---------------------------------------------------------------- probes

VERDICTS = ("unitary-evidence", "finitary-evidence", "infinitary-evidence", "zero-evidence",
            "no-unifiers", "unknown")


@dataclass(frozen=True)
class ScopeSummary:
    scope: str
    method: str
    unifiers: int | None = None
    classes: int | None = None
    minimal_classes: int | None = None
    complete_within_universe: bool | None = None
    verdict: str = "unknown"


@dataclass(frozen=True)
class TypeProbeReport:
    theory: str
    fresh: int
    depth: int
    restricted: ScopeSummary
    unrestricted: ScopeSummary
    caveats: tuple[str, ...] = field(default_factory=tuple)
    ce_members: tuple[str, ...] | None = None     # bounded-universe unifiers inside C_E(Γ); None if not enumerated

    def as_dict(self) -> dict:
        from dataclasses import asdict
        return asdict(self)


def _verdict(n_members: int, n_min: int, complete: bool) -> str:
    if n_members == 0:
        return "no-unifiers"
    if not complete:
        return "zero-evidence"
    return "unitary-evidence" if n_min == 1 else "finitary-evidence"


def _generic_summary(gamma: UnificationProblem, members: list[Substitution], scope: Scope, label: str) -> ScopeSummary:
    groups = classes_of(gamma.theory, members, scope)
    reps = [g[0] for g in groups]
    mins = minimal_classes(gamma.theory, reps, scope)
    min_reps = [reps[i] for i in mins]
    complete = is_complete_within(min_reps, reps, gamma.theory, scope)
    return ScopeSummary(label, "enumeration", len(members), len(groups), len(mins), complete,
                        _verdict(len(members), len(mins), complete))


def probe_type(gamma: UnificationProblem, k: int, d: int, cap: int = UNIVERSE_CAP) -> TypeProbeReport:
    caveats = [f"universe: Dom within Var(Γ), range within Var(Γ) plus {k} fresh variables, term depth ≤ {d}",
               "counts describe the bounded universe only; they do not determine the unification type"]
    restricted = _restricted(gamma)
    members: list[Substitution] | None = None
    try:
        members = bounded_universe(gamma, k, d, cap)
    except Undecided as exc:
        caveats.append(f"enumeration skipped: {exc}")
    if gamma.theory == th.ACUI:
        lat = AcuiLattice(gamma, k)
        n_max = len(lat.maximal())
        r = ScopeSummary("restricted", "acui-lattice", lat.universe_size, len(lat.closures), n_max, True,
                         _verdict(lat.universe_size, n_max, True))
        caveats.append("ACUI terms are variable sets, so the depth bound does not restrict the universe")
    elif members is not None:
        r = _generic_summary(gamma, members, restricted, "restricted")
    else:
        r = ScopeSummary("restricted", "skipped")
    if members is not None:
        u = _generic_summary(gamma, members, ALL, "unrestricted")
    else:
        u = ScopeSummary("unrestricted", "skipped")
    ce = None
    if members is not None:
        ce = tuple(sorted((str(s) for s in members if in_completeness_set_CE(s)), key=lambda t: (len(t), t)))
    return TypeProbeReport(str(gamma.theory), k, d, r, u, tuple(caveats), ce)


# ---------------------------------------------------------------- fresh-variable constructions

def in_completeness_set_CE(sigma: Substitution) -> bool:
    """Every y ∈ VRan(σ) occurs in σ(x) and σ(x') for two distinct variables x, x'."""
    for y in sigma.vran:
        holders = {x for x, t in sigma.items() if y in vars_of(t)}
        if y not in sigma.dom:
            holders.add(y)
        if len(holders) < 2:
            return False
    return True


def sigma_z_family(sigma: Substitution, x0: str, zs: Sequence[str],
                   problem_vars: Iterable[str] = ()) -> list[Substitution]:
    """σ_z = σ τ_{x0,z} (τ applied first) with τ the transposition of x0 and z."""
    X = frozenset(problem_vars)
    if x0 not in sigma.vran or x0 in X:
        raise ValueError(f"{x0} must be a range variable of σ outside the problem variables")
    blocked = X | sigma.dom | sigma.vran
    out = []
    for z in zs:
        if z == x0:
            out.append(sigma)
            continue
        if z in blocked:
            raise ValueError(f"{z} is not admissible: it lies in Var(Γ) ∪ Dom(σ) ∪ VRan(σ)")
        tau = Substitution({x0: Var(z), z: Var(x0)})
        out.append(compose_subst(sigma, tau))
    return out


# ---------------------------------------------------------------- scope transfer

@dataclass(frozen=True)
class ScopeTransferReport:
    violations: tuple[str, ...]
    restricted_complete: bool
    restricted_minimal: bool
    unrestricted_complete: bool
    unrestricted_minimal: bool

    @property
    def holds(self) -> bool:
        r = self.restricted_complete and self.restricted_minimal
        u = self.unrestricted_complete and self.unrestricted_minimal
        return not self.violations and r == u


def _pairwise_incomparable(tid, members, scope) -> bool:
    return not any(i != j and leq(tid, a, b, scope)
                   for i, a in enumerate(members) for j, b in enumerate(members))


def check_scope_transfer(gamma: UnificationProblem, candidate: Iterable[Substitution],
                         k: int = 0, d: int = 1) -> ScopeTransferReport:
    cands = list(candidate)
    X = gamma.vars
    violations = tuple(f"{s}: Dom ∪ VRan not within Var(Γ)" for s in cands if not (s.dom | s.vran) <= X)
    universe = bounded_universe(gamma, k, d)
    out = {}
    for label, scope in (("r", _restricted(gamma)), ("u", ALL)):
        out[label + "c"] = is_complete_within(cands, universe, gamma.theory, scope)
        out[label + "m"] = _pairwise_incomparable(gamma.theory, cands, scope)
    return ScopeTransferReport(violations, out["rc"], out["rm"], out["uc"], out["um"])

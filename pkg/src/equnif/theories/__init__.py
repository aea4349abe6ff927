"""Theory registry, word problems and normal forms."""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from ..errors import Refusal, Undecided
from ..rewriting import match, positions, replace_at
from ..terms import App, Signature, Term, TermError, Var, apply_subst, check_signature, size, term_key
from . import band, el

KINDS = ("empty", "c", "a", "i", "ac", "acu", "aci", "acui", "ai", "d", "acuh", "fl0", "el", "fg")


@dataclass(frozen=True, order=True)
class TheoryId:
    kind: str
    k: int = 0
    roles: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.kind not in KINDS:
            raise ValueError(f"unknown theory {self.kind}")
        if self.kind in ("acuh", "fl0") and self.k < 1:
            raise ValueError(f"{self.kind} needs k >= 1")
        if self.kind == "el" and not self.roles:
            raise ValueError("el needs at least one role")

    def __str__(self) -> str:
        if self.kind in ("acuh", "fl0"):
            return f"{self.kind}:{self.k}"
        if self.kind == "el":
            return "el:" + ",".join(self.roles)
        return self.kind


def parse_theory(name: str) -> TheoryId:
    s = name.strip()
    low = s.lower()
    if low in ("∅", "0", "none"):
        low = "empty"
    if ":" in low:
        kind, arg = low.split(":", 1)
        if kind in ("acuh", "fl0"):
            return TheoryId(kind, int(arg))
        if kind == "el":
            roles = tuple(sorted({r.strip() for r in s.split(":", 1)[1].split(",") if r.strip()}))
            return TheoryId("el", roles=roles)
        raise ValueError(f"theory {kind} takes no parameter")
    if low in ("acuh", "fl0"):
        return TheoryId(low, 1)
    return TheoryId(low)


EMPTY = TheoryId("empty")
C = TheoryId("c")
A = TheoryId("a")
I = TheoryId("i")
AC = TheoryId("ac")
ACU = TheoryId("acu")
ACI = TheoryId("aci")
ACUI = TheoryId("acui")
AI = TheoryId("ai")
D = TheoryId("d")
FG = TheoryId("fg")


def ACUh(k: int = 1) -> TheoryId:
    return TheoryId("acuh", k)


def FL0(k: int = 1) -> TheoryId:
    return TheoryId("fl0", k)


def EL(*roles: str) -> TheoryId:
    return TheoryId("el", roles=tuple(sorted(roles)))


# ---------------------------------------------------------------- registry

YES, NO, UNKNOWN = "yes", "no", "unknown"


@dataclass(frozen=True)
class TheoryInfo:
    id: TheoryId
    signature: Signature
    axioms: tuple[tuple[Term, Term], ...]
    regular: str
    finite: str
    locally_finite: str
    monoidal: str
    restrictive: str
    restricted_type: str
    unrestricted_type: str

    @property
    def flags(self) -> dict[str, str]:
        return {"regular": self.regular, "finite": self.finite, "locallyFinite": self.locally_finite,
                "monoidal": self.monoidal, "restrictive": self.restrictive}


def _v(n: str) -> Var:
    return Var(n)


def _f(*args: Term, fn: str = "f") -> App:
    return App(fn, tuple(args))


X_, Y_, Z_ = _v("x"), _v("y"), _v("z")
_ASSOC = (_f(_f(X_, Y_), Z_), _f(X_, _f(Y_, Z_)))
_COMM = (_f(X_, Y_), _f(Y_, X_))
_UNIT = (_f(X_, App("0")), X_)
_IDEM = (_f(X_, X_), X_)


def _signature(tid: TheoryId) -> Signature:
    k = tid.kind
    if k == "empty":
        return Signature.of(("f", 2), ("g", 1))
    if k in ("c", "a", "i", "ac", "aci", "ai"):
        return Signature.of(("f", 2))
    if k in ("acu", "acui"):
        return Signature.of(("f", 2), ("0", 0))
    if k == "d":
        return Signature.of(("m", 2), ("p", 2))
    if k == "fg":
        return Signature.of(("f", 1), ("g", 1))
    if k == "acuh":
        return Signature.of(("f", 2), ("0", 0), *((f"h{i}", 1) for i in range(1, tid.k + 1)))
    if k == "fl0":
        return Signature.of(("and", 2), ("top", 0), *((f"all_r{i}", 1) for i in range(1, tid.k + 1)))
    if k == "el":
        return Signature.of(("and", 2), ("top", 0), *((f"ex_{r}", 1) for r in tid.roles))
    raise ValueError(k)


def _axioms(tid: TheoryId) -> tuple[tuple[Term, Term], ...]:
    k = tid.kind
    table: dict[str, tuple] = {
        "c": (_COMM,),
        "a": (_ASSOC,),
        "i": (_IDEM,),
        "ac": (_ASSOC, _COMM),
        "acu": (_ASSOC, _COMM, _UNIT),
        "aci": (_ASSOC, _COMM, _IDEM),
        "acui": (_ASSOC, _COMM, _UNIT, _IDEM),
        "ai": (_ASSOC, _IDEM),
        "d": ((App("m", (X_, App("p", (Y_, Z_)))), App("p", (App("m", (X_, Y_)), App("m", (X_, Z_))))),
              (App("m", (App("p", (X_, Y_)), Z_)), App("p", (App("m", (X_, Z_)), App("m", (Y_, Z_)))))),
        "fg": ((App("f", (App("g", (X_,)),)), X_),),
    }
    if k in table:
        return table[k]
    if k == "empty":
        return ()
    if k == "acuh":
        ax = [_ASSOC, _COMM, _UNIT]
        for i in range(1, tid.k + 1):
            h = f"h{i}"
            ax.append((App(h, (_f(X_, Y_),)), _f(App(h, (X_,)), App(h, (Y_,)))))
            ax.append((App(h, (App("0"),)), App("0")))
        return tuple(ax)
    if k in ("fl0", "el"):
        def a(*args: Term) -> App:
            return App("and", tuple(args))
        top = App("top")
        ax = [(a(a(X_, Y_), Z_), a(X_, a(Y_, Z_))), (a(X_, Y_), a(Y_, X_)), (a(X_, X_), X_), (a(X_, top), X_)]
        if k == "fl0":
            for i in range(1, tid.k + 1):
                r = f"all_r{i}"
                ax.append((App(r, (a(X_, Y_),)), a(App(r, (X_,)), App(r, (Y_,)))))
                ax.append((App(r, (top,)), top))
        else:
            for r in tid.roles:
                e = f"ex_{r}"
                ax.append((a(App(e, (a(X_, Y_),)), App(e, (Y_,))), App(e, (a(X_, Y_),))))
        return tuple(ax)
    return ()


_TYPES = {
    "empty": ("unitary", "unitary"),
    "c": ("finitary", "finitary"),
    "i": ("finitary", "finitary"),
    "acu": ("unitary", "infinitary"),
    "acui": ("unitary", "infinitary"),
    "ac": ("finitary", "infinitary"),
    "aci": ("finitary", "infinitary"),
    "a": ("infinitary", "infinitary"),
    "d": ("infinitary", "infinitary"),
    "el": ("zero", "infinitary"),
    "ai": ("zero", "infinitary"),
    "fl0": ("zero", "infinitary"),
    "acuh": ("zero", "infinitary"),
    "fg": ("unknown", "unknown"),
}


@lru_cache(maxsize=None)
def theory_info(tid: TheoryId) -> TheoryInfo:
    k = tid.kind
    finite = YES if k in ("empty", "c", "a", "ac", "d") else NO
    locally = YES if k in ("acui", "aci", "ai") else NO
    monoidal = YES if k in ("acu", "acui", "acuh", "fl0") else NO
    restrictive = monoidal
    regular = YES
    if k == "fg":
        finite = locally = monoidal = restrictive = UNKNOWN
    rt, ut = _TYPES[k]
    return TheoryInfo(tid, _signature(tid), _axioms(tid), regular, finite, locally,
                      monoidal, restrictive, rt, ut)


def signature(tid: TheoryId) -> Signature:
    return theory_info(tid).signature


# ---------------------------------------------------------------- normal forms

def _flatten(t: Term, fn: str) -> list[Term]:
    out: list[Term] = []
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, App) and s.fn == fn and len(s.args) == 2:
            stack.append(s.args[1])
            stack.append(s.args[0])
        else:
            out.append(s)
    return out


def _nest(fn: str, leaves: list[Term], unit: Term | None) -> Term:
    if not leaves:
        if unit is None:
            raise TermError(f"empty {fn}-combination has no unit")
        return unit
    out = leaves[-1]
    for s in reversed(leaves[:-1]):
        out = App(fn, (s, out))
    return out


ZERO = App("0")


def _nf_c(t: Term) -> Term:
    if isinstance(t, Var) or not t.args:
        return t
    args = tuple(_nf_c(a) for a in t.args)
    if t.fn == "f":
        args = tuple(sorted(args, key=term_key))
    return App(t.fn, args)


def _nf_flat(t: Term, *, comm: bool, unit: bool, idem: bool) -> Term:
    if isinstance(t, Var):
        return t
    if t.fn != "f":
        if t.fn == "0" and unit:
            return ZERO
        return App(t.fn, tuple(_nf_flat(a, comm=comm, unit=unit, idem=idem) for a in t.args))
    leaves = [_nf_flat(s, comm=comm, unit=unit, idem=idem) for s in _flatten(t, "f")]
    if unit:
        leaves = [s for s in leaves if s != ZERO]
    if idem:
        leaves = list(dict.fromkeys(leaves))
    if comm:
        leaves.sort(key=term_key)
    return _nest("f", leaves, ZERO if unit else None)


def _nf_i(t: Term) -> Term:
    if isinstance(t, Var) or not t.args:
        return t
    args = tuple(_nf_i(a) for a in t.args)
    if t.fn == "f" and args[0] == args[1]:
        return args[0]
    return App(t.fn, args)


def _nf_fg(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    inner = _nf_fg(t.args[0])
    if t.fn == "f" and isinstance(inner, App) and inner.fn == "g":
        return inner.args[0]
    return App(t.fn, (inner,))


def _nf_ai(t: Term) -> Term:
    if isinstance(t, Var):
        return t
    leaves = [_nf_ai(s) for s in _flatten(t, "f")]
    keyed = {term_key(s): s for s in leaves}
    word = band.band_normal_word(tuple(term_key(s) for s in leaves))
    return _nest("f", [keyed[k] for k in word], None)


# ---- word-based theories (ACUh, FL0): terms pushed to (word, variable) atoms

def word_atoms(tid: TheoryId, t: Term) -> list[tuple[tuple[str, ...], str]]:
    """List of (word, variable) atoms; multiplicities kept (ACUh), one per occurrence."""
    plus, unit = ("f", "0") if tid.kind == "acuh" else ("and", "top")
    out: list[tuple[tuple[str, ...], str]] = []

    def walk(s: Term, prefix: tuple[str, ...]) -> None:
        if isinstance(s, Var):
            out.append((prefix, s.name))
        elif s.fn == plus:
            walk(s.args[0], prefix)
            walk(s.args[1], prefix)
        elif s.fn == unit:
            return
        else:
            letter = s.fn if tid.kind == "acuh" else s.fn[len("all_"):]
            walk(s.args[0], prefix + (letter,))

    walk(t, ())
    return out


def atoms_to_term(tid: TheoryId, atoms: Iterable[tuple[tuple[str, ...], str]]) -> Term:
    plus, unit = ("f", "0") if tid.kind == "acuh" else ("and", "top")
    parts: list[Term] = []
    for word, v in sorted(atoms, key=lambda a: (a[1], len(a[0]), a[0])):
        s: Term = Var(v)
        for letter in reversed(word):
            s = App(letter if tid.kind == "acuh" else f"all_{letter}", (s,))
        parts.append(s)
    return _nest(plus, parts, App(unit))


def _nf_words(tid: TheoryId, t: Term) -> Term:
    atoms = word_atoms(tid, t)
    if tid.kind == "fl0":
        atoms = list(set(atoms))
    return atoms_to_term(tid, atoms)


# ---- D: least fully distributed member of the finite class

def _d_reducible(t: Term) -> bool:
    for _, s in positions(t):
        if isinstance(s, App) and s.fn == "m":
            a, b = s.args
            if isinstance(a, App) and a.fn == "p" or isinstance(b, App) and b.fn == "p":
                return True
    return False


def _nf_d(t: Term) -> Term:
    members = enumerate_class(D, t)
    irreducible = [s for s in members if not _d_reducible(s)]
    return min(irreducible, key=lambda s: (size(s), term_key(s)))


def normal_form(tid: TheoryId, t: Term, *, check: bool = True) -> Term:
    if check:
        check_signature(t, signature(tid))
    return _normal_form(tid, t)


@lru_cache(maxsize=500_000)
def _normal_form(tid: TheoryId, t: Term) -> Term:
    k = tid.kind
    if k == "empty":
        return t
    if k == "c":
        return _nf_c(t)
    if k == "a":
        return _nf_flat(t, comm=False, unit=False, idem=False)
    if k == "ac":
        return _nf_flat(t, comm=True, unit=False, idem=False)
    if k == "acu":
        return _nf_flat(t, comm=True, unit=True, idem=False)
    if k == "aci":
        return _nf_flat(t, comm=True, unit=False, idem=True)
    if k == "acui":
        return _nf_flat(t, comm=True, unit=True, idem=True)
    if k == "i":
        return _nf_i(t)
    if k == "fg":
        return _nf_fg(t)
    if k == "ai":
        return _nf_ai(t)
    if k == "d":
        return _nf_d(t)
    if k in ("acuh", "fl0"):
        return _nf_words(tid, t)
    if k == "el":
        return el.normal_form(t)
    raise ValueError(k)


def eq_modulo(tid: TheoryId, s: Term, t: Term, *, check: bool = True) -> bool:
    if s == t:
        if check:
            sig = signature(tid)
            check_signature(s, sig)
        return True
    if tid.kind == "d":
        if check:
            sig = signature(tid)
            check_signature(s, sig)
            check_signature(t, sig)
        if pi2_value(s) != pi2_value(t):
            return False
        return t in enumerate_class(D, s)
    return normal_form(tid, s, check=check) == normal_form(tid, t, check=check)


# ---------------------------------------------------------------- finite classes

CLASS_CAP = 200_000


def enumerate_class(tid: TheoryId, t: Term, cap: int = CLASS_CAP) -> frozenset[Term]:
    info = theory_info(tid)
    if info.finite != YES:
        raise Refusal(f"theory {tid} is not finite; its classes are infinite")
    return _enumerate_class(tid, t, cap)


@lru_cache(maxsize=20_000)
def _enumerate_class(tid: TheoryId, t: Term, cap: int) -> frozenset[Term]:
    rules = []
    for l, r in theory_info(tid).axioms:
        rules.append((l, r))
        rules.append((r, l))
    seen = {t}
    frontier = [t]
    while frontier:
        nxt = []
        for s in frontier:
            for pos, sub in positions(s):
                if isinstance(sub, Var):
                    continue
                for l, r in rules:
                    b = match(l, sub)
                    if b is None:
                        continue
                    new = replace_at(s, pos, apply_subst(b, r))
                    if new not in seen:
                        seen.add(new)
                        nxt.append(new)
                        if len(seen) > cap:
                            raise Undecided(f"class of {t} exceeds {cap} members")
        frontier = nxt
    return frozenset(seen)


# ---------------------------------------------------------------- measures

def pi2_value(t: Term) -> int:
    if isinstance(t, Var):
        return 2
    if not t.args:
        return 2
    if t.fn == "m":
        return pi2_value(t.args[0]) * pi2_value(t.args[1])
    if t.fn == "p":
        return pi2_value(t.args[0]) + pi2_value(t.args[1])
    raise TermError(f"symbol {t.fn} is foreign to the D interpretation")


def role_depth(t: Term) -> int:
    return el.role_depth(t)


__all__ = [
    "TheoryId", "TheoryInfo", "parse_theory", "theory_info", "signature", "normal_form", "eq_modulo",
    "enumerate_class", "pi2_value", "role_depth", "word_atoms", "atoms_to_term",
    "EMPTY", "C", "A", "I", "AC", "ACU", "ACI", "ACUI", "AI", "D", "FG", "ACUh", "FL0", "EL",
    "YES", "NO", "UNKNOWN",
]

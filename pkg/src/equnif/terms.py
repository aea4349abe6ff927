"""First-order terms, substitutions and permutations.

Variables are identified by name.  A name is a symbol iff the active
signature declares it; every other identifier is a variable.  Names that
start with an underscore are reserved for generated fresh variables.
"""
from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Union


class TermError(ValueError):
    """Raised for malformed terms or signature violations."""


@dataclass(frozen=True, slots=True)
class Symbol:
    name: str
    arity: int

    def __post_init__(self) -> None:
        if not self.name:
            raise TermError("symbol name must be nonempty")
        if self.arity < 0:
            raise TermError(f"negative arity for {self.name}")


@dataclass(frozen=True)
class Signature:
    symbols: frozenset[Symbol]
    _by_name: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        by_name: dict[str, Symbol] = {}
        for s in self.symbols:
            if s.name in by_name:
                raise TermError(f"duplicate symbol name {s.name}")
            by_name[s.name] = s
        object.__setattr__(self, "_by_name", by_name)

    @classmethod
    def of(cls, *pairs: tuple[str, int]) -> "Signature":
        return cls(frozenset(Symbol(n, a) for n, a in pairs))

    def __contains__(self, name: object) -> bool:
        return name in self._by_name

    def arity(self, name: str) -> int:
        return self._by_name[name].arity

    def get(self, name: str) -> Symbol | None:
        return self._by_name.get(name)

    @property
    def names(self) -> frozenset[str]:
        return frozenset(self._by_name)

    def constants(self) -> list[str]:
        return sorted(n for n, s in self._by_name.items() if s.arity == 0)

    def functions(self) -> list[Symbol]:
        return sorted((s for s in self.symbols if s.arity > 0), key=lambda s: s.name)


@dataclass(frozen=True, slots=True)
class Var:
    name: str

    def __str__(self) -> str:
        return self.name


@dataclass(frozen=True, slots=True)
class App:
    fn: str
    args: tuple["Term", ...] = ()

    def __str__(self) -> str:
        return print_term(self)


Term = Union[Var, App]


# ---------------------------------------------------------------- utilities

def is_var(t: Term) -> bool:
    return isinstance(t, Var)


def vars_of(t: Term) -> frozenset[str]:
    out: set[str] = set()
    _collect_vars(t, out)
    return frozenset(out)


def _collect_vars(t: Term, out: set[str]) -> None:
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            out.add(s.name)
        else:
            stack.extend(s.args)


def vars_of_all(ts: Iterable[Term]) -> frozenset[str]:
    out: set[str] = set()
    for t in ts:
        _collect_vars(t, out)
    return frozenset(out)


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(a) for a in t.args)


def depth(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(depth(a) for a in t.args)


def symbols_of(t: Term) -> frozenset[tuple[str, int]]:
    out: set[tuple[str, int]] = set()
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, App):
            out.add((s.fn, len(s.args)))
            stack.extend(s.args)
    return frozenset(out)


def term_key(t: Term) -> tuple:
    """Total order key: variables first, then symbol name, arity, children."""
    if isinstance(t, Var):
        return (0, t.name)
    return (1, t.fn, len(t.args), tuple(term_key(a) for a in t.args))


def check_signature(t: Term, sig: Signature) -> None:
    stack = [t]
    while stack:
        s = stack.pop()
        if isinstance(s, Var):
            if s.name in sig:
                raise TermError(f"variable {s.name} clashes with a symbol")
            continue
        sym = sig.get(s.fn)
        if sym is None:
            raise TermError(f"symbol {s.fn} is not in the signature")
        if sym.arity != len(s.args):
            raise TermError(f"arity mismatch for {s.fn}: expected {sym.arity}, got {len(s.args)}")
        stack.extend(s.args)


# ---------------------------------------------------------------- printing / parsing

def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.fn
    return t.fn + "(" + ",".join(print_term(a) for a in t.args) + ")"


_TOKEN = re.compile(r"\s*(?:([A-Za-z0-9_]+)|(.))")


def _tokenize(text: str) -> list[str]:
    toks: list[str] = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace only
            break
        ident, other = m.group(1), m.group(2)
        if ident is not None:
            toks.append(ident)
        elif other is not None and not other.isspace():
            if other not in "(),":
                raise TermError(f"unexpected character {other!r}")
            toks.append(other)
        pos = m.end()
    return toks


def parse_term(text: str, sig: Signature) -> Term:
    toks = _tokenize(text)
    if not toks:
        raise TermError("empty term")
    t, pos = _parse(toks, 0, sig)
    if pos != len(toks):
        raise TermError(f"unexpected trailing input near {toks[pos]!r}")
    return t


def _parse(toks: list[str], pos: int, sig: Signature) -> tuple[Term, int]:
    if pos >= len(toks):
        raise TermError("unexpected end of input")
    name = toks[pos]
    if name in "(),":
        raise TermError(f"expected identifier, found {name!r}")
    pos += 1
    has_args = pos < len(toks) and toks[pos] == "("
    if name not in sig:
        if has_args:
            raise TermError(f"{name} is not a function symbol of the signature")
        if name[0].isdigit():
            raise TermError(f"numeric identifier {name} is not a declared symbol")
        return Var(name), pos
    args: list[Term] = []
    if has_args:
        pos += 1
        while True:
            a, pos = _parse(toks, pos, sig)
            args.append(a)
            if pos >= len(toks):
                raise TermError("unbalanced parentheses")
            if toks[pos] == ",":
                pos += 1
                continue
            if toks[pos] == ")":
                pos += 1
                break
            raise TermError(f"unexpected token {toks[pos]!r}")
    arity = sig.arity(name)
    if arity != len(args):
        raise TermError(f"arity mismatch for {name}: expected {arity}, got {len(args)}")
    return App(name, tuple(args)), pos


# ---------------------------------------------------------------- substitutions

class Substitution(Mapping[str, Term]):
    """Finite map from variable names to terms with identity bindings pruned."""

    __slots__ = ("_map", "_hash")

    def __init__(self, bindings: Mapping[str, Term] | Iterable[tuple[str, Term]] = ()) -> None:
        items = bindings.items() if isinstance(bindings, Mapping) else bindings
        m: dict[str, Term] = {}
        for k, v in items:
            if isinstance(v, Var) and v.name == k:
                continue
            m[k] = v
        self._map = dict(sorted(m.items()))
        self._hash: int | None = None

    # Mapping protocol over the stored (non-identity) bindings
    def __getitem__(self, name: str) -> Term:
        return self._map[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __call__(self, name: str) -> Term:
        return self._map.get(name, Var(name))

    def __eq__(self, other: object) -> bool:
        if isinstance(other, Substitution):
            return self._map == other._map
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(tuple(self._map.items()))
        return self._hash

    def __repr__(self) -> str:
        return "{" + ", ".join(f"{k}↦{print_term(v)}" for k, v in self._map.items()) + "}"

    def __str__(self) -> str:
        return "{" + ",".join(f"{k}:={print_term(v)}" for k, v in self._map.items()) + "}"

    @property
    def dom(self) -> frozenset[str]:
        return frozenset(self._map)

    @property
    def vran(self) -> frozenset[str]:
        return vars_of_all(self._map.values())

    def apply(self, t: Term) -> Term:
        return apply_subst(self, t)

    def key(self) -> tuple:
        return tuple((k, term_key(v)) for k, v in self._map.items())


IDENTITY = Substitution()


def apply_subst(sigma: Mapping[str, Term], t: Term) -> Term:
    if not sigma:
        return t
    if isinstance(t, Var):
        return sigma.get(t.name, t)
    if not t.args:
        return t
    return App(t.fn, tuple(apply_subst(sigma, a) for a in t.args))


def compose_subst(lam: Substitution, sigma: Substitution) -> Substitution:
    """The substitution x ↦ λ(σ(x))."""
    out: dict[str, Term] = {}
    for x, t in sigma.items():
        out[x] = apply_subst(lam, t)
    for x, t in lam.items():
        if x not in sigma:
            out[x] = t
    return Substitution(out)


def restrict_subst(theta: Substitution, X: Iterable[str]) -> Substitution:
    keep = set(X)
    return Substitution((k, v) for k, v in theta.items() if k in keep)


def subst_from_strings(bindings: Mapping[str, str], sig: Signature) -> Substitution:
    return Substitution({k: parse_term(v, sig) for k, v in bindings.items()})


def var_range(sigma: Substitution, X: Iterable[str] | None = None) -> frozenset[str]:
    if X is None:
        return sigma.vran
    return vars_of_all(sigma(x) for x in X if x in sigma)


# ---------------------------------------------------------------- fresh names

class FreshSupply:
    """Deterministic generator of reserved names _w0, _w1, ..."""

    def __init__(self, prefix: str = "_w", start: int = 0) -> None:
        self.prefix = prefix
        self._counter = itertools.count(start)

    def next(self, avoid: Iterable[str] = ()) -> str:
        avoid = set(avoid)
        while True:
            name = f"{self.prefix}{next(self._counter)}"
            if name not in avoid:
                return name

    def take(self, n: int, avoid: Iterable[str] = ()) -> list[str]:
        avoid = set(avoid)
        out = []
        for _ in range(n):
            name = self.next(avoid)
            out.append(name)
            avoid.add(name)
        return out


def fresh_names(n: int, avoid: Iterable[str] = (), prefix: str = "_w") -> list[str]:
    return FreshSupply(prefix).take(n, avoid)


# ---------------------------------------------------------------- permutations

@dataclass(frozen=True)
class Permutation:
    mapping: tuple[tuple[str, str], ...]

    def __post_init__(self) -> None:
        m = dict(self.mapping)
        if len(set(m.values())) != len(m):
            raise TermError("permutation map is not injective")
        if set(m.values()) != set(m):
            raise TermError("permutation image differs from its support")

    @classmethod
    def from_dict(cls, m: Mapping[str, str]) -> "Permutation":
        return cls(tuple(sorted((k, v) for k, v in m.items() if k != v)))

    @property
    def support(self) -> frozenset[str]:
        return frozenset(k for k, _ in self.mapping)

    def __call__(self, name: str) -> str:
        return dict(self.mapping).get(name, name)

    def inverse(self) -> "Permutation":
        return Permutation.from_dict({v: k for k, v in self.mapping})

    def as_subst(self) -> Substitution:
        return Substitution({k: Var(v) for k, v in self.mapping})

    def is_identity(self) -> bool:
        return not self.mapping


def permutation_from_renaming(vars_: Iterable[str], avoid: Iterable[str],
                              supply: FreshSupply | None = None) -> Permutation:
    """Swap each variable of ``vars_`` with a fresh name outside ``avoid``."""
    vs = sorted(set(vars_))
    if not vs:
        return Permutation(())
    supply = supply or FreshSupply()
    fresh = supply.take(len(vs), set(avoid) | set(vs))
    m: dict[str, str] = {}
    for v, w in zip(vs, fresh):
        m[v] = w
        m[w] = v
    return Permutation.from_dict(m)


def permutation_extending(partial: Mapping[str, str]) -> Permutation:
    """A permutation agreeing with an injective variable map on its domain.

    Elements of the image that are not in the domain are mapped back onto
    domain elements outside the image, pairing both lists in sorted order.
    """
    if len(set(partial.values())) != len(partial):
        raise TermError("partial renaming is not injective")
    dom = set(partial)
    img = set(partial.values())
    m = dict(partial)
    for a, b in zip(sorted(img - dom), sorted(dom - img)):
        m[a] = b
    return Permutation.from_dict(m)

"""Text formats: problem files (`theory:` header, `s = t` lines) and substitution files (`x := t`)."""
from __future__ import annotations

from pathlib import Path

from . import theories as th
from .terms import Substitution, Term, TermError, parse_term
from .unify import UnificationProblem


class ParseError(ValueError):
    pass


def _lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line


def _term(text: str, tid: th.TheoryId, lineno: int) -> Term:
    try:
        return parse_term(text, th.signature(tid))
    except TermError as exc:
        raise ParseError(f"line {lineno}: {exc}") from None


def parse_theory_name(name: str) -> th.TheoryId:
    try:
        return th.parse_theory(name)
    except ValueError as exc:
        raise ParseError(str(exc)) from None


def parse_problem(text: str, theory: th.TheoryId | None = None) -> UnificationProblem:
    """Problem text; a `theory:` header must agree with ``theory`` when both are given."""
    tid = theory
    eqs: list[tuple[Term, Term]] = []
    for lineno, line in _lines(text):
        if line.lower().startswith("theory:"):
            declared = parse_theory_name(line.split(":", 1)[1])
            if tid is not None and declared != tid:
                raise ParseError(f"line {lineno}: header declares {declared}, command uses {tid}")
            if eqs:
                raise ParseError(f"line {lineno}: theory header after equations")
            tid = declared
            continue
        if tid is None:
            raise ParseError(f"line {lineno}: equation before a theory header")
        if line.count("=") != 1 or ":=" in line:
            raise ParseError(f"line {lineno}: expected one equation 's = t'")
        lhs, rhs = line.split("=")
        eqs.append((_term(lhs, tid, lineno), _term(rhs, tid, lineno)))
    if tid is None:
        raise ParseError("missing theory header")
    return UnificationProblem(tid, tuple(eqs))


def load_problem_file(path: str | Path, theory: th.TheoryId | None = None) -> UnificationProblem:
    return parse_problem(Path(path).read_text(encoding="utf-8"), theory)


def parse_substitution(text: str, tid: th.TheoryId) -> Substitution:
    out: dict[str, Term] = {}
    for lineno, line in _lines(text):
        if ":=" not in line:
            raise ParseError(f"line {lineno}: expected a binding 'x := t'")
        x, t = (p.strip() for p in line.split(":=", 1))
        if not x.isidentifier() or x in th.signature(tid):
            raise ParseError(f"line {lineno}: {x!r} is not a variable")
        if x in out:
            raise ParseError(f"line {lineno}: {x} bound twice")
        out[x] = _term(t, tid, lineno)
    return Substitution(out)


def load_substitution_file(path: str | Path, tid: th.TheoryId) -> Substitution:
    return parse_substitution(Path(path).read_text(encoding="utf-8"), tid)


def parse_chain(text: str, tid: th.TheoryId) -> list[Substitution]:
    """Substitutions separated by lines consisting of `---`."""
    blocks: list[list[str]] = [[]]
    for raw in text.splitlines():
        if raw.strip() == "---":
            blocks.append([])
        else:
            blocks[-1].append(raw)
    return [parse_substitution("\n".join(b), tid) for b in blocks]

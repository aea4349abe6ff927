"""Minimal natural solutions of linear Diophantine systems."""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Sequence

from . import kernels


@dataclass(frozen=True)
class DioSystem:
    """rows·x = constants (homogeneous when constants is None)."""

    rows: tuple[tuple[int, ...], ...]
    unknowns: tuple[str, ...]
    constants: tuple[int, ...] | None = None

    def __post_init__(self) -> None:
        n = len(self.unknowns)
        for r in self.rows:
            if len(r) != n:
                raise ValueError("row length differs from the number of unknowns")
        if self.constants is not None:
            if len(self.constants) != len(self.rows):
                raise ValueError("one constant per row is required")
            if any(c < 0 for c in self.constants):
                raise ValueError("constants must be natural numbers")

    @classmethod
    def homogeneous(cls, rows: Sequence[Sequence[int]], unknowns: Sequence[str] | None = None) -> "DioSystem":
        rows_t = tuple(tuple(int(c) for c in r) for r in rows)
        n = len(rows_t[0]) if rows_t else len(unknowns or ())
        return cls(rows_t, tuple(unknowns) if unknowns else tuple(f"x{i + 1}" for i in range(n)))

    @classmethod
    def inhomogeneous(cls, rows: Sequence[Sequence[int]], constants: Sequence[int],
                      unknowns: Sequence[str] | None = None) -> "DioSystem":
        base = cls.homogeneous(rows, unknowns)
        return cls(base.rows, base.unknowns, tuple(int(c) for c in constants))

    def satisfied_by(self, v: Sequence[int]) -> bool:
        rhs = self.constants or (0,) * len(self.rows)
        return all(sum(a * x for a, x in zip(r, v)) == b for r, b in zip(self.rows, rhs))


@dataclass(frozen=True)
class HilbertBasis:
    vectors: tuple[tuple[int, ...], ...]
    unknowns: tuple[str, ...]

    def __len__(self) -> int:
        return len(self.vectors)

    def __iter__(self):
        return iter(self.vectors)

    def as_set(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self.vectors)


def hilbert_basis(sys: DioSystem) -> HilbertBasis:
    if sys.constants is not None and any(sys.constants):
        raise ValueError("hilbert_basis expects a homogeneous system")
    n = len(sys.unknowns)
    if not sys.rows:  # no constraint: unit vectors
        vecs = [tuple(1 if j == i else 0 for j in range(n)) for i in range(n)]
        return HilbertBasis(tuple(sorted(vecs)), sys.unknowns)
    vecs = kernels.hilbert_basis_int([list(r) for r in sys.rows], [-1] * n)
    return HilbertBasis(tuple(vecs), sys.unknowns)


def min_solutions_inhomogeneous(sys: DioSystem) -> tuple[frozenset[tuple[int, ...]], HilbertBasis]:
    """Minimal particular solutions and the homogeneous basis of rows·x = b.

    A slack unknown t carries the column −b and is bounded by 1; solutions
    with t = 1 are the particular ones and those with t = 0 the homogeneous
    basis.
    """
    b = sys.constants or (0,) * len(sys.rows)
    n = len(sys.unknowns)
    if not sys.rows:
        return frozenset({(0,) * n}), hilbert_basis(DioSystem((), sys.unknowns))
    rows = [list(r) + [-c] for r, c in zip(sys.rows, b)]
    vecs = kernels.hilbert_basis_int(rows, [-1] * n + [1])
    particulars = frozenset(v[:n] for v in vecs if v[n] == 1)
    homog = tuple(sorted(v[:n] for v in vecs if v[n] == 0))
    return particulars, HilbertBasis(homog, sys.unknowns)


# ---------------------------------------------------------------- text format

_MONO = re.compile(r"^\s*(\d*)\s*\*?\s*([A-Za-z_][A-Za-z0-9_]*)\s*$")


def _side(text: str) -> tuple[dict[str, int], int]:
    coeffs: dict[str, int] = {}
    const = 0
    for part in text.split("+"):
        part = part.strip()
        if not part:
            raise ValueError(f"empty summand in {text!r}")
        if part.isdigit():
            const += int(part)
            continue
        m = _MONO.match(part)
        if m is None:
            raise ValueError(f"cannot read summand {part!r}")
        c = int(m.group(1)) if m.group(1) else 1
        coeffs[m.group(2)] = coeffs.get(m.group(2), 0) + c
    return coeffs, const


def parse_system(text: str) -> DioSystem:
    """One equation per line, e.g. ``2y = x1 + 2x2``; natural constants allowed."""
    eqs = []
    names: list[str] = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if line.count("=") != 1:
            raise ValueError(f"line {lineno}: expected exactly one '='")
        lhs, rhs = line.split("=")
        try:
            lc, lk = _side(lhs)
            rc, rk = _side(rhs)
        except ValueError as exc:
            raise ValueError(f"line {lineno}: {exc}") from None
        for nm in list(lc) + list(rc):
            if nm not in names:
                names.append(nm)
        eqs.append((lc, rc, rk - lk))
    rows = []
    consts = []
    flip_needed = False
    for lc, rc, k in eqs:
        row = [lc.get(nm, 0) - rc.get(nm, 0) for nm in names]
        if k < 0:
            row, k = [-a for a in row], -k
        rows.append(tuple(row))
        consts.append(k)
        flip_needed = flip_needed or k != 0
    if flip_needed:
        return DioSystem(tuple(rows), tuple(names), tuple(consts))
    return DioSystem(tuple(rows), tuple(names))


def lankford_system(n: int) -> DioSystem:
    """n·y = x1 + 2·x2 + ... + n·xn, unknowns ordered (y, x1, ..., xn)."""
    row = (n,) + tuple(-i for i in range(1, n + 1))
    return DioSystem((row,), ("y",) + tuple(f"x{i}" for i in range(1, n + 1)))

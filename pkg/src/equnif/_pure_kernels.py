"""Pure-Python hot kernels; the compiled module mirrors these signatures."""
from __future__ import annotations

from typing import Sequence

BACKEND = "python"


def hilbert_basis_int(rows: Sequence[Sequence[int]], bounds: Sequence[int]) -> list[tuple[int, ...]]:
    """Minimal nonzero natural solutions of rows·x = 0 (Contejean–Devie completion).

    ``bounds[i] < 0`` means unbounded; otherwise coordinate i never exceeds it.
    """
    m = len(rows)
    n = len(rows[0]) if m else len(bounds)
    cols = [tuple(rows[r][i] for r in range(m)) for i in range(n)]
    basis: list[tuple[int, ...]] = []
    frontier: list[tuple[tuple[int, ...], tuple[int, ...]]] = []
    for i in range(n):
        if bounds[i] == 0:
            continue
        e = tuple(1 if j == i else 0 for j in range(n))
        frontier.append((e, cols[i]))
    while frontier:
        frontier.sort()
        rest = []
        for p, ap in frontier:
            if not any(ap):
                basis.append(p)
            else:
                rest.append((p, ap))
        nxt: dict[tuple[int, ...], tuple[int, ...]] = {}
        for p, ap in rest:
            for i in range(n):
                b = bounds[i]
                if b >= 0 and p[i] >= b:
                    continue
                col = cols[i]
                if sum(a * c for a, c in zip(ap, col)) >= 0:
                    continue
                q = p[:i] + (p[i] + 1,) + p[i + 1:]
                if q in nxt:
                    continue
                if any(all(x <= y for x, y in zip(v, q)) for v in basis):
                    continue
                nxt[q] = tuple(a + c for a, c in zip(ap, col))
        frontier = list(nxt.items())
    basis.sort()
    return basis


def cover_scan(covers: Sequence[int], full: int, m: int) -> tuple[int, int]:
    """Count m-tuples over ``covers`` whose bitwise OR equals ``full``.

    Returns (number of tuples, number of covering tuples).
    """
    k = len(covers)
    total = k ** m
    if m == 0:
        return 1, int(full == 0)
    hits = 0
    # odometer with prefix ORs
    idx = [0] * m
    pref = [0] * (m + 1)
    for j in range(m):
        pref[j + 1] = pref[j] | covers[0]
    last = m - 1
    while True:
        base = pref[last]
        for c in covers:
            if base | c == full:
                hits += 1
        j = last - 1
        while j >= 0 and idx[j] == k - 1:
            j -= 1
        if j < 0:
            break
        idx[j] += 1
        pref[j + 1] = pref[j] | covers[idx[j]]
        for t in range(j + 1, last):
            idx[t] = 0
            pref[t + 1] = pref[t] | covers[0]
    return total, hits

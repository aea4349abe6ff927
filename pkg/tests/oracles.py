"""Independent brute-force oracles shared by unit and acceptance tests."""
import itertools

import numpy as np


def minimal_solutions_box(rows, n, bound=12, constants=None):
    """Componentwise-minimal nonzero natural solutions of rows·x = constants with entries ≤ bound."""
    shape = (bound + 1,) * n
    grid = np.indices(shape).reshape(n, -1).T            # all vectors in the box
    ok = np.ones(len(grid), dtype=bool)
    rhs = constants or [0] * len(rows)
    for r, b in zip(rows, rhs):
        ok &= grid @ np.asarray(r) == b
    if constants is None or not any(constants):
        ok &= grid.sum(axis=1) > 0
    B = ok.reshape(shape)
    D = B.copy()                                          # D[s]: some solution t ≤ s
    for ax in range(n):
        D = np.logical_or.accumulate(D, axis=ax)
    below = np.zeros(shape, dtype=bool)                   # some solution t ≤ s, t ≠ s
    for ax in range(n):
        sl_dst = [slice(None)] * n
        sl_src = [slice(None)] * n
        sl_dst[ax] = slice(1, None)
        sl_src[ax] = slice(None, -1)
        below[tuple(sl_dst)] |= D[tuple(sl_src)]
    minimal = B & ~below
    return {tuple(int(c) for c in v) for v in np.argwhere(minimal)}


def single_equation_systems(max_unknowns=4, max_coeff=3):
    for n in range(1, max_unknowns + 1):
        for row in itertools.product(range(-max_coeff, max_coeff + 1), repeat=n):
            yield (row,), n

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from equnif import kernels
from equnif import _pure_kernels as pure
from equnif.diophantine import (DioSystem, hilbert_basis, lankford_system, min_solutions_inhomogeneous,
                                parse_system)

from oracles import minimal_solutions_box


def basis(rows, names=None):
    return hilbert_basis(DioSystem.homogeneous(rows, names)).as_set()


def test_examples():
    assert basis([(1, 1, -2)]) == {(2, 0, 1), (0, 2, 1), (1, 1, 1)}
    assert basis([(1, -1)]) == {(1, 1)}
    assert basis([(2, -1, -2)], ["y", "x1", "x2"]) == {(1, 2, 0), (1, 0, 1)}


def test_inhomogeneous_examples():
    mins, hb = min_solutions_inhomogeneous(DioSystem.inhomogeneous([(1, 1)], [2]))
    assert mins == {(2, 0), (1, 1), (0, 2)} and len(hb) == 0
    mins, _ = min_solutions_inhomogeneous(DioSystem.inhomogeneous([(1,)], [0]))
    assert mins == {(0,)}
    mins, _ = min_solutions_inhomogeneous(DioSystem.inhomogeneous([(1, 2)], [3]))
    assert mins == {(3, 0), (1, 1)}


def test_parse_system():
    s = parse_system("2y = x1 + 2x2")
    assert s.unknowns == ("y", "x1", "x2") and s.rows == ((2, -1, -2),) and s.constants is None
    s = parse_system("x + y = 2\n# comment\n")
    assert s.constants == (2,)
    with pytest.raises(ValueError):
        parse_system("x = = y")


def test_lankford_sizes_grow():
    sizes = [len(hilbert_basis(lankford_system(n))) for n in range(2, 6)]
    assert sizes == sorted(set(sizes))
    assert sizes[:2] == [2, 4]


rows2 = st.lists(st.lists(st.integers(-3, 3), min_size=3, max_size=3).map(tuple), min_size=1, max_size=2)


@given(rows2)
@settings(max_examples=60, deadline=None)
def test_oracle_and_soundness(rows):
    b = basis(rows)
    for v in b:
        assert any(v) and DioSystem.homogeneous(rows).satisfied_by(v)
    for u in b:
        for v in b:
            assert u == v or not all(a <= c for a, c in zip(u, v))
    assert b == minimal_solutions_box(rows, 3, bound=12)


def test_compiled_and_pure_agree():
    rng = random.Random(1)
    for _ in range(40):
        n = rng.randint(2, 4)
        rows = [[rng.randint(-3, 3) for _ in range(n)] for _ in range(rng.randint(1, 2))]
        assert sorted(kernels.hilbert_basis_int(rows, [-1] * n)) == sorted(pure.hilbert_basis_int(rows, [-1] * n))

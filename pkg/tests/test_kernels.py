import itertools
import os
import random

import pytest

from equnif import _pure_kernels as pure
from equnif import kernels

try:
    from equnif import _ckernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def brute_cover(covers, full, m):
    hits = 0
    for combo in itertools.product(covers, repeat=m):
        acc = 0
        for c in combo:
            acc |= c
        hits += acc == full
    return len(covers) ** m, hits


def test_backend_selected():
    assert kernels.BACKEND in ("python", "cython")
    if os.environ.get("EQUNIF_PURE") == "1":
        assert kernels.BACKEND == pure.BACKEND
    elif compiled is not None:
        assert kernels.BACKEND == compiled.BACKEND


def test_cover_scan_pure_matches_brute():
    rng = random.Random(3)
    for _ in range(60):
        bits = rng.randint(1, 8)
        covers = [rng.randrange(1 << bits) for _ in range(rng.randint(1, 5))]
        full = rng.randrange(1 << bits)
        m = rng.randint(0, 4)
        assert pure.cover_scan(covers, full, m) == brute_cover(covers, full, m)


@needs_compiled
def test_cover_scan_compiled_matches_pure():
    rng = random.Random(4)
    for _ in range(60):
        bits = rng.choice([6, 40, 70, 130])
        covers = [0] + [rng.getrandbits(bits) for _ in range(rng.randint(1, 6))]
        full = 0
        for c in rng.sample(covers, min(3, len(covers))):
            full |= c
        m = rng.randint(0, 4)
        assert compiled.cover_scan(covers, full, m) == pure.cover_scan(covers, full, m)


def test_cover_scan_wide_masks_fall_back():
    covers = [0, 1 << 300, 1]
    assert kernels.cover_scan(covers, (1 << 300) | 1, 2) == (9, 2)


@needs_compiled
def test_hilbert_compiled_matches_pure():
    rng = random.Random(5)
    for _ in range(60):
        n = rng.randint(2, 5)
        rows = [[rng.randint(-4, 4) for _ in range(n)] for _ in range(rng.randint(1, 2))]
        bounds = [rng.choice([-1, -1, 1, 2]) for _ in range(n)]
        assert compiled.hilbert_basis_int(rows, bounds) == pure.hilbert_basis_int(rows, bounds)

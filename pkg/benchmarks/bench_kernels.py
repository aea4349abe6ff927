"""Compare the compiled and pure-Python kernels.

Usage: python benchmarks/bench_kernels.py [--repeat N]
"""
import argparse
import timeit

from equnif import _pure_kernels as pure
from equnif.diophantine import lankford_system
from equnif.unify import AcuiLattice, UnificationProblem
from equnif import theories as th

try:
    from equnif import _ckernels as compiled
except ImportError:
    compiled = None


def workloads():
    for n in (5, 7, 9):
        sys_ = lankford_system(n)
        rows = [list(r) for r in sys_.rows]
        yield f"hilbert lankford n={n}", "hilbert_basis_int", (rows, [-1] * len(sys_.unknowns))
    lat = AcuiLattice(UnificationProblem.of(th.ACUI, ("f(x,f(y,z))", "f(u,v)")), 0)
    n = len(lat.names)
    covers = [0]
    full = 0
    for j, mj in enumerate(lat.patterns):
        full |= mj << (n * j)
    for p in lat.patterns:
        covers.append(sum(p << (n * j) for j, mj in enumerate(lat.patterns) if p & ~mj == 0))
    for m in (5, 6):
        yield f"cover_scan acui m={m}", "cover_scan", (covers, full, m)


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()
    print(f"{'workload':28} {'pure (s)':>10} {'compiled (s)':>13} {'speedup':>8}")
    for label, fn, fargs in workloads():
        tp = min(timeit.repeat(lambda: getattr(pure, fn)(*fargs), number=1, repeat=args.repeat))
        if compiled is None:
            print(f"{label:28} {tp:10.4f} {'n/a':>13} {'n/a':>8}")
            continue
        assert getattr(pure, fn)(*fargs) == getattr(compiled, fn)(*fargs)
        tc = min(timeit.repeat(lambda: getattr(compiled, fn)(*fargs), number=1, repeat=args.repeat))
        print(f"{label:28} {tp:10.4f} {tc:13.4f} {tp / tc:7.1f}x")


if __name__ == "__main__":
    main()

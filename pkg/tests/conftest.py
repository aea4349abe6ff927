import random

import pytest
from hypothesis import strategies as st

from equnif import theories as th
from equnif.terms import App, Substitution, Var, parse_term


def term(tid, text):
    return parse_term(text, th.signature(tid))


def subst(tid, **bindings):
    return Substitution({x: term(tid, t) for x, t in bindings.items()})


def terms_strategy(tid, names=("x", "y", "z"), max_leaves=6):
    """Random terms over the theory's signature and the given variable names."""
    sig = th.signature(tid)
    leaves = [st.sampled_from([Var(n) for n in names])]
    consts = [App(c) for c in sig.constants()]
    if consts:
        leaves.append(st.sampled_from(consts))
    base = st.one_of(*leaves)
    fns = list(sig.functions())

    def extend(children):
        return st.sampled_from(fns).flatmap(
            lambda s: st.tuples(*[children] * s.arity).map(lambda a, s=s: App(s.name, a)))

    return st.recursive(base, extend, max_leaves=max_leaves)


def random_term(rng: random.Random, tid, names=("x", "y", "z"), depth=3):
    sig = th.signature(tid)
    fns = list(sig.functions())
    consts = list(sig.constants())
    if depth == 0 or rng.random() < 0.3:
        if consts and rng.random() < 0.15:
            return App(rng.choice(consts))
        return Var(rng.choice(names))
    s = rng.choice(fns)
    return App(s.name, tuple(random_term(rng, tid, names, depth - 1) for _ in range(s.arity)))


@pytest.fixture
def rng():
    return random.Random(20240521)


# ---------------------------------------------------------------- acceptance summary

_ACCEPTANCE: dict[str, tuple[str, float]] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_A" not in report.nodeid:
        return
    crit = report.nodeid.split("::test_")[1].split("_")[0]
    if report.when == "call" or report.outcome != "passed":
        prev = _ACCEPTANCE.get(crit, ("PASS", 0.0))
        status = "PASS" if prev[0] == "PASS" and report.outcome == "passed" else "FAIL"
        _ACCEPTANCE[crit] = (status, prev[1] + report.duration)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for crit in sorted(_ACCEPTANCE, key=lambda c: int(c[1:])):
        status, secs = _ACCEPTANCE[crit]
        terminalreporter.write_line(f"{crit}: {status} ({secs:.1f} s)")

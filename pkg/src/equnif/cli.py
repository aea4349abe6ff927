"""Command-line workbench.  Exit codes: 0 ok, 2 parse error, 3 refusal, 4 undecided at bound."""
from __future__ import annotations

import argparse
import json
import random
import signal
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

from . import theories as th
from .constructions import ShrinkError, more_general_poset, shrink_general, verify_descending_chain
from .diophantine import hilbert_basis, min_solutions_inhomogeneous, parse_system
from .errors import Refusal, Undecided
from .monoidal import (check_restrictive_window, nat_preorder, nat_window, poly_preorder, poly_window,
                       subst_to_matrix, term_to_vector, words_preorder, words_window)
from .preorder import ALL, decide_instance, equivalent, parse_scope
from .problemfile import (ParseError, load_problem_file, load_substitution_file, parse_chain,
                          parse_theory_name)
from .terms import TermError, fresh_names, parse_term
from .unify import UnificationProblem, probe_type, sigma_z_family, unify_theory

EXIT_OK, EXIT_ERROR, EXIT_PARSE, EXIT_REFUSAL, EXIT_UNDECIDED = 0, 1, 2, 3, 4


@dataclass
class Report:
    verb: str
    theory: str | None
    bounds: dict[str, Any] = field(default_factory=dict)
    results: dict[str, Any] = field(default_factory=dict)
    caveats: list[str] = field(default_factory=list)

    def as_dict(self) -> dict:
        return {"verb": self.verb, "theory": self.theory, "bounds": self.bounds,
                "results": self.results, "caveats": self.caveats}


def emit_report(r: Report, mode: str = "table") -> str:
    if mode == "json":
        return json.dumps(r.as_dict(), indent=2, sort_keys=True, ensure_ascii=False)
    lines = [f"verb: {r.verb}"]
    if r.theory is not None:
        lines.append(f"theory: {r.theory}")
    for k, v in r.bounds.items():
        lines.append(f"bound {k}: {v}")
    for k, v in r.results.items():
        if isinstance(v, list):
            lines.append(f"{k}: ({len(v)})")
            lines.extend(f"  {_flat(x)}" for x in v)
        elif isinstance(v, dict):
            lines.append(f"{k}:")
            lines.extend(f"  {a}: {_flat(b)}" for a, b in v.items())
        else:
            lines.append(f"{k}: {_flat(v)}")
    lines.extend(f"caveat: {c}" for c in r.caveats)
    return "\n".join(lines)


def _flat(v: Any) -> str:
    if isinstance(v, (dict, list)):
        return json.dumps(v, sort_keys=True, ensure_ascii=False)
    if isinstance(v, bool):
        return "true" if v else "false"
    return str(v)


# ---------------------------------------------------------------- verbs

def _theory(a) -> th.TheoryId:
    if a.theory is None:
        raise ParseError("--theory is required")
    return parse_theory_name(a.theory)


def _term(text: str, tid: th.TheoryId):
    try:
        return parse_term(text, th.signature(tid))
    except TermError as exc:
        raise ParseError(str(exc)) from None


def _basis(text: str) -> list[str]:
    return [v.strip() for v in text.split(",") if v.strip()]


def cmd_eq(a) -> Report:
    tid = _theory(a)
    s, t = _term(a.lhs, tid), _term(a.rhs, tid)
    return Report("eq", str(tid), results={"equal": th.eq_modulo(tid, s, t),
                                           "lhs_nf": str(th.normal_form(tid, s)),
                                           "rhs_nf": str(th.normal_form(tid, t))})


def cmd_normalize(a) -> Report:
    tid = _theory(a)
    return Report("normalize", str(tid), results={"normal_form": str(th.normal_form(tid, _term(a.term, tid)))})


def _problem(a) -> UnificationProblem:
    return load_problem_file(a.problem, parse_theory_name(a.theory) if a.theory else None)


def cmd_unify(a) -> Report:
    gamma = _problem(a)
    us = unify_theory(gamma)
    r = Report("unify", str(gamma.theory), bounds=dict(us.bounds),
               results={"problem": str(gamma), "status": us.status, "minimal": us.minimal,
                        "unifiers": [str(s) for s in us]})
    if us.status != "complete":
        r.caveats.append(f"completeness status: {us.status}")
    return r


def cmd_compare(a) -> Report:
    tid = _theory(a)
    sigma = load_substitution_file(a.sigma, tid)
    theta = load_substitution_file(a.theta, tid)
    scope = parse_scope(a.scope, sigma.dom | theta.dom)
    ok, w = decide_instance(tid, sigma, theta, scope)
    return Report("compare", str(tid), results={"scope": str(scope), "sigma": str(sigma), "theta": str(theta),
                                                "instance": ok, "witness": str(w.lam) if w else None})


def cmd_probe(a) -> Report:
    gamma = _problem(a)
    rep = probe_type(gamma, a.fresh, a.depth)
    d = rep.as_dict()
    return Report("probe", rep.theory, bounds={"fresh": a.fresh, "depth": a.depth},
                  results={"restricted": d["restricted"], "unrestricted": d["unrestricted"],
                           "completeness_set_size": None if d["ce_members"] is None else len(d["ce_members"]),
                           "completeness_set_members": d["ce_members"]},
                  caveats=list(rep.caveats))


def cmd_sigma_z(a) -> Report:
    gamma = _problem(a)
    us = unify_theory(gamma)
    if len(us) != 1:
        raise Refusal(f"sigma-z needs a single most general unifier; {gamma.theory} gave {len(us)}")
    sigma = us.unifiers[0]
    X = gamma.vars
    outside = sorted(sigma.vran - X)
    if not outside:
        raise Refusal("the unifier has no range variable outside Var(Γ)")
    x0 = outside[0]
    zs = [x0] + fresh_names(a.count - 1, X | sigma.dom | sigma.vran, prefix="z")
    fam = sigma_z_family(sigma, x0, zs, X)
    restricted = parse_scope("restricted", X)
    pairs = [(i, j) for i in range(len(fam)) for j in range(i + 1, len(fam))]
    incomparable = all(not decide_instance(gamma.theory, fam[i], fam[j], ALL)[0]
                       and not decide_instance(gamma.theory, fam[j], fam[i], ALL)[0] for i, j in pairs)
    equiv = all(equivalent(gamma.theory, fam[i], fam[j], restricted) for i, j in pairs)
    return Report("sigma-z", str(gamma.theory), bounds={"count": a.count},
                  results={"x0": x0, "z": zs, "family": [str(s) for s in fam], "pairs": len(pairs),
                           "unrestricted_incomparable": incomparable, "restricted_equivalent": equiv})


def cmd_hilbert(a) -> Report:
    try:
        sys_ = parse_system(Path(a.system).read_text(encoding="utf-8"))
    except ValueError as exc:
        raise ParseError(str(exc)) from None
    res: dict[str, Any] = {"unknowns": list(sys_.unknowns)}
    if sys_.constants is None:
        res["basis"] = [list(v) for v in hilbert_basis(sys_)]
    else:
        mins, hb = min_solutions_inhomogeneous(sys_)
        res["minimal_solutions"] = [list(v) for v in sorted(mins)]
        res["basis"] = [list(v) for v in hb]
    res["size"] = len(res["basis"])
    return Report("hilbert", None, results=res)


def cmd_shrink(a) -> Report:
    tid = _theory(a)
    sigma = load_substitution_file(a.sigma, tid)
    theta = load_substitution_file(a.theta, tid)
    if a.lam:
        lam = load_substitution_file(a.lam, tid)
    else:
        ok, w = decide_instance(tid, sigma, theta, ALL)
        if not ok:
            raise Refusal("σ is not an unrestricted instance-generalization of θ; nothing to shrink")
        lam = w.lam
    c = shrink_general(tid, sigma, theta, lam)
    return Report("shrink", str(tid), results={"sigma": str(sigma), "theta": str(theta), "lambda": str(lam),
                                               "sigma_prime": str(c.sigma_prime), "forward": str(c.forward),
                                               "backward": str(c.backward), "permutation": str(c.permutation.as_subst()),
                                               "collapsed": sorted(c.collapsed)})


def cmd_poset(a) -> Report:
    tid = _theory(a)
    theta = load_substitution_file(a.theta, tid)
    rep = more_general_poset(tid, theta, a.depth)
    return Report("poset", str(tid), bounds={"depth": rep.depth, "candidates": rep.candidates},
                  results={"theta": str(theta), "classes": [str(s) for s in rep.classes],
                           "edges": [list(e) for e in rep.edges], "minimal": list(rep.minimal),
                           "class_count": len(rep.classes),
                           "every_class_above_minimal": rep.every_class_above_minimal()},
                  caveats=list(rep.caveats))


def cmd_chain(a) -> Report:
    tid = _theory(a)
    chain = parse_chain(Path(a.file).read_text(encoding="utf-8"), tid)
    rep = verify_descending_chain(tid, chain)
    return Report("chain", str(tid), results={"valid": rep.valid, "links": list(rep.links),
                                              "first_failure": rep.first_failure},
                  caveats=[rep.direction])


def cmd_vector(a) -> Report:
    tid = _theory(a)
    basis = _basis(a.basis)
    v = term_to_vector(tid, _term(a.term, tid), basis)
    return Report("vector", str(tid), results={"basis": basis, "semiring": repr(v.semiring), "vector": str(v)})


def cmd_matrix(a) -> Report:
    tid = _theory(a)
    basis = _basis(a.basis)
    sigma = load_substitution_file(a.sigma, tid)
    M = subst_to_matrix(tid, sigma, basis, basis)
    return Report("matrix", str(tid), results={"basis": basis, "semiring": repr(M.semiring),
                                               "rows": str(M).splitlines()})


def cmd_restrictive_check(a) -> Report:
    name = a.semiring.strip().lower()
    n = a.window
    if name == "nat":
        pre, sample, how = nat_preorder(), nat_window(n), f"0..{n}"
    elif name.startswith("words:"):
        k = int(name.split(":", 1)[1])
        letters = [f"r{i}" for i in range(1, k + 1)]
        pre, sample = words_preorder(letters), words_window(letters, n, a.sample, a.seed)
        how = f"{a.sample} languages with words of length ≤ {n} (seed {a.seed})"
    elif name.startswith("poly:"):
        k = int(name.split(":", 1)[1])
        pre, sample = poly_preorder(k), poly_window(k, n, a.sample, a.seed)
        how = f"{a.sample} polynomials with exponents and coefficients ≤ {n} (seed {a.seed})"
    else:
        raise ParseError(f"unknown semiring {a.semiring!r}")
    rep = check_restrictive_window(pre, sample)
    return Report("restrictive-check", None, bounds={"window": n, "sample": how},
                  results={"semiring": a.semiring, "preorder": rep.label, "triples": rep.triples,
                           "violations": [repr(v) for v in rep.violations], "ok": rep.ok,
                           "largest_below_set": max(rep.below_sizes, default=0)},
                  caveats=["a clean window is evidence only; the conditions quantify over the whole semiring"])


VERBS: dict[str, Callable] = {
    "eq": cmd_eq, "normalize": cmd_normalize, "unify": cmd_unify, "compare": cmd_compare,
    "probe": cmd_probe, "sigma-z": cmd_sigma_z, "hilbert": cmd_hilbert, "shrink": cmd_shrink,
    "poset": cmd_poset, "chain": cmd_chain, "vector": cmd_vector, "matrix": cmd_matrix,
    "restrictive-check": cmd_restrictive_check,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit a JSON report")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized commands")
    common.add_argument("--timeout", type=float, default=None, help="wall-clock limit in seconds")
    common.add_argument("--theory", help="theory name, e.g. acui, fl0:2, el:r,s")

    p = argparse.ArgumentParser(prog="equnif", description="Unification modulo equational theories.")
    sub = p.add_subparsers(dest="verb", required=True)
    s = sub.add_parser("eq", parents=[common]); s.add_argument("lhs"); s.add_argument("rhs")
    s = sub.add_parser("normalize", parents=[common]); s.add_argument("term")
    s = sub.add_parser("unify", parents=[common]); s.add_argument("--problem", required=True)
    s = sub.add_parser("compare", parents=[common])
    s.add_argument("--scope", default="unrestricted")
    s.add_argument("--sigma", required=True); s.add_argument("--theta", required=True)
    s = sub.add_parser("probe", parents=[common]); s.add_argument("--problem", required=True)
    s.add_argument("--fresh", type=int, default=0); s.add_argument("--depth", type=int, default=1)
    s = sub.add_parser("sigma-z", parents=[common]); s.add_argument("--problem", required=True)
    s.add_argument("--count", type=int, default=5)
    s = sub.add_parser("hilbert", parents=[common]); s.add_argument("--system", required=True)
    s = sub.add_parser("shrink", parents=[common])
    s.add_argument("--sigma", required=True); s.add_argument("--theta", required=True)
    s.add_argument("--lam", help="witness file; searched when omitted")
    s = sub.add_parser("poset", parents=[common]); s.add_argument("--theta", required=True)
    s.add_argument("--depth", type=int, default=None)
    s = sub.add_parser("chain", parents=[common]); s.add_argument("--file", required=True)
    s = sub.add_parser("vector", parents=[common]); s.add_argument("--term", required=True)
    s.add_argument("--basis", required=True)
    s = sub.add_parser("matrix", parents=[common]); s.add_argument("--sigma", required=True)
    s.add_argument("--basis", required=True)
    s = sub.add_parser("restrictive-check", parents=[common]); s.add_argument("--semiring", required=True)
    s.add_argument("--window", type=int, default=3); s.add_argument("--sample", type=int, default=24)
    return p


class _Timeout(Exception):
    pass


def _alarm(signum, frame):
    raise _Timeout()


def run(argv: list[str] | None = None) -> tuple[int, str]:
    """Run one command and return (exit status, output text)."""
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_PARSE if exc.code else EXIT_OK), ""
    random.seed(a.seed)
    mode = "json" if a.json else "table"
    use_alarm = a.timeout is not None and hasattr(signal, "SIGALRM")
    if use_alarm:
        signal.signal(signal.SIGALRM, _alarm)
        signal.setitimer(signal.ITIMER_REAL, a.timeout)
    try:
        report = VERBS[a.verb](a)
        return EXIT_OK, emit_report(report, mode)
    except (ParseError, TermError, OSError) as exc:
        return EXIT_PARSE, f"parse error: {exc}"
    except Refusal as exc:
        return EXIT_REFUSAL, f"refused: {exc}"
    except Undecided as exc:
        return EXIT_UNDECIDED, f"undecided: {exc}"
    except _Timeout:
        return EXIT_UNDECIDED, f"undecided: timeout after {a.timeout} s"
    except (ValueError, ShrinkError) as exc:
        return EXIT_ERROR, f"error: {exc}"
    finally:
        if use_alarm:
            signal.setitimer(signal.ITIMER_REAL, 0)


def main(argv: list[str] | None = None) -> int:
    code, out = run(argv)
    if out:
        print(out, file=sys.stdout if code == EXIT_OK else sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())

import json

import pytest

from equnif import cli
from equnif.problemfile import ParseError, parse_chain, parse_problem, parse_substitution
from equnif import theories as th


@pytest.fixture
def files(tmp_path):
    data = {
        "acu.prob": "theory: acu\nf(x1,f(x2,x2)) = f(y,y)\n",
        "acui.prob": "theory: acui\n# comment\nf(x,y) = f(u,u)\n",
        "comm.prob": "theory: c\nf(x,y) = f(a,b)\n",
        "bad.prob": "theory: ac\ng(x) = x\n",
        "fs.sub": "x := y\ny := f(y)\n",
        "ft.sub": "x := g(y)\n",
        "theta.sub": "x := f(y,z)\n",
        "chain.txt": "x := f(y,z)\n---\n\n",
        "l3.sys": "3y = x1 + 2x2 + 3x3\n",
        "sig.sub": "x1 := x2\nx2 := f(x1,x1)\n",
    }
    for name, text in data.items():
        (tmp_path / name).write_text(text)
    return {k: str(tmp_path / k) for k in data}


def run_json(*argv):
    code, out = cli.run([*argv, "--json"])
    assert code == 0, out
    return json.loads(out)


def test_eq_and_normalize():
    r = run_json("eq", "f(x,y)", "f(y,x)", "--theory", "c")
    assert r["verb"] == "eq" and r["results"]["equal"] is True
    assert run_json("normalize", "f(x,x)", "--theory", "acui")["results"]["normal_form"] == "x"
    assert run_json("eq", "f(x,y)", "f(y,x)", "--theory", "a")["results"]["equal"] is False


def test_unify(files):
    r = run_json("unify", "--problem", files["acui.prob"])
    assert r["results"]["status"] == "complete" and len(r["results"]["unifiers"]) == 1
    assert run_json("unify", "--problem", files["comm.prob"])["results"]["unifiers"]


def test_compare_and_shrink(files):
    r = run_json("compare", "--theory", "fg", "--sigma", files["fs.sub"], "--theta", files["ft.sub"])
    assert r["results"]["instance"] is True and r["results"]["witness"] == "{y:=g(y)}"
    s = run_json("shrink", "--theory", "fg", "--sigma", files["fs.sub"], "--theta", files["ft.sub"])
    assert s["results"]["sigma_prime"] == "{x:=y,y:=f(y)}"


def test_probe_sigma_z_hilbert(files):
    p = run_json("probe", "--problem", files["comm.prob"], "--fresh", "1")
    assert p["results"]["restricted"]["minimal_classes"] == 2
    z = run_json("sigma-z", "--problem", files["acu.prob"], "--count", "3")
    assert z["results"]["pairs"] == 3
    assert z["results"]["restricted_equivalent"] and z["results"]["unrestricted_incomparable"]
    h = run_json("hilbert", "--system", files["l3.sys"])
    assert h["results"]["size"] == 4 and [1, 3, 0, 0] in h["results"]["basis"]


def test_poset_chain(files):
    p = run_json("poset", "--theory", "acui", "--theta", files["theta.sub"])
    assert p["results"]["every_class_above_minimal"] and p["results"]["minimal"] == [0]
    c = run_json("chain", "--theory", "acui", "--file", files["chain.txt"])
    assert c["results"]["valid"] and c["results"]["links"] == ["strict"]


def test_vector_matrix_restrictive(files):
    v = run_json("vector", "--theory", "acu", "--term", "f(x1,f(x2,x2))", "--basis", "x1,x2")
    assert v["results"]["vector"] == "(1, 2)"
    m = run_json("matrix", "--theory", "acu", "--sigma", files["sig.sub"], "--basis", "x1,x2")
    assert "(0, 1)" in json.dumps(m["results"]) and "(2, 0)" in json.dumps(m["results"])
    r = run_json("restrictive-check", "--semiring", "nat", "--window", "5")
    assert r["results"]["ok"] and r["results"]["triples"] == 216


def test_exit_codes(files):
    assert cli.run(["unify", "--problem", files["bad.prob"]])[0] == cli.EXIT_PARSE
    assert cli.run(["unify", "--problem", "/nonexistent/file"])[0] == cli.EXIT_PARSE
    assert cli.run(["bogus-verb"])[0] == cli.EXIT_PARSE
    assert cli.run(["vector", "--theory", "ac", "--term", "x1", "--basis", "x1"])[0] == cli.EXIT_REFUSAL
    assert cli.run(["vector", "--theory", "acu", "--term", "y", "--basis", "x1"])[0] == cli.EXIT_ERROR
    assert cli.run(["unify", "--problem", files["acu.prob"], "--theory", "acui"])[0] == cli.EXIT_PARSE


def test_table_mode_and_determinism(files):
    code, out = cli.run(["hilbert", "--system", files["l3.sys"]])
    assert code == 0 and "hilbert" in out
    a = cli.run(["unify", "--problem", files["acui.prob"], "--json"])
    b = cli.run(["unify", "--problem", files["acui.prob"], "--json"])
    assert a == b


def test_main_returns_code(files, capsys):
    assert cli.main(["eq", "x", "x", "--theory", "acu"]) == 0
    assert "equal" in capsys.readouterr().out


def test_problem_files():
    p = parse_problem("theory: acu\n\n# nothing\n")
    assert p.equations == ()
    with pytest.raises(ParseError):
        parse_problem("theory: ac\ng(x) = x\n")
    with pytest.raises(ParseError):
        parse_problem("f(x,y) = x\n")
    with pytest.raises(ParseError):
        parse_problem("theory: c\nf(x,y) = f(y,x) = x\n")
    assert parse_problem("f(x,y) = x", theory=th.C).theory == th.C
    with pytest.raises(ParseError):
        parse_substitution("x := f(y,y)\nx := y", th.C)
    with pytest.raises(ParseError):
        parse_substitution("0 := y", th.ACU)
    assert len(parse_chain("x := y\n---\ny := x\n", th.EMPTY)) == 2

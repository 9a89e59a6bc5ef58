import io
import json
import os
import subprocess
import sys

import jsonschema
import pytest

from modsym.cli import EXIT_DOMAIN, EXIT_OK, EXIT_USAGE, SCHEMA_PATH, main

SCHEMA = json.loads(SCHEMA_PATH.read_text())


def run(*argv):
    out, err = io.StringIO(), io.StringIO()
    code = main(list(argv), stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


def validate(doc, kind):
    jsonschema.validate(doc, {"$ref": f"#/$defs/{kind}", "$defs": SCHEMA["$defs"]})


# --------------------------------------------------------------- examples


def test_space_example():
    code, out, _ = run("space", "--level", "11", "--weight", "2", "--field", "q")
    assert code == EXIT_OK
    assert json.loads(out)["dim_cuspidal"] == "2"


def test_qexp_example():
    code, out, _ = run("qexp", "--level", "1", "--weight", "12", "--prec", "3", "--field", "q")
    assert code == EXIT_OK
    assert json.loads(out) == [["1", "-24", "252"]]


def test_parity_exit_code():
    code, out, err = run("space", "--level", "11", "--weight", "3", "--field", "q")
    assert code == EXIT_DOMAIN and out == ""
    assert "chi(-1)" in err and err.count("\n") == 1


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["space", "--level", "11"],
        ["space", "--level", "11", "--weight", "2", "--field", "r"],
        ["space", "--level", "11", "--weight", "2", "--field", "fp:6"],
        ["space", "--level", "11", "--weight", "2", "--char", "5"],
        ["hecke", "--level", "11", "--weight", "2", "--op", "0"],
        ["qexp", "--level", "11", "--weight", "2", "--prec", "0"],
        ["bogus"],
        ["oracle", "eta", "--exps", "1-24", "--prec", "3"],
        ["space", "--level", "11", "--weight", "2", "--threads", "0"],
    ],
)
def test_usage_errors(argv):
    code, out, err = run(*argv)
    assert code == EXIT_USAGE and out == ""
    assert err.startswith("modsym: usage error") and err.count("\n") == 1


@pytest.mark.parametrize(
    "argv",
    [
        ["space", "--level", "11", "--weight", "2", "--field", "fp:3"],
        ["oracle", "eta", "--exps", "1:1", "--prec", "3"],
        ["oracle", "dim", "--level", "11", "--weight", "3"],
    ],
)
def test_domain_errors(argv):
    assert run(*argv)[0] == EXIT_DOMAIN


# --------------------------------------------------------- schema checks

DOCS = [
    (["p1", "--level", "6"], "p1"),
    (["space", "--level", "13", "--weight", "2", "--char", "2", "--field", "fp:13"], "space"),
    (["hecke", "--level", "11", "--weight", "2", "--op", "2"], "hecke"),
    (["hecke", "--level", "11", "--weight", "2", "--op", "3", "--sub", "plus"], "hecke"),
    (["qexp", "--level", "11", "--weight", "2", "--prec", "10"], "qexp"),
    (["qexp", "--level", "11", "--weight", "2", "--prec", "7", "--field", "fp:5"], "qexp"),
    (["eigenforms", "--level", "23", "--weight", "2", "--prec", "5"], "eigenforms"),
    (["oracle", "eta", "--exps", "1:2,11:2", "--prec", "10"], "oracle_eta"),
    (["oracle", "dim", "--level", "23", "--weight", "2"], "oracle_dim"),
]


@pytest.mark.parametrize("argv,kind", DOCS, ids=[d[1] + str(i) for i, d in enumerate(DOCS)])
def test_json_matches_schema(argv, kind):
    code, out, _ = run(*argv)
    assert code == EXIT_OK
    validate(json.loads(out), kind)


def _flatten(x):
    if isinstance(x, list):
        return [y for e in x for y in _flatten(e)]
    if isinstance(x, dict):
        return [y for k in sorted(x) for y in _flatten(x[k])]
    return [x]


def _table_values(doc, kind):
    if kind == "hecke":
        return doc["matrix"]
    if kind == "eigenforms":
        return [[d["degree"], d["an"]] for d in doc]
    if kind == "p1":
        return doc["elements"]
    return doc


@pytest.mark.parametrize("argv,kind", DOCS, ids=[d[1] + str(i) for i, d in enumerate(DOCS)])
def test_table_agrees_with_json(argv, kind):
    _, js, _ = run(*argv)
    _, table, _ = run(*argv, "--format", "table")
    cells = table.split()
    for v in _flatten(_table_values(json.loads(js), kind)):
        assert v in cells


def test_qexp_values_agree_with_oracle_cli():
    _, q, _ = run("qexp", "--level", "11", "--weight", "2", "--prec", "10")
    _, e, _ = run("oracle", "eta", "--exps", "1:2,11:2", "--prec", "10")
    assert json.loads(q)[0] == json.loads(e)[1:]


# ---------------------------------------------------------- determinism


def test_identical_invocations_are_byte_identical():
    argv = ["eigenforms", "--level", "37", "--weight", "2", "--prec", "8", "--seed", "7"]
    assert run(*argv)[1] == run(*argv)[1]
    argv = ["hecke", "--level", "23", "--weight", "2", "--op", "6", "--threads", "2"]
    assert run(*argv)[1] == run(*argv[:-2])[1]


def test_module_entry_point_and_seed_env():
    env = dict(os.environ, MODSYM_SEED="3")
    cmd = [sys.executable, "-m", "modsym", "qexp", "--level", "1", "--weight", "12", "--prec", "3"]
    a = subprocess.run(cmd, capture_output=True, text=True, env=env)
    b = subprocess.run(cmd, capture_output=True, text=True, env=env)
    assert a.returncode == 0 and a.stdout == b.stdout
    assert json.loads(a.stdout) == [["1", "-24", "252"]]

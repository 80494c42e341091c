import json
import os
import subprocess
import sys
from pathlib import Path

import pytest
from jsonschema import Draft202012Validator
from referencing import Registry, Resource

SCHEMAS = Path(__file__).resolve().parents[1] / "schemas"
REGISTRY = Registry().with_resources(
    (json.loads(p.read_text())["$id"], Resource.from_contents(json.loads(p.read_text())))
    for p in SCHEMAS.glob("*.json")
)
BY_TAG = {
    "nilcat.run-report/1": "run-report", "nilcat.eval/1": "eval", "nilcat.group/1": "group",
    "nilcat.pf/1": "pf", "nilcat.characterize/1": "characterize", "nilcat.fo/1": "fo",
    "nilcat.cocycle/1": "cocycle-report", "nilcat.ring/1": "ring-report",
}

MOD2 = {"kind": "modular", "m": 2}
MOD3 = {"kind": "modular", "m": 3}
XY2 = {"ring": MOD2, "n": 2, "family": [{"components": [{"psi": [], "product": "1"}]},
                                        {"components": [{"kind": "zero"}]}]}


def run(*args, env=None, expect=0):
    full_env = {**os.environ, **(env or {})}
    proc = subprocess.run([sys.executable, "-m", "nilcat", *args], capture_output=True, text=True, env=full_env)
    assert proc.returncode == expect, proc.stderr + proc.stdout
    return proc


def run_json(*args, expect=0, env=None):
    proc = run(*args, expect=expect, env=env)
    data = json.loads(proc.stdout)
    schema = json.loads((SCHEMAS / f"{BY_TAG[data['schema']]}.v1.json").read_text())
    Draft202012Validator(schema, registry=REGISTRY).validate(data)
    return data


def dump(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(json.dumps(obj))
    return str(p)


def test_schema_files_are_valid():
    for p in SCHEMAS.glob("*.json"):
        Draft202012Validator.check_schema(json.loads(p.read_text()))


def test_run_suite_pf_mod3():
    data = run_json("run-suite", "pf", "--ring", "mod3", "--n", "2")
    pf = data["suites"]["pf"]
    assert data["ok"] and pf["counts"]["pairs"] == 3 and pf["checks"]["ring-cyclic"]
    assert pf["checks"]["ring-isomorphic"]


def test_run_suite_all_mod2():
    data = run_json("run-suite", "all", "--ring", "mod2", "--n", "2")
    assert data["ok"]
    assert sorted(data["suites"]) == ["axioms", "basen2", "characterize", "cohomology", "fo", "pf"]


def test_run_suite_unknown_name():
    proc = run("run-suite", "nonsense", expect=2)
    assert "usage" in proc.stderr and "unknown suite" in proc.stderr


def test_run_suite_malformed_config(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    run("run-suite", "axioms", "--config", str(bad), expect=2)
    run("run-suite", "axioms", "--config", dump(tmp_path, "list.json", [1, 2]), expect=2)


def test_run_suite_config_family(tmp_path):
    cfg = dump(tmp_path, "cfg.json", {"ring": MOD3, "n": 2,
                                      "family": [{"components": [{"kind": "carry"}]}, {"components": []}]})
    data = run_json("run-suite", "characterize", "--config", cfg)
    assert data["ok"] and data["inputs"]["family"]


def test_reports_are_byte_stable():
    a = run("run-suite", "cohomology", "--ring", "mod3", "--seed", "7").stdout
    b = run("run-suite", "cohomology", "--ring", "mod3", "--seed", "7").stdout
    assert a == b


def test_jobs_do_not_change_the_report():
    a = run("run-suite", "all", "--ring", "mod2").stdout
    b = run("run-suite", "all", "--ring", "mod2", "--jobs", "3").stdout
    assert a == b


def test_timings_are_opt_in():
    data = run_json("run-suite", "axioms", "--ring", "mod2", "--timings")
    assert "seconds" in data["suites"]["axioms"]
    assert "seconds" not in run_json("run-suite", "axioms", "--ring", "mod2")["suites"]["axioms"]


def test_run_suite_over_integers():
    data = run_json("run-suite", "axioms", "--ring", "Z")
    assert data["ok"] and data["suites"]["axioms"]["counts"]["N-samples"] == 10000


def test_output_file(tmp_path):
    out = tmp_path / "report.json"
    proc = run("run-suite", "axioms", "-o", str(out))
    assert proc.stdout == "" and json.loads(out.read_text())["ok"]


@pytest.mark.parametrize("word,alphas,gammas", [
    ("g1 * g2 * g1^-1 * g2^-1", ["0", "0"], ["1"]),
    ("", ["0", "0"], ["0"]),
    ("[g2, g1]", ["0", "0"], ["1"]),
    ("g1^3 * g12", ["1", "0"], ["1"]),
])
def test_eval_word_mod2(tmp_path, word, alphas, gammas):
    path = dump(tmp_path, "expr.json", {"group": {"ring": MOD2, "n": 2}, "word": word})
    data = run_json("eval", path)
    assert data["result"] == {"alphas": alphas, "gammas": gammas}


def test_eval_word_over_z():
    data = run_json("eval", json.dumps({"group": {"ring": {"kind": "integers"}, "n": 3}, "word": "[g2, g3]^-5 * g1_3"}))
    assert data["result"] == {"alphas": ["0", "0", "0"], "gammas": ["0", "1", "-5"]}


def test_eval_unknown_generator(tmp_path):
    path = dump(tmp_path, "expr.json", {"group": {"ring": MOD2, "n": 2}, "word": "g5 * g1"})
    proc = run("eval", path, expect=2)
    assert "g5" in proc.stderr


def test_eval_formula():
    expr = {"model": {"group": XY2}, "formula": "forall x, y ([x, y] * [x, y] = 1)"}
    assert run_json("eval", json.dumps(expr))["value"] is True


def test_eval_malformed():
    run("eval", json.dumps({"nothing": 1}), expect=2)
    run("eval", json.dumps({"model": {"group": XY2}, "formula": "forall x ("}), expect=2)


def test_ring_commands():
    assert run_json("ring", "mul", "2", "2", "--ring", "mod3")["result"] == "1"
    assert run_json("ring", "add", "2", "3", "--ring", "Z")["result"] == "5"
    assert run_json("ring", "elements", "--ring", "mod4")["result"] == ["0", "1", "2", "3"]
    assert run_json("ring", "axioms", "--ring", "mod6")["ok"]
    run("ring", "add", "1", "--ring", "mod3", expect=2)
    run("ring", "add", "1", "1", "--ring", "mod1", expect=2)


def test_n2n_commands():
    x = json.dumps({"alphas": ["1", "0"], "gammas": ["0"]})
    y = json.dumps({"alphas": ["0", "1"], "gammas": ["0"]})
    assert run_json("n2n", "mul", "--ring", "mod2", "--x", x, "--y", y)["result"] == \
        {"alphas": ["1", "1"], "gammas": ["1"]}
    z = json.dumps({"alphas": ["2", "3"], "gammas": ["5"]})
    assert run_json("n2n", "inv", "--ring", "Z", "--x", z)["result"] == {"alphas": ["-2", "-3"], "gammas": ["1"]}
    assert run_json("n2n", "comm", "--ring", "mod2", "--x", x, "--y", y)["result"]["gammas"] == ["1"]
    nf = run_json("n2n", "nf", "--ring", "mod2", "--x", json.dumps({"alphas": ["1", "1"], "gammas": ["1"]}))
    assert nf["result"]["alphas_desc"] == ["1", "1"] and nf["result"]["gammas"] == ["1"]
    assert len(run_json("n2n", "center", "--ring", "mod2")["result"]) == 2
    run("n2n", "mul", "--ring", "mod2", "--x", x, expect=2)


def test_qn_commands(tmp_path):
    spec = dump(tmp_path, "spec.json", XY2)
    g1 = json.dumps({"alphas": ["1", "0"], "gammas": ["0"]})
    assert run_json("qn", "mul", "--spec", spec, "--x", g1, "--y", g1)["result"] == \
        {"alphas": ["0", "0"], "gammas": ["1"]}
    assert run_json("qn", "inv", "--spec", spec, "--x", g1)["result"] == {"alphas": ["1", "0"], "gammas": ["1"]}
    assert run_json("qn", "relations", "--spec", spec)["result"]["ok"]
    assert run_json("qn", "bigcocycle", "--spec", spec)["result"]["cocycle"]


def test_qn_rejects_non_cocycle(tmp_path):
    bad = {"ring": MOD3, "n": 2, "family": [{"table": [[["0"], ["0"], ["0"]], [["0"], ["1"], ["0"]],
                                                        [["0"], ["0"], ["0"]]]}, {"components": []}]}
    proc = run("qn", "relations", "--spec", dump(tmp_path, "bad.json", bad), expect=2)
    assert "MustVerifyCocycle" in proc.stderr


def test_cocycle_commands(tmp_path):
    two = {"kind": "additive", "ring": MOD2}
    xy = dump(tmp_path, "xy.json", {"domain": two, "codomain": two, "table": [["0", "0"], ["0", "1"]]})
    zero = dump(tmp_path, "zero.json", {"domain": two, "codomain": two, "table": [["0", "0"], ["0", "0"]]})
    c = run_json("cocycle", "check", "--input", xy)
    assert c["cocycle"] and c["symmetric"] and c["exhaustive"]
    assert run_json("cocycle", "coboundary", "--input", xy)["coboundary"] is False
    assert run_json("cocycle", "compare", "--input", xy, "--other", zero)["equivalent"] is False
    ext = run_json("cocycle", "extension", "--input", xy)
    assert ext["order"] == 4 and ext["max_element_order"] == 4 and ext["abelian"]
    bad = dump(tmp_path, "bad.json", {"domain": two, "codomain": two, "table": [["0", "1"], ["0", "1"]]})
    run_json("cocycle", "check", "--input", bad, expect=1)


def test_pf_commands(tmp_path):
    rec = run_json("pf", "reconstruct", "--ring", "mod3")
    assert rec["size"] == 3 and rec["cyclic"] and rec["eta_is_ring_iso"] and rec["width"] == 1
    prof = run_json("pf", "profile", "--ring", "mod2", "--n", "3")
    assert prof["csize"] == 2
    t = run_json("pf", "transport", "--spec", dump(tmp_path, "s.json", XY2))
    assert t["theta"] == [0, 1] and t["ring_iso"]


def test_pf_budget_env():
    proc = run("pf", "reconstruct", "--ring", "mod3", env={"NILCAT_BUDGET": "5"}, expect=2)
    assert "SearchInfeasible" in proc.stderr


def test_characterize_commands(tmp_path):
    spec = dump(tmp_path, "spec.json", XY2)
    rt = run_json("characterize", "roundtrip", "--input", spec)
    assert rt["ok"] and rt["extraction"]["is_isomorphism"]
    table = subprocess.run([sys.executable, "-c",
                            "import json; from nilcat import N2nGroup, IntegersMod;"
                            "G = N2nGroup(IntegersMod(3), 2); F = G.finite();"
                            "print(json.dumps({'table': F.table.tolist(), 'basis': G.basis_indices()}))"],
                           capture_output=True, text=True, check=True).stdout
    tpath = tmp_path / "table.json"
    tpath.write_text(table)
    chk = run_json("characterize", "check", "--input", str(tpath))
    assert chk["ok"] and chk["pf_basis"]["ok"]
    ext = run_json("characterize", "extract", "--input", str(tpath))
    assert ext["is_isomorphism"] and len(ext["witness"]) == 27
    obj = json.loads(table)
    obj["basis"] = [obj["basis"][0], obj["basis"][0]]
    tpath.write_text(json.dumps(obj))
    assert run_json("characterize", "check", "--input", str(tpath), expect=1)["ok"] is False
    run("characterize", "extract", "--input", str(tpath), expect=2)


def test_fo_commands(tmp_path):
    model = dump(tmp_path, "model.json", {"group": {"ring": MOD3, "n": 2},
                                          "params": {"h1": {"alphas": ["1", "0"], "gammas": ["0"]},
                                                     "h2": {"alphas": ["0", "1"], "gammas": ["0"]}}})
    d = run_json("fo", "define", "--model", model, "--formula", "[h1, x] = 1")
    assert d["size"] == 9
    d = run_json("fo", "define", "--model", model, "--formula", "phiHH(x)", "--definability")
    assert d["size"] == 3
    e = run_json("fo", "eval", "--model", model, "--formula", "exists y (x = [h1, y])", "--assign", "x=1")
    assert e["value"] is True
    proc = run("fo", "eval", "--model", model, "--formula", "x = = y", expect=2)
    assert "position" in proc.stderr


def test_help_and_missing_command():
    assert "run-suite" in run("--help").stdout
    run(expect=2)

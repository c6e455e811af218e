import csv
import io
import json
import subprocess
import sys

import pytest

from ncdiff.cli import build_algebra, emit, main, parse_spec, run, SpecError

DUAL = '{"preset":"dual_numbers"}'


def call(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse_spec_inline_and_file(tmp_path):
    assert parse_spec(DUAL) == {"preset": "dual_numbers"}
    p = tmp_path / "s.json"
    p.write_text('{"preset": "truncated_free", "params": [2, 2]}')
    A, resolved = build_algebra(parse_spec(str(p)))
    assert A.dim == 7 and not A.commutative
    assert resolved == {"preset": "truncated_free", "params": [2, 2], "scalars": "Q"}


def test_dual_spec():
    A, _ = build_algebra(parse_spec(DUAL))
    assert A.dim == 2 and A.commutative


def test_missing_unit_is_named():
    with pytest.raises(SpecError, match="'unit'"):
        build_algebra({"dim": 2, "structure_constants": []})


def test_parse_error_has_position():
    with pytest.raises(SpecError, match="line 1 column 2"):
        parse_spec("{oops")


def test_z_mode_rejects_fractions():
    spec = {"dim": 1, "unit": [1], "scalars": "Z", "structure_constants": [[0, 0, 0, 1, 2]]}
    with pytest.raises(SpecError, match="not an integer"):
        build_algebra(spec)


def test_explicit_spec_round_trips():
    spec = {"dim": 2, "labels": ["1", "e"], "unit": [1, 0],
            "structure_constants": [[0, 0, 0, 1], [0, 1, 1, 1], [1, 0, 1, 1], [1, 1, 0, 1, 4]]}
    A, resolved = build_algebra(spec)
    B, again = build_algebra(resolved)
    assert again == resolved
    assert A.structure_constants == B.structure_constants


def test_invalid_table_lists_violations(capsys):
    spec = json.dumps({"dim": 2, "unit": [0, 1], "structure_constants": [[0, 0, 1, 1], [1, 1, 1, 1]]})
    code, out, _ = call(capsys, "validate", "--spec", spec, "--format", "json")
    assert code == 1
    assert json.loads(out)["result"]["violations"]
    code, _, err = call(capsys, "filtration", "--spec", spec)
    assert code == 2
    assert "left_unit" in err


def test_filtration_nc_on_truncated_free(capsys):
    code, out, _ = call(capsys, "filtration", "--spec", '{"preset":"truncated_free","params":[2,2]}',
                        "--mode", "nc", "--nmax", "3", "--format", "json")
    assert code == 0
    rep = json.loads(out)
    dims = [lv["dim"] for lv in rep["result"]["levels"]]
    assert dims == sorted(dims) and len(dims) == 4


def test_compare_dual(capsys):
    code, out, _ = call(capsys, "compare", "--spec", DUAL, "--format", "json")
    assert code == 0
    res = json.loads(out)["result"]
    assert len(res["definitions"]) == 4
    assert all(p["equal"] for p in res["pairs"])


@pytest.mark.parametrize("spec", [DUAL, '{"preset":"upper_triangular","params":[2]}',
                                  '{"preset":"truncated_poly","params":[1,2]}'])
def test_multiplicative(capsys, spec):
    code, out, _ = call(capsys, "multiplicative", "--spec", spec, "--rmax", "3", "--format", "json")
    assert code == 0
    assert all(c["passed"] for c in json.loads(out)["result"]["checks"])


def test_json_is_deterministic(capsys):
    argv = ["report", "--spec", DUAL, "--format", "json", "--seed", "7"]
    first = call(capsys, *argv)[1]
    second = call(capsys, *argv)[1]
    assert first == second
    rep = json.loads(first)
    assert rep["seed"] == 7
    assert rep["spec"] == {"preset": "dual_numbers", "params": [], "scalars": "Q"}


def test_rationals_are_strings(capsys):
    _, out, _ = call(capsys, "filtration", "--spec", DUAL, "--bases", "--format", "json")
    basis = json.loads(out)["result"]["levels"][0]["basis"]
    assert all(isinstance(x, str) and "/" in x for row in basis for x in row)


def test_csv_one_row_per_level(capsys):
    _, out, _ = call(capsys, "filtration", "--spec", DUAL, "--format", "csv")
    rows = list(csv.DictReader(io.StringIO(out)))
    assert [r["dim"] for r in rows] == ["2", "3", "4", "4"]


def test_table_shows_stabilization(capsys):
    _, out, _ = call(capsys, "filtration", "--spec", DUAL)
    assert "stabilized at level 2" in out


def test_order_and_ad_test(capsys):
    op = "[[0,1],[0,0]]"
    code, out, _ = call(capsys, "order", "--spec", DUAL, "--op", op, "--format", "json")
    assert code == 0 and json.loads(out)["result"]["order"] == 2
    assert call(capsys, "ad-test", "--spec", DUAL, "--op", op, "--n", "1")[0] == 1
    assert call(capsys, "ad-test", "--spec", DUAL, "--op", op, "--n", "2")[0] == 0


def test_order_bad_shape(capsys):
    assert call(capsys, "order", "--spec", DUAL, "--op", "[1,2,3]")[0] == 2


def test_principal_parts(capsys):
    code, out, _ = call(capsys, "principal-parts", "--spec", DUAL, "--n", "1", "--format", "json")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["operator_dim"] == 3 and res["matches_filtration_level"]


def test_principal_parts_rejects_noncommutative(capsys):
    code, _, err = call(capsys, "principal-parts", "--spec", '{"preset":"matrix_algebra","params":[2]}', "--n", "1")
    assert code == 2 and "commutative" in err


def test_poly(capsys):
    code, out, _ = call(capsys, "poly", "--op", "tX^2", "--vars", "1", "--scalars", "Z",
                        "--apply", "X^3", "--format", "json")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["applied"] == "3*X" and res["naive"] is False


def test_poly_parse_error(capsys):
    code, _, err = call(capsys, "poly", "--op", "tX +")
    assert code == 2 and "^" in err


def test_free_codiagonal(capsys):
    code, out, _ = call(capsys, "free", "--check", "codiagonal", "--degree", "2", "--format", "json")
    assert code == 0
    assert json.loads(out)["result"]["codiagonal"]["passed"]


def test_free_multimorphism_arity_one(capsys):
    code, _, _ = call(capsys, "free", "--check", "multimorphism", "--arities", "1")
    assert code == 0


def test_free_multimorphism_arity_two_reports_witness(capsys):
    code, out, _ = call(capsys, "free", "--check", "multimorphism", "--format", "json")
    assert code == 1
    assert json.loads(out)["result"]["multimorphism"]["counterexample"]["arity"] == 2


def test_hs_check(capsys):
    code, out, _ = call(capsys, "hs-check", "--degree", "2", "--derivation", "x=y,y=0",
                        "--with-filtration", "--format", "json")
    res = json.loads(out)["result"]
    assert code == 0
    assert res["hs_check"]["passed"] and all(res["filtration"]["in_level"])


def test_usage_errors(capsys):
    assert call(capsys, "filtration")[0] == 2
    assert call(capsys, "filtration", "--spec", '{"preset":"nope"}')[0] == 2
    assert call(capsys, "filtration", "--spec", '{"preset":"matrix_algebra","params":[2]}', "--mode", "comm")[0] == 2
    assert call(capsys, "bogus")[0] == 2


def test_timing_is_opt_in():
    rep, _ = run(["filtration", "--spec", DUAL])
    assert "timing_seconds" not in rep
    rep, _ = run(["filtration", "--spec", DUAL, "--timing"])
    assert rep["timing_seconds"] >= 0


def test_emit_json_round_trips():
    rep, _ = run(["filtration", "--spec", DUAL, "--bases"])
    assert json.loads(emit(rep, "json")) == rep


def test_console_script_runs():
    proc = subprocess.run([sys.executable, "-m", "ncdiff.cli", "filtration", "--spec", DUAL, "--format", "csv"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.splitlines()[0] == "n,dim"

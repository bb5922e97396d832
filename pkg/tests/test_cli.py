import json
from importlib import resources

import jsonschema
import pytest

from flatstat import cli


@pytest.fixture(scope="module")
def schema():
    return json.loads(resources.files("flatstat").joinpath("report.schema.json").read_text())


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def run_json(capsys, schema, *argv):
    code, out, err = run(capsys, *argv)
    doc = json.loads(out)
    jsonschema.validate(doc, schema)
    assert json.dumps(doc, sort_keys=True, indent=2) + "\n" == out
    return code, doc


def test_profile_mask(capsys, schema):
    code, doc = run_json(capsys, schema, "profile", "--n", "3", "--d", "1", "--mask", "0x03")
    assert code == 0
    assert doc["results"]["counts"] == [15, 12, 1]
    assert doc["results"]["fractions"][1] == {"num": "3", "den": "7", "decimal": "0.428571428571"}


def test_profile_construct(capsys, schema):
    code, doc = run_json(capsys, schema, "profile", "--n", "3", "--d", "2", "--construct", "hyperplane", "parity=0")
    assert doc["results"]["counts"] == [1, 0, 12, 0, 1]
    code, doc = run_json(
        capsys, schema, "profile", "--d", "2", "--construct", '{"kind": "hyperplane", "params": {"n": 3}}'
    )
    assert doc["results"]["counts"] == [1, 0, 12, 0, 1]


def test_profile_empty_and_points(capsys, schema):
    _, doc = run_json(capsys, schema, "profile", "--n", "4", "--d", "2", "--mask", "0")
    assert doc["results"]["counts"][0] == doc["results"]["total"] == 140
    # binary strings are written x_n ... x_1: "001" is the point with x_1 = 1
    _, doc = run_json(capsys, schema, "profile", "--n", "3", "--d", "1", "--points", "000", "001")
    assert doc["results"]["set_mask"] == "3"
    _, doc = run_json(capsys, schema, "profile", "--n", "3", "--d", "1", "--points", "100")
    assert doc["results"]["set_mask"] == "10"


def test_profile_subcubes_and_bruteforce(capsys, schema):
    _, doc = run_json(capsys, schema, "profile", "--n", "3", "--d", "2", "--family", "subcubes", "--construct", "sympoly", "d=2")
    assert doc["results"]["counts"] == [0, 3, 0, 3, 0]
    _, doc = run_json(capsys, schema, "profile", "--n", "3", "--d", "1", "--mask", "3", "--bruteforce")
    assert doc["results"]["counts"] == [15, 12, 1]


@pytest.mark.parametrize(
    "argv",
    [
        ["profile", "--n", "3", "--d", "1", "--mask", "zz"],
        ["profile", "--n", "3", "--d", "4", "--mask", "1"],
        ["profile", "--n", "3", "--d", "1"],
        ["profile", "--n", "3", "--d", "1", "--points", "0012"],
        ["profile", "--n", "3", "--d", "1", "--mask", "1ff"],
        ["profile", "--n", "4", "--d", "1", "--construct", "hyperplane", "n=3"],
        ["bounds", "--d", "3", "--s", "0"],
        ["bounds", "--d", "3", "--s", "8"],
        ["verify", "--n", "3", "--d", "2", "--claims", "bogus"],
        ["construct", "nonsense"],
        ["frobnicate"],
        ["bounds", "--d", "x", "--s", "1"],
    ],
)
def test_input_errors_exit_1(capsys, argv):
    code = None
    try:
        code = cli.main(argv)
    except SystemExit as exc:
        code = exc.code
    assert code == cli.EXIT_INPUT


def test_bounds_examples(capsys, schema):
    _, doc = run_json(capsys, schema, "bounds", "--d", "3", "--s", "4")
    assert doc["results"]["exact"]["num"] == "7" and doc["results"]["exact"]["den"] == "8"
    _, doc = run_json(capsys, schema, "bounds", "--d", "3", "--s", "2")
    res = doc["results"]
    assert res["lower"]["c(d,k)"]["value"]["num"] == "21"
    assert res["upper"]["flat_even_upper"]["value"] == {"num": "4", "den": "5", "decimal": "0.800000000000"}
    _, doc = run_json(capsys, schema, "bounds", "--d", "3", "--s", "3")
    assert doc["results"]["best_upper"]["num"] == "1" and doc["results"]["best_upper"]["den"] == "2"
    _, doc = run_json(capsys, schema, "bounds", "--d", "2", "--s", "2", "--n", "4", "--precision", "3")
    assert doc["results"]["exact"] == {"num": "4", "den": "5", "decimal": "0.800"}


def test_verify_exit_codes(capsys, schema):
    code, doc = run_json(capsys, schema, "verify", "--n", "3", "--d", "2", "--claims", "odd_bound")
    assert code == 0 and len(doc["results"]["claims"]) == 1
    code, doc = run_json(capsys, schema, "verify", "--n", "3", "--d", "2", "--corrupt")
    assert code == cli.EXIT_VIOLATION
    assert all(c["witness"] for c in doc["results"]["claims"] if c["status"] == "violated")


def test_verify_writes_report_file(tmp_path, capsys, schema):
    out = tmp_path / "report.json"
    code, text, _ = run(capsys, "verify", "--n", "3", "--d", "2", "--corrupt", "--out", str(out))
    assert code == 2 and text == ""
    jsonschema.validate(json.loads(out.read_text()), schema)


def test_search_cli(capsys, schema):
    code, doc = run_json(capsys, schema, "search", "--mode", "exhaustive", "--n", "4", "--d", "2", "--s", "2")
    assert code == 0
    assert doc["results"]["value"]["num"] == "4" and doc["results"]["value"]["den"] == "5"
    assert "6666" in doc["results"]["witnesses"] or "9669" in doc["results"]["witnesses"]
    code, _, err = run(capsys, "search", "--mode", "exhaustive", "--n", "6", "--d", "2", "--s", "2")
    assert code == cli.EXIT_CAP and "anneal" in err
    code, _, err = run(capsys, "search", "--mode", "exhaustive", "--n", "5", "--d", "2", "--s", "2")
    assert code == cli.EXIT_CAP


def test_search_anneal_reproducible(capsys):
    argv = ["search", "--n", "4", "--d", "2", "--s", "1", "--iterations", "500", "--seed", "3", "--restarts", "2"]
    _, a, _ = run(capsys, *argv)
    _, b, _ = run(capsys, *argv, "--threads", "4")
    assert a == b


def test_construct_cli(capsys, schema):
    code, doc = run_json(capsys, schema, "construct", "--kind", "sympoly", "--n", "6", "--d", "3")
    assert code == 0
    assert doc["results"]["cube_check"]["all_odd"]
    assert "000111" in doc["results"]["points"]
    code, out, _ = run(capsys, "construct", "hyperplane", "n=2", "--csv")
    assert out == "point\n00\n11\n"


def test_table_cli(capsys):
    code, out, _ = run(capsys, "table", "--d", "6")
    lines = out.splitlines()
    assert code == 0 and lines[0] == "d,s,k,best_lower,best_upper" and len(lines) == 64
    assert "\r" not in out
    rows = [line.split(",") for line in lines[1:]]
    assert rows[31][:3] == ["6", "32", "5"]


def test_csv_profile(capsys):
    code, out, _ = run(capsys, "profile", "--n", "3", "--d", "1", "--mask", "3", "--csv")
    assert out.splitlines() == ["s,count,fraction", "0,15,15/28", "1,12,3/7", "2,1,1/28"]


def test_rational_rendering():
    from fractions import Fraction

    assert cli.rational(Fraction(2, 3), 4) == {"num": "2", "den": "3", "decimal": "0.6667"}
    assert cli.rational(Fraction(-1, 8), 2) == {"num": "-1", "den": "8", "decimal": "-0.12"}
    assert cli.rational(Fraction(7), 0)["decimal"] == "7"


def test_verify_threads_do_not_change_bytes(tmp_path, capsys):
    paths = []
    for t in ("1", "3"):
        p = tmp_path / f"v{t}.json"
        assert cli.main(["verify", "--n", "3", "--d", "2", "--threads", t, "--out", str(p)]) == 0
        paths.append(p.read_bytes())
    assert paths[0] == paths[1]

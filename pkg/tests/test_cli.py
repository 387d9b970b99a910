import csv
import json

from click.testing import CliRunner

from mrdscatter.cli import main


def run(*args):
    result = CliRunner().invoke(main, [str(a) for a in args])
    return result


def test_search_summary_and_csv(tmp_path):
    path = tmp_path / "runs.csv"
    r = run("search", "--p", 2, "--n", 3, "--summary", "--csv", path)
    assert r.exit_code == 0, r.output
    data = json.loads(r.output)
    assert data["counts"] == {"tested": 54, "scattered": 0}
    assert "verdicts" not in data
    rows = list(csv.DictReader(path.open()))
    assert rows[0]["q"] == "2" and rows[0]["scattered"] == "0"


def test_search_shard_and_field_spec(tmp_path):
    spec = tmp_path / "f.json"
    spec.write_text(json.dumps({"p": 3, "h": 1, "n": 2}))
    out = tmp_path / "r.json"
    r = run("search", "--field-spec", spec, "--shard", "1/3", "--out", out)
    assert r.exit_code == 0, r.output
    assert json.loads(out.read_text())["job"]["shard"] == [1, 3]
    assert run("search", "--shard", "3/3").exit_code != 0


def test_search_with_list_filter():
    r = run("search", "--p", 3, "--n", 4, "--b-filter", "sqrt-1", "--certify", "none")
    data = json.loads(r.output)
    assert data["counts"] == {"tested": 2, "scattered": 2}


def test_named_computations():
    assert json.loads(run("thm71", "--q", 5).output)["from_condition"]
    assert json.loads(run("thm72", "--q", 3).output)["scattered"]
    assert run("thm72", "--q", 2).exit_code != 0
    assert run("thm71", "--q", 2).exit_code != 0
    rows = json.loads(run("minors", "--q", 3, "--samples", 5).output)
    assert all(r["matches"] == r["total"] == 5 for r in rows)
    rep = json.loads(run("conjecture75", "--q", 3).output)
    assert rep["count"] == rep["expected"] == 6


def test_equiv_and_codes():
    r = run("equiv", "--p", 2, "--n", 2, "--b", 2, "--b2", 3, "--bruteforce")
    data = json.loads(r.output)
    assert data["norm_criterion"] == data["bruteforce"]
    assert run("equiv", "--p", 2, "--n", 2, "--b", 2).exit_code != 0
    classes = json.loads(run("equiv", "--p", 3, "--n", 3).output)["classes"]
    assert len(classes) == 9
    rep = json.loads(run("code-report", "--p", 2, "--n", 2).output)
    assert rep["mrd"]
    nuc = json.loads(run("nucleus", "--p", 2, "--n", 2, "--strategy", "bruteforce").output)
    assert nuc["size"] == 16

import json
import subprocess
import sys

import pytest

from khtorsion import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr().out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


def groups(doc):
    return {(g["i"], g["j"]): (g["rank"], g["torsion"]) for g in doc["result"]["homology"]["groups"]}


def test_compute_delta(capsys):
    code, doc = run_json(capsys, "compute", "--braid", "D", "--strands", "3", "--ring", "Z")
    assert code == 0
    assert groups(doc) == {(0, 0): (1, []), (0, -2): (1, []), (-2, -4): (1, []), (-2, -6): (1, [])}
    assert doc["result"]["jones"] == {"0": 1, "-2": 1, "-4": 1, "-6": 1}
    assert doc["input"]["letters"] == [1, 2, 1]


def test_compute_unknot_csv(capsys):
    code, out = run(capsys, "compute", "--braid", "", "--strands", "1", "--ring", "Q", "--format", "csv")
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 3 and lines[0].startswith("i,j")


def test_compute_trefoil_table(capsys):
    code, out = run(capsys, "compute", "--braid", "1 2 1 2", "--strands", "3", "--format", "table")
    assert code == 0 and out.count("Z_2") == 1


def test_spectral_examples(capsys):
    code, doc = run_json(capsys, "spectral", "--braid", "D^2", "--strands", "3", "--seq", "turner")
    assert code == 0 and doc["result"]["infinity"] == {"0": 2, "-4": 6}
    code, doc = run_json(capsys, "spectral", "--braid", "1", "--strands", "2", "--seq", "lee", "--ring", "Q")
    pages = doc["result"]["pages"]
    assert code == 0 and pages[0]["table"] == pages[-1]["table"] and len(pages[0]["table"]) == 2
    code, doc = run_json(
        capsys, "spectral", "--braid", "1 2 1 2", "--strands", "3", "--seq", "bockstein", "--p", "2"
    )
    assert code == 0
    assert doc["result"]["total_rank_by_page"]["1"] == 1
    assert all(c["ok"] for c in doc["checks"])


def test_thin_examples(capsys):
    code, out = run(capsys, "thin", "--braid", "D^2 -1 -1 -1 -1 -1", "--strands", "3", "--format", "table")
    assert code == 0 and "grading 0: 3 diagonals" in out
    code, doc = run_json(capsys, "thin", "--braid", "1 2 1 2", "--strands", "3")
    (reg,) = doc["result"]["regions"]
    assert code == 0 and reg["hypotheses"]["verdict"] and reg["verified"]
    code, doc = run_json(capsys, "thin", "--braid", "", "--strands", "1")
    assert code == 0 and doc["result"]["sound"] and doc["result"]["regions"][0]["region"]["i1"] == 0


def test_murasugi_reduction(capsys):
    code, doc = run_json(capsys, "compute", "--murasugi", "4:-1:3", "--ring", "Q")
    assert code == 0
    assert doc["input"]["transforms"] == ["mirror", "phi"]
    assert doc["input"]["letters"] == [1, 2, 1, 1, 2, 1, 2, 2, 2]


@pytest.mark.parametrize(
    "argv",
    [
        ["compute", "--braid", "1 9", "--strands", "3"],
        ["compute", "--braid", "1", "--ring", "Z4"],
        ["spectral", "--braid", "1", "--strands", "2", "--seq", "lee", "--ring", "Z2"],
        ["compute", "--braid", "D^8", "--strands", "3"],
        ["compute"],
        ["compute", "--murasugi", "9:0"],
        ["nonsense"],
    ],
)
def test_input_errors(capsys, argv):
    code, out = run(capsys, *argv)
    assert code == 1
    assert "error" in json.loads(out)


def test_budget_and_force(capsys):
    code, _ = run(capsys, "compute", "--braid", "D^3", "--strands", "3", "--budget", "5", "--ring", "Q")
    assert code == 1
    code, _ = run(capsys, "compute", "--braid", "D^3", "--strands", "3", "--budget", "5", "--force", "--ring", "Q")
    assert code == 0


def test_cache_is_transparent(capsys, tmp_path, monkeypatch):
    monkeypatch.setenv("KH_CACHE_DIR", str(tmp_path))
    argv = ["compute", "--braid", "1 2 1 2", "--strands", "3"]
    _, first = run(capsys, *argv)
    assert list(tmp_path.iterdir())
    _, second = run(capsys, *argv)
    _, fresh = run(capsys, *argv, "--no-cache")
    assert first == second == fresh


def test_cache_key_depends_on_inputs():
    from khtorsion.braid import BraidWord
    from khtorsion.linalg import GF, ZZ

    a = cli.cache_key(BraidWord(3, (1, 2)), "khovanov", ZZ, "standard")
    assert a != cli.cache_key(BraidWord(3, (2, 1)), "khovanov", ZZ, "standard")
    assert a != cli.cache_key(BraidWord(3, (1, 2)), "khovanov", GF(2), "standard")
    assert a != cli.cache_key(BraidWord(3, (1, 2)), "khovanov", ZZ, "flipped")


def test_verify_paper_small_budget(capsys):
    code, doc = run_json(capsys, "verify-paper", "--budget", "6", "--workers", "1")
    assert code == 0 and doc["result"]["ok"]
    labels = [m["member"] for m in doc["result"]["members"]]
    assert "Omega3(n=0)" in labels and "Omega0(n=0)" in labels


def test_entry_point_subprocess():
    out = subprocess.run(
        [sys.executable, "-m", "khtorsion.cli", "compute", "--braid", "", "--strands", "1", "--no-cache"],
        capture_output=True,
        text=True,
        check=True,
    )
    assert json.loads(out.stdout)["result"]["ring"] == "Z"

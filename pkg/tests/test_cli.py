from __future__ import annotations

import json
import os
import subprocess
import sys

import pytest

from weldtube.cli import INVARIANTS, main
from weldtube.diagram import load_corpus, serialize


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_parse(capsys):
    code, out, _ = run(capsys, "parse", "(U1+ O2+ U2+ O1+)")
    assert code == 0 and out.strip() == "(O1+ U1+ O2+ U2+)"


def test_parse_reports_singletons(capsys):
    code, _, err = run(capsys, "parse", "(O1+)")
    assert code == 1 and "crossing 1 appears once" in err


def test_parse_reports_position(capsys):
    code, _, err = run(capsys, "parse", "(O1+ X2+ U1+)")
    assert code == 1 and "position" in err


def test_parse_file(capsys, tmp_path):
    f = tmp_path / "c.gauss"
    f.write_text("# comment\n(U1+ O1+)\n\ntrefoil\n")
    code, out, _ = run(capsys, "parse", "--file", str(f))
    assert code == 0
    assert out.splitlines() == ["(O1+ U1+)", "(O1+ U2+ O3+ U1+ O2+ U3+)"]


def test_parse_missing_file(capsys, tmp_path):
    code, _, err = run(capsys, "parse", "--file", str(tmp_path / "nope"))
    assert code == 1 and err.startswith("error:")


def test_invariants_all_trefoil(capsys):
    code, out, _ = run(capsys, "invariants", "--all", "(O1+ U2+ O3+ U1+ O2+ U3+)", "--json")
    data = json.loads(out)
    assert code == 0
    assert data["invariants"]["colorings_R3"] == 9
    assert data["invariants"]["alexander"] == "t^2 - t + 1"
    assert data["invariants"]["homs_S3"] == 12
    assert set(data["invariants"]) == set(INVARIANTS)


def test_invariants_f_of_unknot(capsys):
    code, out, _ = run(capsys, "invariants", "--f-poly", "()")
    assert code == 0 and "f_polynomial: 1" in out.splitlines()


def test_invariants_linkoid_marks_inapplicable(capsys):
    code, out, _ = run(capsys, "invariants", "--all", "[U1+] (O1+)", "--json")
    data = json.loads(out)
    assert code == 0
    assert "f_polynomial" in data["inapplicable"] and "f_polynomial" not in data["invariants"]
    assert "alexander" in data["inapplicable"]
    assert data["inapplicable"]["f_polynomial"]


def test_invariants_tsv(capsys):
    code, out, _ = run(capsys, "invariants", "--colorings", "--tsv", "VT")
    header, row = out.splitlines()
    assert header.split("\t")[0] == "code" and "colorings_R3" in header
    assert row.split("\t")[1:] == ["3", "5", "7"]


def test_search_welded(capsys):
    code, out, _ = run(capsys, "search", "VT", "unknot", "--moves", "welded", "--json")
    assert code == 0 and json.loads(out)["verdict"] == "Found"


def test_search_virtual(capsys):
    code, out, _ = run(capsys, "search", "VT", "unknot", "--moves", "virtual")
    assert code == 0 and out.startswith("DistinctByInvariant f-polynomial")


def test_search_trivial(capsys):
    code, out, _ = run(capsys, "search", "unknot", "unknot", "--moves", "virtual", "--depth", "0")
    assert code == 0 and out.strip() == "Found (0 moves)"


def test_search_exhausted_exit_code(capsys):
    code, out, _ = run(capsys, "search", "VT", "unknot", "--moves", "welded", "--depth", "1")
    assert code == 2 and out.startswith("Exhausted")


def test_search_bad_budget(capsys):
    code, _, err = run(capsys, "search", "VT", "unknot", "--depth", "-1")
    assert code == 1 and "error" in err


def test_tube_check(capsys):
    code, out, err = run(capsys, "tube", "--check", "trefoil")
    assert code == 0 and "presentations equal: true" in err
    data = json.loads(out)
    assert data["presentations_equal"] is True
    assert data["euler_characteristic"] == -3 and data["virtual_tube_form"] is True


def test_tube_small_n(capsys):
    code, _, err = run(capsys, "tube", "-n", "1", "trefoil")
    assert code == 1 and "n must be ≥ 2m" in err


def test_vd_unknot(capsys):
    code, out, _ = run(capsys, "vd", "()")
    data = json.loads(out)
    assert code == 0 and data["code"] == "() ()" and data["stack_form"] is True


def test_vd_rejects_linkoid(capsys):
    code, _, _ = run(capsys, "vd", "[U1+] (O1+)")
    assert code == 1


def test_table(capsys, tmp_path):
    f = tmp_path / "t.gauss"
    f.write_text("()\ntrefoil\n(O1+ U1+)\n")
    code, out, _ = run(capsys, "table", str(f))
    lines = out.splitlines()
    assert code == 0 and len(lines) == 4
    assert lines[0].split("\t")[:2] == ["line", "code"]
    assert [ln.split("\t")[1] for ln in lines[1:]] == ["()", "(O1+ U2+ O3+ U1+ O2+ U3+)", "(O1+ U1+)"]
    assert all(ln.split("\t")[-1] == "" for ln in lines[1:])


def test_table_bad_line(capsys, tmp_path):
    f = tmp_path / "t.gauss"
    f.write_text("()\n(O1+)\ntrefoil\n")
    code, out, _ = run(capsys, "table", str(f), "--invariants", "colorings_R3")
    rows = [ln.split("\t") for ln in out.splitlines()[1:]]
    assert code == 0
    assert rows[0][2] == "3" and rows[2][2] == "9"
    assert rows[1][2] == "" and "appears once" in rows[1][3]


def test_table_all_bad(capsys, tmp_path):
    f = tmp_path / "t.gauss"
    f.write_text("(O1+)\n")
    assert run(capsys, "table", str(f))[0] == 1


def test_table_unknown_invariant(capsys, tmp_path):
    f = tmp_path / "t.gauss"
    f.write_text("()\n")
    code, _, err = run(capsys, "table", str(f), "--invariants", "jones")
    assert code == 1 and "jones" in err


def test_table_is_deterministic_across_threads(tmp_path):
    f = tmp_path / "corpus.gauss"
    f.write_text("\n".join(serialize(k) for k in load_corpus()[:16]) + "\n")
    outs = []
    for threads in ("1", "4", "4"):
        proc = subprocess.run([sys.executable, "-m", "weldtube", "table", str(f)],
                              capture_output=True, text=True,
                              env={**os.environ, "WELDTUBE_THREADS": threads})
        assert proc.returncode == 0, proc.stderr
        outs.append(proc.stdout)
    assert outs[0] == outs[1] == outs[2]
    assert len(outs[0].splitlines()) == 17


@pytest.mark.parametrize("argv", [[], ["frobnicate"], ["search", "VT"]])
def test_usage_errors(argv, capsys):
    assert main(argv) == 1

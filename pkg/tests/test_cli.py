import json

import pytest

from qhtt.cli import combine, main

from conftest import corpus_path

GOLDENS = ["bell00", "teleport", "teleport2", "deutsch", "cointoss", "parity"]


def qhtt(*args):
    return main([str(a) for a in args])


def test_check_passes():
    assert qhtt("check", corpus_path("bell00.qh")) == 0


def test_check_rejects_uniform_on_bit(capsys):
    assert qhtt("check", corpus_path("cointoss_bad.qh")) == 1
    assert "uniform: only defined for quantum variables" in capsys.readouterr().out


def test_check_missing_file(capsys):
    assert qhtt("check", "nosuch.qh") == 3
    assert "cannot read" in capsys.readouterr().out


def test_parse_error_exit(tmp_path):
    f = tmp_path / "bad.qh"
    f.write_text("t : QST (u : unit\n", encoding="utf-8")
    assert qhtt("check", f) == 2


def test_type_error_exit(tmp_path):
    f = tmp_path / "ghost.qh"
    f.write_text("t : QST (b : qbit) {e: qbit} (requires {⊤}) (ensures {⊤})\nt = do {\n  return e\n}\n", encoding="utf-8")
    assert qhtt("check", f) == 2


def test_exit_codes_are_worst_class():
    assert combine([0, 0]) == 0
    assert combine([0, 1]) == 1
    assert combine([1, 2]) == 2
    assert combine([2, 3, 1]) == 3


def test_mixed_files_parallel(tmp_path):
    files = [corpus_path("bell00.qh"), corpus_path("mutants/bell00_no_h.qh")]
    assert qhtt("check", "--jobs", 2, *files) == 1


def test_json_report_round_trips(tmp_path):
    out = tmp_path / "r.json"
    assert qhtt("check", corpus_path("teleport2.qh"), "--json", out) == 0
    text = out.read_text(encoding="utf-8")
    data = json.loads(text)
    assert data["verdict"] == "pass"
    assert [d["name"] for d in data["declarations"]] == ["bell00", "alice", "bob", "teleport"]
    assert json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n" == text
    ob = data["declarations"][0]["obligations"][0]
    assert ob["rule"] == "PostCheck" and ob["verdict"] == "pass"


def test_json_failure_has_counterexample(tmp_path):
    out = tmp_path / "r.json"
    assert qhtt("check", corpus_path("mutants/teleport_swapped.qh"), "--json", out) == 1
    data = json.loads(out.read_text(encoding="utf-8"))
    (bad,) = [o for o in data["declarations"][0]["obligations"] if o["verdict"] == "fail"]
    assert bad["mode"] == "sampled" and "counterexample" in bad


def test_flags(monkeypatch):
    monkeypatch.setenv("QHTT_SEED", "12345")
    assert qhtt("check", corpus_path("teleport.qh"), "--samples", 6, "--tol", 1e-6) == 0
    assert qhtt("check", corpus_path("teleport.qh"), "--max-registers", 2) == 1


@pytest.mark.parametrize("name", GOLDENS)
def test_annotate_matches_golden(capsys, name):
    assert qhtt("annotate", corpus_path(f"{name}.qh")) == 0
    out = capsys.readouterr().out
    assert out == corpus_path(f"{name}.annotated").read_text(encoding="utf-8")


def test_annotate_bell_lines(capsys):
    qhtt("annotate", corpus_path("bell00.qh"))
    out = capsys.readouterr().out
    assert "  -- {a =q |0⟩}\n" in out
    assert "  -- {(a, b) =q (|00⟩+|11⟩)/sqrt(2)}\n" in out


def test_annotate_teleport_has_ghost_lines(capsys):
    qhtt("annotate", corpus_path("teleport.qh"))
    out = capsys.readouterr().out
    assert "e_x" in out and "e_y" in out


def test_annotate_empty_body(tmp_path, capsys):
    f = tmp_path / "e.qh"
    f.write_text("t : QST (u : unit) (requires {⊤}) (ensures {⊤})\nt = do {\n  return ()\n}\n", encoding="utf-8")
    assert qhtt("annotate", f) == 0
    assert capsys.readouterr().out == "t : QST (u : unit) (requires {⊤}) (ensures {⊤})\nt = do {\n  -- {⊤}\n  return ()\n}\n"


def test_simulate_bell(capsys):
    assert qhtt("simulate", corpus_path("bell00.qh"), "--shots", 10000, "--measure", "--json", "-") == 0
    hist = json.loads(capsys.readouterr().out)["histogram"]
    assert set(hist) == {"00", "11"}
    assert 4500 <= hist["00"] <= 5500


def test_simulate_teleport_basis_input(capsys):
    assert qhtt("simulate", corpus_path("teleport.qh"), "--in", "q=1,0", "--shots", 100, "--measure") == 0
    lines = capsys.readouterr().out.split()
    keys = lines[0::2]
    assert keys and all(k.endswith("0") for k in keys)


def test_simulate_deutsch(capsys):
    assert qhtt("simulate", corpus_path("deutsch.qh"), "--in", "f=id", "--shots", 40, "--json", "-") == 0
    assert json.loads(capsys.readouterr().out)["histogram"] == {"1": 40}


def test_simulate_state_dump(capsys):
    assert qhtt("simulate", corpus_path("teleport.qh"), "--in", "q=0.6,0.8", "--shots", 1, "--state") == 0
    out = capsys.readouterr().out
    assert "+0.600000" in out and "+0.800000" in out


def test_simulate_symbolic_without_inputs(capsys):
    assert qhtt("simulate", corpus_path("teleport.qh")) == 2
    assert "--in q=" in capsys.readouterr().err


def test_corpus_list_and_export(tmp_path, capsys):
    assert qhtt("corpus", "list") == 0
    names = capsys.readouterr().out.split()
    assert "bell00.qh" in names and "mutants/bell00_no_h.qh" in names
    assert qhtt("corpus", "export", tmp_path) == 0
    assert (tmp_path / "teleport2.qh").exists() and (tmp_path / "bell00.annotated").exists()

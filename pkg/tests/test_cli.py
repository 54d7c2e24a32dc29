import json
import subprocess
import sys

from fdhopf.cli import EXIT_FAIL, EXIT_INPUT, EXIT_OK, main


def test_construct_is_deterministic(tmp_path, capsys):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    assert main(["construct", "taft", "--n", "3", "-o", str(a)]) == EXIT_OK
    assert main(["construct", "taft", "--n", "3", "-o", str(b)]) == EXIT_OK
    assert a.read_bytes() == b.read_bytes()
    assert "taft(3,1)" in capsys.readouterr().out


def test_verify_and_summary(tmp_path, capsys):
    src, rep = tmp_path / "t.json", tmp_path / "r.json"
    main(["construct", "taft", "--n", "3", "-o", str(src)])
    assert main(["verify", str(src), "--report", str(rep)]) == EXIT_OK
    entries = json.loads(rep.read_text())
    ids = [e["check-id"] for e in entries]
    assert ids[:2] == ["associativity", "unit"]
    assert {"radford-s4", "grading", "lemma-5.1", "thm-6.4", "lemma-6.3-trace"} <= set(ids)
    grading = next(e for e in entries if e["check-id"] == "grading")
    assert grading["table"]["n"] == 3
    capsys.readouterr()
    assert main(["summary", str(rep)]) == EXIT_OK
    out = capsys.readouterr().out
    assert "grading dimensions" in out and "PASS" in out


def test_check_filter(tmp_path):
    src, rep = tmp_path / "g.json", tmp_path / "r.json"
    main(["construct", "group", "--factors", "3,3", "-o", str(src)])
    assert main(["verify", str(src), "--report", str(rep), "--checks", "lemma-*,thm-6.5"]) == EXIT_OK
    ids = {e["check-id"] for e in json.loads(rep.read_text())}
    assert ids and all(i.startswith("lemma-") or i == "thm-6.5" for i in ids)


def test_failing_file_exits_one_with_witness(tmp_path, capsys):
    src, rep = tmp_path / "t.json", tmp_path / "r.json"
    main(["construct", "taft", "--n", "3", "-o", str(src)])
    doc = json.loads(src.read_text())
    doc["mult"][5][3] = "z"
    src.write_text(json.dumps(doc))
    assert main(["verify", str(src), "--report", str(rep)]) == EXIT_FAIL
    entries = json.loads(rep.read_text())
    failed = [e for e in entries if e["status"] == "fail"]
    assert failed and failed[0]["witness"]["residual"] not in ("0", "")
    capsys.readouterr()
    main(["summary", str(rep)])
    assert "witness:" in capsys.readouterr().out


def test_input_errors_exit_two(tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text('{"name": "x"}')
    rep = tmp_path / "r.json"
    assert main(["verify", str(bad), "--report", str(rep)]) == EXIT_INPUT
    assert main(["verify", str(tmp_path / "missing.json"), "--report", str(rep)]) == EXIT_INPUT
    assert main(["construct", "taft", "--n", "4", "--xi-exponent", "2", "-o", str(rep)]) == EXIT_INPUT
    src = tmp_path / "g.json"
    main(["construct", "group", "--factors", "3", "-o", str(src)])
    assert main(["verify", str(src), "--report", str(rep), "--cyclotomic-order", "4"]) == EXIT_INPUT
    assert main(["summary", str(src)]) == EXIT_INPUT


def test_double_from_file(tmp_path):
    src, dst = tmp_path / "g.json", tmp_path / "d.json"
    main(["construct", "group", "--factors", "2", "-o", str(src)])
    assert main(["construct", "double", "--input", str(src), "-o", str(dst)]) == EXIT_OK
    assert json.loads(dst.read_text())["dim"] == 4


def test_module_entry_point_usage_error():
    proc = subprocess.run([sys.executable, "-m", "fdhopf", "bogus"], capture_output=True, text=True)
    assert proc.returncode == EXIT_INPUT
    assert "usage" in proc.stderr

import subprocess
import sys

from dmiat.cli import main


def test_run_writes_tables(tmp_path, capsys):
    code = main(["run", "--data", "builtin:iris", "--folds", "3", "--variants", "A,A+DMIAT",
                 "--classifiers", "nb,knn", "--disc", "ew:5", "--out", str(tmp_path)])
    assert code == 0
    out = capsys.readouterr().out
    assert "iris" in out and "A+DMIAT" in out and "knn3" in out
    assert (tmp_path / "results.csv").read_text().count("\n") == 1 + 2 * 2 * 3


def test_cuts_command(capsys):
    assert main(["cuts", "builtin:glass", "--conf", "lift1.5"]) == 0
    out = capsys.readouterr().out
    assert "Ca <= 8.4" in out or "Ca <=" in out
    assert main(["cuts", "builtin:iris", "--tsv"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    assert all(len(line.split("\t")) == 7 for line in lines)


def test_exit_codes(tmp_path, capsys):
    assert main(["run", "--data", str(tmp_path / "missing.csv"), "--variants", "A", "--classifiers", "nb",
                 "--out", str(tmp_path / "o")]) == 1
    assert main(["run", "--data", "builtin:iris", "--classifiers", "svm", "--out", str(tmp_path)]) == 2
    assert "error:" in capsys.readouterr().err


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "dmiat", "cuts", "builtin:iris", "--tsv"],
                         capture_output=True, text=True)
    assert res.returncode == 0 and res.stdout.count("\n") >= 12

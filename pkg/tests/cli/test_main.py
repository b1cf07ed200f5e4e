import pandas as pd

from main import main


def test_simulate(tmp_path):
    out = tmp_path / "run.csv"
    assert main(["simulate", "--out", str(out), "--steps", "50"]) == 0
    assert len(pd.read_csv(out)) == 50


def test_config_file_with_flag_override(tmp_path):
    config = tmp_path / "run.cfg"
    config.write_text("table=strip\nr=1\nR=0.25\nsteps=500\n")
    out = tmp_path / "strip.csv"
    assert main(["simulate", "--config", str(config), "--steps", "30", "--out", str(out)]) == 0
    assert len(pd.read_csv(out)) == 30


def test_dims(capsys):
    assert main(["verify", "dims"]) == 0
    assert "grassmannian_n5=0,3,4,3,0" in capsys.readouterr().out


def test_strict(capsys):
    assert main(["verify", "strict", "--n", "3", "--trials", "5"]) == 0
    assert "failures=0" in capsys.readouterr().out


def test_invalid_dimension():
    assert main(["simulate", "--n", "5"]) == 1


def test_missing_config_file(tmp_path):
    assert main(["simulate", "--config", str(tmp_path / "missing.cfg")]) == 3


def test_experiment(tmp_path, capsys):
    out = tmp_path / "caustics.txt"
    assert main(["experiment", "caustics", "--steps", "30", "--out", str(out)]) == 0
    assert out.exists()
    assert "experiment=caustics" in capsys.readouterr().out

import json
import subprocess
import sys

import pytest

from spfq.cli import main
from spfq.fields import Field
from spfq.sparsemat import write_sms
from spfq.experiments import gen_rank_m


@pytest.fixture
def sms_input(tmp_path):
    A = gen_rank_m(Field(2), 12, 40, seed=5)
    path = tmp_path / "A.sms"
    path.write_text(write_sms(A))
    return path


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def test_params_single_row_text(capsys):
    code, out, _ = run(capsys, ["params", "--q", "2", "--epsilon", "0.1",
                                "--compare-paper"])
    assert code == 0
    assert "upsilon=41" in out
    assert "confirmed" in out


def test_params_all_json_schema(capsys):
    code, out, _ = run(capsys, ["params", "--all", "--epsilon", "1/10",
                                "--compare-paper", "--format", "json"])
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 16
    assert all(r["schema"] == "1" for r in rows)
    mismatched = sorted(r["q"] for r in rows if not r["comparison"]["confirmed"])
    assert mismatched == [3, 4, 7, 16]


def test_params_bad_epsilon_exit(capsys):
    code, _, err = run(capsys, ["params", "--q", "2", "--epsilon", "1"])
    assert code == 4
    assert "failure budget" in err


def test_usage_error_exit(capsys):
    assert main(["params", "--epsilon", "nonsense"]) == 2
    capsys.readouterr()


def test_verify_row_json(capsys):
    code, out, _ = run(capsys, ["verify", "--q", "2", "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["overall"] is True
    assert rep["reports"][0]["name"] == "q=2"
    labels = [c["label"] for c in rep["reports"][0]["checks"]]
    assert any("f1(5/43)" in lab for lab in labels)


def test_verify_not_prime_power(capsys):
    code, _, err = run(capsys, ["verify", "--q", "6"])
    assert code == 4
    assert "prime power" in err


def test_verify_all_exit_zero(capsys):
    code, out, _ = run(capsys, ["verify", "--all", "--grid-points", "1000"])
    assert code == 0
    assert out.strip().endswith("overall: pass")
    assert out.count("[pass]") == 17    # 16 rows + the asymptotic suite


def test_precondition_round_trip_and_determinism(capsys, tmp_path, sms_input):
    out1 = tmp_path / "B1.sms"
    out2 = tmp_path / "B2.sms"
    code, side1, _ = run(capsys, ["precondition", "--q", "2",
                                  "--in", str(sms_input), "--out", str(out1),
                                  "--seed", "7"])
    assert code == 0
    code, side2, _ = run(capsys, ["precondition", "--q", "2",
                                  "--in", str(sms_input), "--out", str(out2),
                                  "--seed", "7"])
    assert code == 0
    assert out1.read_bytes() == out2.read_bytes()
    assert side1 == side2
    sidecar = json.loads(side1)
    assert sidecar["seed"] == 7
    assert sidecar["schema"] == "1"
    assert len(sidecar["row_weights"]) == sidecar["rows_out"] - 12
    assert (tmp_path / "B1.sms.json").exists()


def test_precondition_value_out_of_range_exit(capsys, tmp_path):
    bad = tmp_path / "bad.sms"
    bad.write_text("1 1 M\n1 1 3\n0 0 0\n")
    code, _, err = run(capsys, ["precondition", "--q", "2", "--in", str(bad),
                                "--out", "-", "--seed", "0"])
    assert code == 3


def test_precondition_rank_deficient_exit(capsys, tmp_path):
    bad = tmp_path / "dup.sms"
    bad.write_text("2 3 M\n1 1 1\n1 2 1\n2 1 1\n2 2 1\n0 0 0\n")
    code, _, err = run(capsys, ["precondition", "--q", "2", "--in", str(bad),
                                "--out", "-", "--seed", "0"])
    assert code == 5
    # the documented (unsafe) waiver lets it through
    code, out, _ = run(capsys, ["precondition", "--q", "2", "--in", str(bad),
                                "--out", "-", "--seed", "0", "--no-rank-check"])
    assert code == 0


def test_mc_small_json(capsys, tmp_path):
    log = tmp_path / "mc.csv"
    code, out, _ = run(capsys, ["mc", "--q", "2", "--n", "60", "--m", "10",
                                "--trials", "25", "--seed", "3",
                                "--out", str(log), "--no-fig",
                                "--format", "json"])
    assert code == 0
    rep = json.loads(out)
    assert rep["trials"] == 25
    assert rep["ok"] is True
    assert log.read_text().startswith("trial,seed,rank,added_nnz,success")


def test_mc_renders_figure(capsys, tmp_path):
    log = tmp_path / "mc.csv"
    code, _, _ = run(capsys, ["mc", "--q", "2", "--n", "40", "--m", "10",
                              "--trials", "8", "--seed", "3",
                              "--out", str(log)])
    assert code == 0
    assert (tmp_path / "mc.png").stat().st_size > 0


def test_plot_csv_and_figure(capsys, tmp_path):
    csv_path = tmp_path / "gap.csv"
    code, _, _ = run(capsys, ["plot", "--q", "2", "--grid-points", "16",
                              "--out", str(csv_path)])
    assert code == 0
    lines = csv_path.read_text().strip().splitlines()
    assert lines[0] == "beta,gap"
    assert len(lines) == 17
    assert (tmp_path / "gap.png").stat().st_size > 0


def test_plot_two_points_stdout(capsys):
    code, out, _ = run(capsys, ["plot", "--q", "2", "--grid-points", "2",
                                "--no-fig"])
    assert code == 0
    rows = out.strip().splitlines()
    assert len(rows) == 3
    beta_last = float(rows[2].split(",")[0])
    assert beta_last == pytest.approx(6 / 43)


def test_plot_weakened_constants_show_violation(capsys):
    code, out, _ = run(capsys, ["plot", "--q", "2", "--c4", "14",
                                "--beta0", "1/7", "--grid-points", "2000",
                                "--no-fig"])
    assert code == 0
    gaps = [float(line.split(",")[1]) for line in out.strip().splitlines()[1:]]
    assert min(gaps) < 0


def test_oracle_small(capsys):
    code, out, _ = run(capsys, ["oracle", "--trials", "10", "--seed", "1"])
    assert code == 0
    assert "pass" in out


def test_console_script_help():
    proc = subprocess.run([sys.executable, "-m", "spfq.cli", "--help"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert "verify" in proc.stdout

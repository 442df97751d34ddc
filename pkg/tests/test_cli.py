import pytest
from typer.testing import CliRunner

from commands import verify as verify_command
from scans.verifier import CheckResult, Verifier
from main import app
from utils.csv_writer import HEADER

runner = CliRunner()

HEADER_LINE = ",".join(HEADER)

PLANE = """
[geometry]
kind = plane
[scan]
parameter = R_AB
start = 0.5
stop = 2
count = 3
h_a = {h_a}
h_b = 1
"""

CAPACITOR = """
[geometry]
kind = capacitor
D = 1
[scan]
parameter = R_AB/D
start = {start}
stop = {stop}
count = 2
"""


@pytest.fixture
def write_config(tmp_path):
    def write(text, name="run.ini"):
        path = tmp_path / name
        path.write_text(text)
        return path
    return write


def test_plane_scan_to_file(write_config, tmp_path):
    out = tmp_path / "plane.csv"
    result = runner.invoke(app, ["plane-scan", "--config", str(write_config(PLANE.format(h_a=1))), "--out", str(out)])
    assert result.exit_code == 0, result.output
    lines = out.read_text().splitlines()
    assert lines[0] == HEADER_LINE
    assert len(lines) == 4


def test_plane_scan_to_stdout(write_config):
    result = runner.invoke(app, ["plane-scan", "-c", str(write_config(PLANE.format(h_a=1)))])
    assert result.exit_code == 0
    assert result.stdout.splitlines()[0] == HEADER_LINE


def test_capacitor_ratio_writes_companion(write_config, tmp_path):
    out = tmp_path / "cap.csv"
    cfg = write_config(CAPACITOR.format(start=0.5, stop=2))
    result = runner.invoke(app, ["capacitor-ratio", "-c", str(cfg), "-o", str(out)])
    assert result.exit_code == 0, result.output
    assert (tmp_path / "cap.asymptotic.csv").exists()


def test_config_error_exit_code(write_config):
    result = runner.invoke(app, ["plane-scan", "-c", str(write_config("[geometry]\nkind = capacitor\n"))])
    assert result.exit_code == 2


def test_missing_config_file(tmp_path):
    result = runner.invoke(app, ["plane-scan", "-c", str(tmp_path / "absent.ini")])
    assert result.exit_code == 2


def test_geometry_error_exit_code(write_config):
    result = runner.invoke(app, ["plane-scan", "-c", str(write_config(PLANE.format(h_a=-1)))])
    assert result.exit_code == 2


def test_convergence_error_exit_code(write_config):
    text = CAPACITOR.format(start=0.06, stop=0.1) + "[numerics]\nn_max = 8\nmin_terms = 8\n"
    result = runner.invoke(app, ["capacitor-ratio", "-c", str(write_config(text))])
    assert result.exit_code == 3


def test_verify_command():
    result = runner.invoke(app, ["verify"])
    assert result.exit_code == 0, result.output
    assert "PASS" in result.stdout
    assert "FAIL" not in result.stdout


def test_verify_failure_exit_code(monkeypatch):
    failing = Verifier(checks=[lambda: CheckResult("always off", 1.0, 0.1)])
    monkeypatch.setattr(verify_command, "Verifier", lambda: failing)
    result = runner.invoke(app, ["verify"])
    assert result.exit_code == 1


def test_scan_with_verify_flag(write_config, tmp_path):
    out = tmp_path / "plane.csv"
    result = runner.invoke(app, ["plane-scan", "-c", str(write_config(PLANE.format(h_a=1))), "-o", str(out), "--verify"])
    assert result.exit_code == 0, result.output
    assert out.exists()

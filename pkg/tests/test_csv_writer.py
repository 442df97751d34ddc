import io

import pytest

from core.energies import EnergyBreakdown
from scans.rows import breakdown_row
from utils.csv_writer import HEADER, companion_path, format_row, write_result, write_rows

HEADER_LINE = "param,e_london,e_na1,e_na2,e_na_total,ratio,fx_na,fy_na,fz_na,terms_used,converged"


def _row(param=1.0, force=None):
    b = EnergyBreakdown(-1.0, 0.25, -0.5, -0.25, 0.25, 42, True)
    return breakdown_row(param, b, force=force)


def test_header():
    assert ",".join(HEADER) == HEADER_LINE


def test_format_row():
    cells = format_row(_row(), precision=12)
    assert cells[0] == "1.000000000000e+00"
    assert cells[1] == "-1.000000000000e+00"
    assert cells[6:9] == ["", "", ""]
    assert cells[9] == "42"
    assert cells[10] == "true"
    assert format_row(_row(force=(0.0, -2.0, 0.0)), precision=3)[7] == "-2.000e+00"


def test_format_row_drops_negative_zero():
    cells = format_row(_row(param=-0.0, force=(0.0, -0.0, -0.0)), precision=3)
    assert cells[0] == "0.000e+00"
    assert cells[6:9] == ["0.000e+00"] * 3
    assert not any(c.startswith("-0.000") for c in cells)


def test_write_rows_uses_lf_and_is_deterministic():
    first, second = io.StringIO(), io.StringIO()
    rows = [_row(1.0), _row(2.0)]
    write_rows(rows, first)
    write_rows(rows, second)
    text = first.getvalue()
    assert text == second.getvalue()
    assert "\r" not in text
    lines = text.split("\n")
    assert lines[0] == HEADER_LINE
    assert len(lines) == 4 and lines[-1] == ""


def test_companion_path(tmp_path):
    assert companion_path(tmp_path / "out.csv", "asymptotic") == tmp_path / "out.asymptotic.csv"


def test_write_result_with_companions(tmp_path):
    result = {"rows": [_row()], "series": {"grounded": [_row(), _row(2.0)]}}
    written = write_result(result, tmp_path / "out.csv")
    assert written == [tmp_path / "out.csv", tmp_path / "out.grounded.csv"]
    assert (tmp_path / "out.grounded.csv").read_text().count("\n") == 3


def test_write_result_to_stdout_skips_companions(capsys):
    written = write_result({"rows": [_row()], "series": {"grounded": [_row()]}}, None)
    assert written == []
    assert capsys.readouterr().out.startswith(HEADER_LINE)


def test_unconverged_row():
    row = _row()
    row["converged"] = False
    assert format_row(row)[-1] == "false"
    with pytest.raises(ValueError):
        format_row({"param": "x"})

"""Activity sweeps and the CSV/JSON table emitters."""

import io
import json
from pathlib import Path

import numpy as np
import pytest

import cayley_potts.scan as scan_mod
from cayley_potts.scan import (CSV_HEADER, ScanRow, emit_csv, emit_json,
                               parse_csv, row_from_report, scan_theta)
from cayley_potts.solver import BisectionError, Bracket, find_h_roots

GOLDEN = Path(__file__).parent / "data" / "scan_k3_golden.csv"


def k3_rows():
    return scan_theta(3, 0.05, 0.95, 19)


# -------------------------------------------------------------- scan_theta


def test_scan_counts_below_threshold():
    rows = scan_theta(3, 0.05, 0.20, 4)
    assert [r.count for r in rows] == [3, 3, 3, 3]
    assert all(r.theta_cr == 0.25 for r in rows)


def test_scan_counts_above_threshold():
    rows = scan_theta(3, 0.30, 0.90, 4)
    assert [r.count for r in rows] == [1, 1, 1, 1]


def test_scan_straddles_k4_threshold():
    assert scan_theta(4, 0.39, 0.40, 1)[0].count == 3
    assert scan_theta(4, 0.41, 0.42, 1)[0].count == 1


def test_scan_grid_is_monotone_and_unique():
    rows = k3_rows()
    thetas = [r.theta for r in rows]
    assert thetas == sorted(thetas)
    assert len(set(thetas)) == len(thetas)
    assert thetas[0] == 0.05 and thetas[-1] == pytest.approx(0.95)


def test_scan_matches_root_reports():
    row = scan_theta(3, 0.1, 0.2, 1)[0]
    assert row == row_from_report(find_h_roots(0.1, 3))


def test_scan_validation():
    with pytest.raises(ValueError):
        scan_theta(3, 0.9, 0.1, 5)
    with pytest.raises(ValueError):
        scan_theta(3, 0.0, 0.5, 5)
    with pytest.raises(ValueError):
        scan_theta(3, 0.1, 1.0, 5)
    with pytest.raises(ValueError):
        scan_theta(3, 0.1, 0.5, 0)
    with pytest.raises(ValueError):
        scan_theta(2, 0.1, 0.5, 5)


def test_scan_records_failed_rows(monkeypatch):
    real = find_h_roots

    def flaky(theta, k, grid=4001):
        if 0.4 < theta < 0.6:
            raise BisectionError("stuck", Bracket(1.0, 2.0, -1.0, 1.0))
        return real(theta, k, grid=grid)

    monkeypatch.setattr(scan_mod, "find_h_roots", flaky)
    rows = scan_theta(3, 0.3, 0.7, 3)
    assert [r.count for r in rows] == [1, 0, 1]
    assert rows[1].roots == ()
    assert rows[1].flags == ("error:BisectionError",)


# -------------------------------------------------------------------- csv


def test_csv_header_and_shape():
    buf = io.BytesIO()
    emit_csv(scan_theta(3, 0.1, 0.2, 1), buf)
    lines = buf.getvalue().decode("ascii").split("\n")
    assert lines[0] == CSV_HEADER == "k,theta,theta_cr,count,x0,x1,x2,flags"
    assert len(lines) == 3 and lines[-1] == ""  # header + row + trailing LF


def test_csv_matches_frozen_golden():
    buf = io.BytesIO()
    emit_csv(k3_rows(), buf)
    assert buf.getvalue() == GOLDEN.read_bytes()


def test_csv_deterministic():
    a, b = io.BytesIO(), io.BytesIO()
    emit_csv(k3_rows(), a)
    emit_csv(k3_rows(), b)
    assert a.getvalue() == b.getvalue()


def test_csv_text_stream_and_path(tmp_path):
    rows = scan_theta(3, 0.1, 0.2, 1)
    sio = io.StringIO()
    emit_csv(rows, sio)
    target = tmp_path / "rows.csv"
    emit_csv(rows, target)
    assert target.read_text(encoding="ascii") == sio.getvalue()


def test_csv_roundtrip_exact():
    rows = k3_rows()
    buf = io.BytesIO()
    emit_csv(rows, buf)
    assert parse_csv(io.BytesIO(buf.getvalue())) == rows


def test_csv_overflow_column():
    row = ScanRow(k=3, theta=0.1, theta_cr=0.25, count=5,
                  roots=(0.125, 0.5, 1.0, 2.0, 30.0), pairs=(), flags=())
    buf = io.StringIO()
    emit_csv([row], buf)
    line = buf.getvalue().split("\n")[1]
    assert line == "3,0.10000000000000001,0.25,5,0.125,1,2,overflow:0.5|30"
    parsed = parse_csv(io.StringIO(buf.getvalue()))[0]
    assert parsed.roots == row.roots
    assert parsed.count == 5
    assert parsed.flags == ()


def test_csv_error_row_renders_empty_fields():
    row = ScanRow(k=3, theta=0.5, theta_cr=0.25, count=0, roots=(),
                  pairs=(), flags=("error:BisectionError",))
    buf = io.StringIO()
    emit_csv([row], buf)
    assert buf.getvalue().split("\n")[1] == (
        "3,0.5,0.25,0,,,,error:BisectionError")
    assert parse_csv(io.StringIO(buf.getvalue()))[0] == row


def test_emit_rejects_empty():
    with pytest.raises(ValueError):
        emit_csv([], io.StringIO())
    with pytest.raises(ValueError):
        emit_json([], io.StringIO())


def test_parse_rejects_malformed_input():
    with pytest.raises(ValueError):
        parse_csv(io.StringIO("wrong,header\n"))
    with pytest.raises(ValueError):
        parse_csv(io.StringIO(CSV_HEADER + "\n1,2,3\n"))
    # count column must agree with the roots present
    with pytest.raises(ValueError):
        parse_csv(io.StringIO(CSV_HEADER + "\n3,0.5,0.25,2,,1,,\n"))


def test_17g_is_lossless():
    value = 0.1 + 0.2 + 1e-17
    assert float(f"{value:.17g}") == value


# ------------------------------------------------------------------- json


def test_json_schema_and_values():
    rows = scan_theta(3, 0.1, 0.2, 2)
    buf = io.StringIO()
    emit_json(rows, buf)
    payload = json.loads(buf.getvalue())
    assert len(payload) == 2
    first = payload[0]
    assert set(first) == {"k", "theta", "theta_cr", "count", "roots",
                          "pairs", "flags"}
    assert first["k"] == 3
    assert first["count"] == 3
    assert first["roots"] == list(rows[0].roots)
    assert first["pairs"] == [list(p) for p in rows[0].pairs]

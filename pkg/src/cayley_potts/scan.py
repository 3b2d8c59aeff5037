"""Activity sweeps: root counts and locations as theta varies.

Rows are plain records meant for machine consumption.  The CSV emitter
writes a fixed 8-column schema with 17-significant-digit decimals, so a
file round-trips to the exact same floats; the JSON emitter mirrors the
same field names with full root lists.  Both are deterministic byte for
byte.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .period2 import theta_cr
from .solver import BisectionError, RootReport, find_h_roots

CSV_HEADER = "k,theta,theta_cr,count,x0,x1,x2,flags"
_OVERFLOW_PREFIX = "overflow:"


@dataclass(frozen=True)
class ScanRow:
    k: int
    theta: float
    theta_cr: float
    count: int
    roots: tuple[float, ...]                 # ascending
    pairs: tuple[tuple[float, float], ...]
    flags: tuple[str, ...]


def row_from_report(report: RootReport) -> ScanRow:
    return ScanRow(k=report.k, theta=report.theta, theta_cr=report.theta_cr,
                   count=report.count,
                   roots=tuple(e.x for e in report.roots),
                   pairs=report.pairs, flags=report.flags)


def scan_theta(k: int, theta_lo: float, theta_hi: float, steps: int,
               grid: int = 4001) -> list[ScanRow]:
    """One row per theta on the inclusive uniform grid [theta_lo, theta_hi].

    A failed row is recorded with an error flag and an empty root list,
    never dropped.
    """
    t_cr = theta_cr(k)  # validates k
    if not 0.0 < theta_lo < theta_hi < 1.0:
        raise ValueError(f"need 0 < theta_lo < theta_hi < 1, got "
                         f"[{theta_lo}, {theta_hi}]")
    if not isinstance(steps, (int, np.integer)) or steps < 1:
        raise ValueError(f"steps must be an integer >= 1, got {steps!r}")

    rows = []
    for theta in np.linspace(theta_lo, theta_hi, num=steps):
        theta = float(theta)
        try:
            rows.append(row_from_report(find_h_roots(theta, k, grid=grid)))
        except (ValueError, ArithmeticError, BisectionError) as exc:
            rows.append(ScanRow(k=k, theta=theta, theta_cr=t_cr, count=0,
                                roots=(), pairs=(),
                                flags=(f"error:{type(exc).__name__}",)))
    return rows


def _fmt(value: float) -> str:
    return f"{value:.17g}"


def _row_fields(row: ScanRow) -> list[str]:
    x0 = x1 = x2 = ""
    extras: list[float] = []
    for r in row.roots:
        if abs(r - 1.0) <= 1e-9 and not x1:
            x1 = _fmt(r)
        elif r < 1.0 and not x0:
            x0 = _fmt(r)
        elif r > 1.0 and not x2:
            x2 = _fmt(r)
        else:
            extras.append(r)
    flags = list(row.flags)
    if extras:
        # extra roots ride in the flags column; the 8-column header is fixed
        flags.append(_OVERFLOW_PREFIX + "|".join(_fmt(r) for r in extras))
    return [str(row.k), _fmt(row.theta), _fmt(row.theta_cr), str(row.count),
            x0, x1, x2, ";".join(flags)]


def _write_bytes(destination, data: bytes) -> None:
    if isinstance(destination, (str, Path)):
        Path(destination).write_bytes(data)
        return
    write = getattr(destination, "write", None)
    if write is None:
        raise ValueError(f"cannot write to destination {destination!r}")
    try:
        write(data)
    except TypeError:  # text-mode stream
        write(data.decode("ascii"))


def emit_csv(rows, destination) -> None:
    """Write rows as CSV: header + one line per row, LF endings, 17
    significant digits per float."""
    if not rows:
        raise ValueError("no rows to emit")
    lines = [CSV_HEADER] + [",".join(_row_fields(r)) for r in rows]
    _write_bytes(destination, ("\n".join(lines) + "\n").encode("ascii"))


def emit_json(rows, destination) -> None:
    """Same schema as the CSV, as a JSON array of row objects."""
    if not rows:
        raise ValueError("no rows to emit")
    payload = [{"k": r.k, "theta": r.theta, "theta_cr": r.theta_cr,
                "count": r.count, "roots": list(r.roots),
                "pairs": [list(p) for p in r.pairs],
                "flags": list(r.flags)} for r in rows]
    _write_bytes(destination, (json.dumps(payload, indent=2) + "\n").encode("ascii"))


def parse_csv(source) -> list[ScanRow]:
    """Rebuild rows from emit_csv output.

    The 17-digit decimals parse back to the exact original floats.  Orbit
    pairs are reconstructed from the (x0, x2) columns, which is exact for
    every row the scanner emits.
    """
    if isinstance(source, (str, Path)):
        text = Path(source).read_text(encoding="ascii")
    else:
        text = source.read()
        if isinstance(text, bytes):
            text = text.decode("ascii")

    lines = [ln for ln in text.split("\n") if ln]
    if not lines or lines[0] != CSV_HEADER:
        raise ValueError("unrecognised CSV header")

    rows = []
    for ln in lines[1:]:
        parts = ln.split(",")
        if len(parts) != 8:
            raise ValueError(f"malformed row: {ln!r}")
        extras: list[float] = []
        flags: list[str] = []
        for flag in (f for f in parts[7].split(";") if f):
            if flag.startswith(_OVERFLOW_PREFIX):
                extras = [float(s) for s in
                          flag[len(_OVERFLOW_PREFIX):].split("|") if s]
            else:
                flags.append(flag)
        roots = sorted([float(p) for p in parts[4:7] if p] + extras)
        count = int(parts[3])
        if count != len(roots):
            raise ValueError(f"count column disagrees with roots: {ln!r}")
        pairs = (((float(parts[4]), float(parts[6])),)
                 if parts[4] and parts[6] else ())
        rows.append(ScanRow(k=int(parts[0]), theta=float(parts[1]),
                            theta_cr=float(parts[2]), count=count,
                            roots=tuple(roots), pairs=pairs,
                            flags=tuple(flags)))
    return rows

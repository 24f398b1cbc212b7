"""CSV formats for counts, distributions and dip scans.

All files are UTF-8 with LF line endings, rows in lexicographic order of
the outcome.  Counts use the header ``n1,...,nm,count``; distributions
``n1,...,nm,probability`` (or ``c1,c1p,...`` for click patterns).
"""
from __future__ import annotations

import csv
import io
from pathlib import Path
from typing import Mapping

from .core import IndistError, OutputDistribution
from .stats import CountsRecord


class CSVFormatError(IndistError, ValueError):
    pass


def _read_rows(path: str | Path) -> tuple[list[str], list[list[str]]]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise CSVFormatError(f"cannot read {path}: {exc}") from exc
    rows = [r for r in csv.reader(io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise CSVFormatError(f"{path} is empty")
    header = [h.strip() for h in rows[0]]
    body = rows[1:]
    for i, r in enumerate(body, start=2):
        if len(r) != len(header):
            raise CSVFormatError(f"{path}:{i}: expected {len(header)} fields, got {len(r)}")
    return header, body


def _outcome_header(header: list[str], value: str, path) -> int:
    if len(header) < 2 or header[-1] != value:
        raise CSVFormatError(f"{path}: last column must be '{value}'")
    m = len(header) - 1
    occ_names = [f"n{i}" for i in range(1, m + 1)]
    click_names = [n for i in range(1, m // 2 + 1) for n in (f"c{i}", f"c{i}p")]
    if header[:-1] != occ_names and header[:-1] != click_names:
        raise CSVFormatError(f"{path}: unexpected header {','.join(header)}")
    return m


def read_counts_csv(path: str | Path) -> CountsRecord:
    header, body = _read_rows(path)
    m = _outcome_header(header, "count", path)
    entries: dict[tuple[int, ...], int] = {}
    for i, r in enumerate(body, start=2):
        try:
            occ = tuple(int(x) for x in r[:m])
            n = int(r[m])
        except ValueError as exc:
            raise CSVFormatError(f"{path}:{i}: non-integer field") from exc
        if n < 0 or any(x < 0 for x in occ):
            raise CSVFormatError(f"{path}:{i}: negative value")
        if occ in entries:
            raise CSVFormatError(f"{path}:{i}: duplicate outcome {occ}")
        entries[occ] = n
    return CountsRecord(entries)


def read_distribution_csv(path: str | Path) -> OutputDistribution:
    header, body = _read_rows(path)
    m = _outcome_header(header, "probability", path)
    probs = {}
    for i, r in enumerate(body, start=2):
        try:
            probs[tuple(int(x) for x in r[:m])] = float(r[m])
        except ValueError as exc:
            raise CSVFormatError(f"{path}:{i}: bad number") from exc
    return OutputDistribution(probs)


def _header(width: int, clicks: bool) -> list[str]:
    if clicks:
        return [n for i in range(1, width // 2 + 1) for n in (f"c{i}", f"c{i}p")]
    return [f"n{i}" for i in range(1, width + 1)]


def format_counts_csv(c: CountsRecord, mode_count: int = 6) -> str:
    lines = [",".join(_header(mode_count, False) + ["count"])]
    for occ, n in sorted(c.entries.items()):
        lines.append(",".join(str(x) for x in occ) + f",{n}")
    return "\n".join(lines) + "\n"


def format_distribution_csv(d: Mapping, clicks: bool = False) -> str:
    keys = sorted(d)
    width = len(keys[0]) if keys else 6
    lines = [",".join(_header(width, clicks) + ["probability"])]
    for k in keys:
        lines.append(",".join(str(x) for x in k) + f",{d[k]:.15g}")
    return "\n".join(lines) + "\n"


def write_text(path: str | Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def read_dip_points(path: str | Path) -> list[tuple[float, float, float | None]]:
    """Columns ``delay,count`` with an optional ``sigma``."""
    header, body = _read_rows(path)
    if header not in (["delay", "count"], ["delay", "count", "sigma"]):
        raise CSVFormatError(f"{path}: header must be delay,count[,sigma]")
    pts = []
    for i, r in enumerate(body, start=2):
        try:
            vals = [float(x) for x in r]
        except ValueError as exc:
            raise CSVFormatError(f"{path}:{i}: bad number") from exc
        pts.append((vals[0], vals[1], vals[2] if len(vals) == 3 else None))
    return pts

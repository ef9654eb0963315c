"""Experiment reports and their CSV / JSON serializations.

CSV layout::

    # params: key=value;key=value
    col_a,col_b
    1.00000000000,2

Numbers are written with 12 significant digits; quoting follows RFC 4180
(via :mod:`csv`), lines end in CRLF. JSON is a single object with keys
``experiment, params, rows, verdict, notes``, plus ``summary`` (fitted
statistics) and ``subreports`` when present. Non-finite floats become
``null`` in JSON and an empty field in CSV.
"""

import csv
import io
import json
import math
import numbers
from dataclasses import dataclass, field

__all__ = ["VERDICTS", "ExperimentReport", "format_number", "read_csv"]

VERDICTS = ("consistent-with-quasi-greedy", "witnesses-failure", "inconclusive")


def format_number(x):
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, numbers.Integral):
        return str(int(x))
    if isinstance(x, numbers.Real):
        x = float(x)
        return format(x, ".12g") if math.isfinite(x) else ""
    if x is None:
        return ""
    return str(x)


def _jsonable(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, numbers.Integral):
        return int(x)
    if isinstance(x, numbers.Real):
        x = float(x)
        return x if math.isfinite(x) else None
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    return str(x)


@dataclass
class ExperimentReport:
    experiment: str
    params: dict
    columns: list
    rows: list = field(default_factory=list)
    verdict: str = None
    notes: str = ""
    subreports: list = field(default_factory=list)
    summary: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.verdict is not None and self.verdict not in VERDICTS:
            raise ValueError(f"unknown verdict {self.verdict!r}")
        for row in self.rows:
            self._check_row(row)

    def _check_row(self, row):
        missing = [c for c in self.columns if c not in row]
        extra = [k for k in row if k not in self.columns]
        if missing or extra:
            raise ValueError(f"row columns mismatch: missing {missing}, unexpected {extra}")

    def add_row(self, **row):
        self._check_row(row)
        self.rows.append(row)

    def column(self, name):
        return [row[name] for row in self.rows]

    def to_dict(self):
        out = {
            "experiment": self.experiment,
            "params": _jsonable(self.params),
            "rows": [_jsonable({c: row[c] for c in self.columns}) for row in self.rows],
            "verdict": self.verdict,
            "notes": self.notes,
        }
        if self.summary:
            out["summary"] = _jsonable(self.summary)
        if self.subreports:
            out["subreports"] = [r.to_dict() for r in self.subreports]
        return out

    def to_json(self):
        return json.dumps(self.to_dict(), indent=2, allow_nan=False) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        params = ";".join(f"{k}={format_number(v)}" for k, v in self.params.items())
        buf.write(f"# params: {params}\r\n")
        writer = csv.writer(buf)
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format_number(row[c]) for c in self.columns])
        return buf.getvalue()


def _parse_cell(text):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    for kind in (int, float):
        try:
            return kind(text)
        except ValueError:
            pass
    return text


def read_csv(text):
    """Parse :meth:`ExperimentReport.to_csv` output into ``(params, columns, rows)``."""
    lines = text.splitlines(keepends=True)
    if not lines or not lines[0].startswith("# params: "):
        raise ValueError("missing '# params:' header line")
    raw = lines[0][len("# params: "):].rstrip("\r\n")
    params = {}
    for item in filter(None, raw.split(";")):
        key, _, value = item.partition("=")
        params[key] = _parse_cell(value)
    reader = csv.reader(io.StringIO("".join(lines[1:])))
    columns = next(reader, [])
    rows = [dict(zip(columns, map(_parse_cell, record))) for record in reader]
    return params, columns, rows

"""Report records and their JSON / CSV serialisation."""
from __future__ import annotations

import csv
import io
import json
import math
import os
import tempfile
from dataclasses import dataclass, field

import numpy as np

__all__ = [
    "PASS",
    "FAIL",
    "WARN",
    "NOT_APPLICABLE",
    "InequalityReport",
    "decide",
    "dumps",
    "write_json",
    "write_csv",
    "SCHEMA_VERSION",
]

PASS, FAIL, WARN, NOT_APPLICABLE = "PASS", "FAIL", "WARN", "NOT_APPLICABLE"
SCHEMA_VERSION = 1


def decide(lhs, rhs, strict=False, tol=1e-9):
    """Verdict for ``lhs <= rhs`` (or ``<`` when ``strict``).

    A violation or tie no larger than ``tol`` relative to ``rhs`` is WARN:
    the discretisation cannot resolve it either way.
    """
    if (lhs < rhs * (1.0 - tol)) if strict else (lhs <= rhs):
        return PASS
    if lhs <= rhs * (1.0 + tol):
        return WARN
    return FAIL


@dataclass
class InequalityReport:
    name: str
    lhs: float
    rhs: float
    verdict: str
    convention: str | None = None
    strict: bool = False
    tolerance: float = 0.0
    admissibility: dict | None = None
    inputs: dict = field(default_factory=dict)
    surface: dict = field(default_factory=dict)
    diagnostics: dict = field(default_factory=dict)

    @property
    def ratio(self):
        if self.rhs == 0:
            return math.inf if self.lhs > 0 else math.nan
        return self.lhs / self.rhs

    @property
    def passed(self):
        """True for PASS and WARN (a tie inside the tolerance)."""
        return self.verdict in (PASS, WARN)

    def to_dict(self):
        return {
            "name": self.name,
            "inputs": self.inputs,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "ratio": self.ratio,
            "verdict": self.verdict,
            "strict": self.strict,
            "convention": self.convention,
            "tolerance": self.tolerance,
            "admissibility": self.admissibility,
            "surface": self.surface,
            "diagnostics": self.diagnostics,
        }

    def csv_row(self):
        return [self.name, self.surface.get("name", ""), _fmt(self.lhs), _fmt(self.rhs),
                _fmt(self.ratio), self.verdict, self.convention or ""]

    CSV_HEADER = ["name", "surface", "lhs", "rhs", "ratio", "verdict", "convention"]


def _fmt(x):
    x = float(x)
    if math.isnan(x):
        return "NaN"
    if math.isinf(x):
        return "Infinity" if x > 0 else "-Infinity"
    return f"{x:.17g}"


def _encode(obj, indent, level):
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if hasattr(obj, "to_dict"):
        obj = obj.to_dict()
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        # non-finite values are emitted as strings to keep the file valid JSON
        return f'"{_fmt(x)}"' if not math.isfinite(x) else _fmt(x)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_encode(str(k), indent, level + 1)}: {_encode(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        seq = list(obj)
        if not seq:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in seq]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps(obj, indent=2):
    """JSON with every float written to 17 significant digits."""
    return _encode(obj, indent, 0) + "\n"


def _atomic_write(path, text):
    d = os.path.dirname(os.path.abspath(path))
    os.makedirs(d, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".tmp-")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def write_json(path, obj):
    _atomic_write(path, dumps(obj))


def write_csv(path, header, rows):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([_fmt(v) if isinstance(v, (float, np.floating)) else v for v in row])
    _atomic_write(path, buf.getvalue())

"""CSV ingestion and emission with unit-tagged column names.

Column headers carry their unit as a suffix (``i_d_A``, ``length_um``).  The
``si`` system uses base SI units; ``lab`` uses the units customary on a
probe station (micrometres, milliamps, hertz).  Values are converted to SI on
ingest and from SI on emission, so every model sees SI numbers.
"""

from __future__ import annotations

import csv
import math
import re
import warnings
from dataclasses import dataclass
from pathlib import Path
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, IngestError

# quantity -> system -> (unit label, factor to SI)
UNITS: dict[str, dict[str, tuple[str, float]]] = {
    "voltage": {"si": ("V", 1.0), "lab": ("V", 1.0)},
    "current": {"si": ("A", 1.0), "lab": ("mA", 1e-3)},
    "length": {"si": ("m", 1.0), "lab": ("um", 1e-6)},
    "sheet": {"si": ("ohm_m", 1.0), "lab": ("ohm_cm", 1e-2)},
    "resistance": {"si": ("ohm", 1.0), "lab": ("ohm", 1.0)},
    "conductance": {"si": ("S", 1.0), "lab": ("uS", 1e-6)},
    "angular": {"si": ("rad_s", 1.0), "lab": ("hz", 2 * math.pi)},
    "time": {"si": ("s", 1.0), "lab": ("ms", 1e-3)},
    "temperature": {"si": ("K", 1.0), "lab": ("K", 1.0)},
    "power": {"si": ("W", 1.0), "lab": ("mW", 1e-3)},
    "none": {"si": ("", 1.0), "lab": ("", 1.0)},
}

SYSTEMS = ("si", "lab")
_LOCALE_DECIMAL = re.compile(r"^\s*[-+]?\d+,\d+([eE][-+]?\d+)?\s*$")


class IngestWarning(UserWarning):
    """Input data were accepted after a corrective action."""


@dataclass(frozen=True)
class Column:
    name: str
    quantity: str = "none"

    def header(self, system: str) -> str:
        unit = UNITS[self.quantity][system][0]
        return f"{self.name}_{unit}" if unit else self.name

    def factor(self, system: str) -> float:
        return UNITS[self.quantity][system][1]


def _check_system(system: str) -> None:
    if system not in SYSTEMS:
        raise ConfigError(f"unknown unit system {system!r}; choose from {', '.join(SYSTEMS)}")


def ingest_csv(path, schema: Sequence[Column], units: str = "si", strict: bool = False) -> dict[str, np.ndarray]:
    """Read a numeric CSV into SI arrays keyed by column name.

    The header must contain every schema column (with the unit suffix of the
    chosen system).  Extra columns are ignored with a warning, or rejected in
    strict mode.  Errors name the offending row (1-based, header is row 1) and
    column.
    """
    _check_system(units)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise IngestError(f"cannot read {path}: {exc}") from exc
    lines = text.splitlines()
    if not lines or not lines[0].strip():
        raise IngestError("file is empty or has no header", row=1)
    if ";" in lines[0] and "," not in lines[0]:
        raise IngestError("semicolon-separated file; locale comma decimals are not accepted, "
                          "use ',' as separator and '.' as decimal point", row=1)
    rows = list(csv.reader(lines))
    header = [h.strip() for h in rows[0]]
    if len(set(header)) != len(header):
        raise IngestError("duplicate column names in header", row=1)
    wanted = {c.header(units): c for c in schema}
    missing = [h for h in wanted if h not in header]
    if missing:
        raise IngestError(f"missing column(s) {', '.join(missing)}; header is {', '.join(header)}", row=1)
    extra = [h for h in header if h not in wanted]
    if extra:
        if strict:
            raise IngestError(f"unexpected column(s) {', '.join(extra)} in strict mode", row=1)
        warnings.warn(f"ignoring extra column(s) {', '.join(extra)}", IngestWarning, stacklevel=2)
    index = {h: header.index(h) for h in wanted}
    body = [(i, r) for i, r in enumerate(rows[1:], start=2) if any(cell.strip() for cell in r)]
    out = {c.name: np.empty(len(body)) for c in schema}
    for k, (i, r) in enumerate(body):
        if len(r) != len(header):
            hint = "; locale comma decimals are not accepted" if len(r) > len(header) else ""
            raise IngestError(f"expected {len(header)} fields, got {len(r)}{hint}", row=i)
        for h, c in wanted.items():
            cell = r[index[h]].strip()
            if _LOCALE_DECIMAL.match(cell):
                raise IngestError(f"locale comma decimal {cell!r} is not accepted; use '.'", row=i, column=h)
            try:
                v = float(cell)
            except ValueError:
                raise IngestError(f"non-numeric value {cell!r}", row=i, column=h) from None
            if not math.isfinite(v):
                raise IngestError(f"non-finite value {cell!r}", row=i, column=h)
            out[c.name][k] = v * c.factor(units)
    return out


def order_by(table: dict[str, np.ndarray], key: str, strict: bool = False) -> dict[str, np.ndarray]:
    """Sort rows by an axis column; duplicates are always rejected.

    A non-monotone axis is sorted with a warning, or rejected in strict mode.
    """
    x = table[key]
    d = np.diff(x)
    if np.all(d > 0):
        return table
    order = np.argsort(x, kind="stable")
    xs = x[order]
    if np.any(np.diff(xs) == 0):
        dup = int(order[np.flatnonzero(np.diff(xs) == 0)[0] + 1]) + 2
        raise IngestError(f"duplicate {key} value", row=dup, column=key)
    first = int(np.flatnonzero(d <= 0)[0]) + 3
    if strict:
        raise IngestError(f"{key} axis is not increasing", row=first, column=key)
    warnings.warn(f"{key} axis was not increasing; rows sorted", IngestWarning, stacklevel=2)
    return {k: v[order] for k, v in table.items()}


def format_value(v) -> str:
    if isinstance(v, (bool, np.bool_)):
        return "true" if v else "false"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, str):
        return v
    return repr(float(v))


def write_csv(path, columns: Sequence[Column], data: Mapping[str, Sequence], units: str = "si") -> Path:
    """Write SI arrays as a CSV in the chosen unit system; returns the path.

    Floats are written with repr so the output round-trips exactly and is
    byte-stable for identical inputs.
    """
    _check_system(units)
    path = Path(path)
    n = {len(data[c.name]) for c in columns}
    if len(n) > 1:
        raise ValueError("columns have different lengths")
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([c.header(units) for c in columns])
        for row in zip(*(data[c.name] for c in columns)):
            cells = []
            for c, v in zip(columns, row):
                if isinstance(v, (str, bool, np.bool_, int, np.integer)):
                    cells.append(format_value(v))
                else:
                    cells.append(format_value(float(v) / c.factor(units)))
            w.writerow(cells)
    return path


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.write_text(text)
    return path

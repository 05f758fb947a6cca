"""Self-describing CSV/JSON output records."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = "1"
RATE_COLUMNS = ("axis", "value", "mi_ab", "holevo", "rate")


def fmt(x) -> str:
    """15 significant digits for floats; ``none`` for missing values."""
    if x is None:
        return "none"
    if isinstance(x, bool):
        return str(x).lower()
    if isinstance(x, float):
        if math.isnan(x):
            return "nan"
        if math.isinf(x):
            return "inf" if x > 0 else "-inf"
        return f"{x:.15g}"
    return str(x)


def _json_value(x):
    if isinstance(x, float):
        if not math.isfinite(x):
            return fmt(x)
        return float(f"{x:.15g}")
    if isinstance(x, dict):
        return {k: _json_value(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_json_value(v) for v in x]
    return x


@dataclass
class OutputRecord:
    """
    Tabular command output plus the fully resolved parameters that produced it.

    CSV puts the metadata on leading ``#`` comment lines, followed by the
    header row and the data; JSON carries it in a ``meta`` block.
    """

    command: str
    params: dict
    columns: tuple[str, ...]
    rows: list[dict] = field(default_factory=list)

    def meta(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "command": self.command, "params": self.params}

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write(f"# schema_version={SCHEMA_VERSION}\n")
        buf.write(f"# command={self.command}\n")
        for k in sorted(self.params):
            buf.write(f"# {k}={fmt_param(self.params[k])}\n")
        buf.write(",".join(self.columns) + "\n")
        for row in self.rows:
            buf.write(",".join(fmt(row.get(c)) for c in self.columns) + "\n")
        return buf.getvalue()

    def to_json(self) -> str:
        body = {
            "meta": _json_value(self.meta()),
            "columns": list(self.columns),
            "rows": [{c: _json_value(row.get(c)) for c in self.columns} for row in self.rows],
        }
        return json.dumps(body, indent=2, sort_keys=False) + "\n"

    def render(self, fmt_name: str = "csv") -> str:
        if fmt_name == "json":
            return self.to_json()
        return self.to_csv()


def fmt_param(v) -> str:
    if isinstance(v, (list, tuple)):
        return "[" + ";".join(fmt_param(x) for x in v) + "]"
    if isinstance(v, dict):
        return "{" + ";".join(f"{k}:{fmt_param(x)}" for k, x in v.items()) + "}"
    return fmt(v)


def rate_row(axis: str, value: float, result, **extra) -> dict:
    row = {"axis": axis, "value": value, "mi_ab": result.mi_ab, "holevo": result.holevo, "rate": result.rate}
    row.update(extra)
    return row

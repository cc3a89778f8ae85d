"""Inequality-step records and deterministic JSON / CSV emission."""
from __future__ import annotations

import csv
import io
import json
import math
from dataclasses import dataclass, field

SCHEMA_VERSION = 1


@dataclass(frozen=True)
class Step:
    name: str
    lhs: float
    rhs: float
    holds: bool
    margin: float
    asserted: bool = True
    note: str = ""

    def to_json(self) -> dict:
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs, "margin": self.margin,
                "holds": self.holds, "asserted": self.asserted, "note": self.note}


def compare(name: str, lhs: float, rhs: float, *, slack: float = 1e-12, asserted: bool = True,
            note: str = "", absolute: bool = False) -> Step:
    """Record lhs <= rhs.  ``slack`` is relative to max(1, |rhs|) unless ``absolute``."""
    lhs, rhs = float(lhs), float(rhs)
    allowance = slack if absolute else slack * max(1.0, abs(rhs))
    holds = bool(lhs <= rhs + allowance) if not (math.isnan(lhs) or math.isnan(rhs)) else False
    return Step(name, lhs, rhs, holds, rhs - lhs, asserted, note)


@dataclass
class ChainReport:
    chain: str
    params: dict
    steps: list[Step] = field(default_factory=list)
    branch: str = ""
    summary: dict = field(default_factory=dict)

    def add(self, step: Step) -> Step:
        self.steps.append(step)
        return step

    @property
    def all_hold(self) -> bool:
        return all(s.holds for s in self.steps if s.asserted)

    def first_failure(self) -> Step | None:
        for s in self.steps:
            if s.asserted and not s.holds:
                return s
        return None

    def to_json(self) -> dict:
        return {"schema_version": SCHEMA_VERSION, "chain": self.chain, "params": self.params,
                "branch": self.branch, "all_hold": self.all_hold, "summary": self.summary,
                "steps": [s.to_json() for s in self.steps]}


def _fmt_json(obj) -> str:
    """JSON with floats written to 17 significant digits; key order preserved."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        if not math.isfinite(obj):
            return "null"
        return format(obj, ".17g")
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {_fmt_json(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_fmt_json(v) for v in obj) + "]"
    if hasattr(obj, "tolist"):
        return _fmt_json(obj.tolist())
    if hasattr(obj, "item"):
        return _fmt_json(obj.item())
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def dumps_json(obj) -> str:
    return _fmt_json(obj) + "\n"


def _fmt_csv(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return format(v, ".12g") if math.isfinite(v) else ""
    return str(v)


def dumps_csv(columns: list[str], rows: list[dict]) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(columns)
    for row in rows:
        wr.writerow([_fmt_csv(row.get(c)) for c in columns])
    return buf.getvalue()

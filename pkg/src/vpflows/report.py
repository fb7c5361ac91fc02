"""Deterministic run reports: JSON with 17-significant-digit floats and sorted keys."""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

INFORMATIVE = "informative"


def _plain(obj):
    """Convert numpy scalars/arrays and tuples into JSON-ready Python values."""
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return [_plain(v) for v in obj.tolist()]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        return float(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if obj is None or isinstance(obj, str):
        return obj
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _encode(v, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1))
    end = "\n" + " " * (indent * level)
    if isinstance(v, dict):
        if not v:
            return "{}"
        items = [json.dumps(k) + ": " + _encode(v[k], indent, level + 1) for k in sorted(v)]
        return "{" + pad + ("," + pad).join(items) + end + "}"
    if isinstance(v, list):
        if not v:
            return "[]"
        if all(not isinstance(x, (dict, list)) for x in v):
            return "[" + ", ".join(_encode(x, indent, level + 1) for x in v) + "]"
        return "[" + pad + ("," + pad).join(_encode(x, indent, level + 1) for x in v) + end + "]"
    if isinstance(v, bool) or v is None:
        return json.dumps(v)
    if isinstance(v, int):
        return str(v)
    if isinstance(v, float):
        if math.isnan(v):
            return '"NaN"'
        if math.isinf(v):
            return '"Infinity"' if v > 0 else '"-Infinity"'
        text = "%.17g" % v
        # keep floats floats on re-parse (otherwise -0.0 -> "-0" -> int 0)
        return text if any(c in text for c in ".en") else text + ".0"
    return json.dumps(v)


def dumps(obj, indent: int = 1) -> str:
    """Canonical JSON text; ``dumps(json.loads(dumps(x))) == dumps(x)``."""
    return _encode(_plain(obj), indent, 0) + "\n"


def digest(data: bytes | str) -> str:
    if isinstance(data, str):
        data = data.encode()
    return "sha256:" + hashlib.sha256(data).hexdigest()


@dataclass
class Block:
    """One experiment: what went in, what came out, and whether it passed."""

    name: str
    inputs: dict
    measured: dict
    expected: dict
    tolerance: dict
    passed: bool | str

    def __post_init__(self):
        if self.passed != INFORMATIVE:
            self.passed = bool(self.passed)

    def to_dict(self) -> dict:
        return {"name": self.name, "inputs": self.inputs, "measured": self.measured,
                "expected": self.expected, "tolerance": self.tolerance, "pass": self.passed}


@dataclass
class RunReport:
    tool_version: str
    command: str
    input_digest: str
    seed: int
    blocks: list[Block] = field(default_factory=list)
    series: dict[str, str] = field(default_factory=dict)

    def add(self, name, inputs, measured, expected, tolerance, passed) -> Block:
        b = Block(name, inputs, measured, expected, tolerance, passed)
        self.blocks.append(b)
        return b

    def extend(self, other: "RunReport") -> None:
        self.blocks.extend(other.blocks)
        self.series.update(other.series)

    @property
    def failed(self) -> list[str]:
        return [b.name for b in self.blocks if b.passed is False]

    @property
    def exit_code(self) -> int:
        return 1 if self.failed else 0

    def to_dict(self) -> dict:
        return {"tool_version": self.tool_version, "command": self.command, "input_digest": self.input_digest,
                "seed": self.seed, "blocks": [b.to_dict() for b in self.blocks],
                "series": sorted(self.series)}

    def to_json(self) -> str:
        return dumps(self.to_dict())

    @classmethod
    def from_json(cls, text: str) -> "RunReport":
        d = json.loads(text)
        blocks = [Block(b["name"], b["inputs"], b["measured"], b["expected"], b["tolerance"], b["pass"])
                  for b in d["blocks"]]
        rep = cls(d["tool_version"], d["command"], d["input_digest"], d["seed"], blocks)
        rep.series = {name: "" for name in d.get("series", [])}
        return rep

    def write(self, out: str | Path) -> Path:
        out = Path(out)
        (out / "series").mkdir(parents=True, exist_ok=True)
        (out / "report.json").write_text(self.to_json())
        for name, text in sorted(self.series.items()):
            (out / "series" / f"{name}.csv").write_text(text)
        return out / "report.json"


def csv_text(header: list[str], rows) -> str:
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else "%.17g" % v for v in row))
    return "\n".join(lines) + "\n"

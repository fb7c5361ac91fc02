"""Parsing of JSON model files into model objects, with path/key error reporting."""

from __future__ import annotations

import json
from pathlib import Path

from .fields import CatSuspension, FlowBoxField, Trig2D, TrigField3T
from .profiles import ScalarProfile1D
from .tube import TubeProfile

MODEL_TYPES = ("toric_tube", "flow_box", "trig_field_3t", "cat_suspension")


class ModelParseError(ValueError):
    """Model file could not be turned into a model; ``key`` is a dotted path."""

    def __init__(self, path: str, key: str, message: str):
        super().__init__(f"{path}: key '{key}': {message}")
        self.path = path
        self.key = key


def _require(d: dict, key: str, where: str, path: str):
    if not isinstance(d, dict):
        raise ModelParseError(path, where or "<root>", "expected an object")
    if key not in d:
        raise ModelParseError(path, f"{where}.{key}" if where else key, "missing required key")
    return d[key]


def _numbers(v, key: str, path: str, length: int | None = None) -> list[float]:
    if not isinstance(v, list) or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v):
        raise ModelParseError(path, key, "expected a list of numbers")
    if length is not None and len(v) != length:
        raise ModelParseError(path, key, f"expected {length} entries, got {len(v)}")
    return [float(x) for x in v]


def _number(v, key: str, path: str) -> float:
    if not isinstance(v, (int, float)) or isinstance(v, bool):
        raise ModelParseError(path, key, "expected a number")
    return float(v)


def parse_profile(d, key: str, path: str = "<memory>") -> ScalarProfile1D:
    if not isinstance(d, dict):
        raise ModelParseError(path, key, "expected a profile object")
    unknown = set(d) - {"const", "poly", "cos", "sin"}
    if unknown:
        raise ModelParseError(path, f"{key}.{sorted(unknown)[0]}", "unknown profile key")
    try:
        return ScalarProfile1D(
            _number(d.get("const", 0.0), f"{key}.const", path),
            tuple(_numbers(d.get("poly", []), f"{key}.poly", path)),
            tuple(_numbers(d.get("cos", []), f"{key}.cos", path)),
            tuple(_numbers(d.get("sin", []), f"{key}.sin", path)),
        )
    except ModelParseError:
        raise
    except ValueError as exc:
        raise ModelParseError(path, key, str(exc)) from exc


def parse_trig2d(d, key: str, path: str) -> Trig2D:
    if not isinstance(d, dict):
        raise ModelParseError(path, key, "expected a trigonometric-sum object")
    terms = d.get("terms", [])
    if not isinstance(terms, list):
        raise ModelParseError(path, f"{key}.terms", "expected a list of [k, l, a, b]")
    rows = [_numbers(t, f"{key}.terms[{i}]", path, 4) for i, t in enumerate(terms)]
    try:
        return Trig2D(_number(d.get("const", 0.0), f"{key}.const", path), tuple(tuple(r) for r in rows))
    except ValueError as exc:
        raise ModelParseError(path, f"{key}.terms", str(exc)) from exc


def model_from_dict(d: dict, path: str = "<memory>"):
    kind = _require(d, "type", "", path)
    if kind not in MODEL_TYPES:
        raise ModelParseError(path, "type", f"unknown model type {kind!r}; expected one of {MODEL_TYPES}")
    try:
        if kind == "toric_tube":
            F = parse_profile(_require(d, "F", "", path), "F", path)
            G = parse_profile(_require(d, "G", "", path), "G", path)
            start = _numbers(d.get("class_start", [0.0, 0.0]), "class_start", path, 2)
            off = _numbers(d.get("frame_offset", [1, 0]), "frame_offset", path, 2)
            if any(int(v) != v for v in off):
                raise ModelParseError(path, "frame_offset", "entries must be integers")
            return TubeProfile(F, G, tuple(start), (int(off[0]), int(off[1])))
        if kind == "flow_box":
            return FlowBoxField(_number(d.get("delta", 1.0), "delta", path))
        if kind == "trig_field_3t":
            return TrigField3T(*(parse_trig2d(_require(d, k, "", path), k, path) for k in ("fx", "fy", "fz")))
        M = _require(d, "M", "", path)
        if not isinstance(M, list) or len(M) != 2:
            raise ModelParseError(path, "M", "expected a 2x2 integer matrix")
        rows = [_numbers(r, f"M[{i}]", path, 2) for i, r in enumerate(M)]
        roof = parse_trig2d(d.get("roof", {"const": 1.0}), "roof", path)
        return CatSuspension(tuple(tuple(int(v) for v in r) for r in rows), roof)
    except ModelParseError:
        raise
    except ValueError as exc:
        raise ModelParseError(path, kind, str(exc)) from exc


def load_model(path: str | Path):
    path = str(path)
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise ModelParseError(path, "<file>", f"cannot read: {exc.strerror}") from exc
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelParseError(path, f"<line {exc.lineno} col {exc.colno}>", exc.msg) from exc
    return model_from_dict(data, path)


def tube_to_dict(tp: TubeProfile) -> dict:
    return {"type": "toric_tube", "F": tp.F.to_dict(), "G": tp.G.to_dict(),
            "class_start": list(tp.class_start), "frame_offset": list(tp.frame_offset)}

"""Problem instances: JSON schema, parsing and deterministic serialization.

Instance layout::

    {
      "weights": [a_1, ..., a_N],
      "pairs": [{"x": [...], "y": [...]}, ...],
      "base_index": 0,                 # optional
      "queries": [[...], ...],         # optional
      "tol": {"isometry": 1e-9, "rank": 1e-8, "membership": 1e-8},   # optional
      "seed": 7,                       # optional, recorded by generators
      "generator": {...},              # optional, free-form provenance
      "meta": {...}                    # optional, written by the CLI, ignored
    }
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import jsonschema
import numpy as np

from .extension import ISOMETRY_TOL
from .pointset import PairedSample
from .space import Weights
from .span import MEMBERSHIP_TOL, RANK_TOL

__all__ = ["SCHEMA", "SchemaError", "ProblemInstance", "dumps", "DEFAULT_TOL"]

DEFAULT_TOL = {"isometry": ISOMETRY_TOL, "rank": RANK_TOL, "membership": MEMBERSHIP_TOL}

_vector = {"type": "array", "items": {"type": "number"}, "minItems": 1}

SCHEMA = {
    "type": "object",
    "required": ["weights", "pairs"],
    "additionalProperties": False,
    "properties": {
        "weights": {
            "type": "array",
            "minItems": 1,
            "items": {"type": "number", "exclusiveMinimum": 0},
        },
        "pairs": {
            "type": "array",
            "minItems": 1,
            "items": {
                "type": "object",
                "required": ["x", "y"],
                "additionalProperties": False,
                "properties": {"x": _vector, "y": _vector},
            },
        },
        "base_index": {"type": "integer", "minimum": 0},
        "queries": {"type": "array", "items": _vector},
        "tol": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                k: {"type": "number", "exclusiveMinimum": 0}
                for k in ("isometry", "rank", "membership")
            },
        },
        "seed": {"type": "integer"},
        "generator": {"type": "object"},
        "meta": {"type": "object"},
    },
}


class SchemaError(ValueError):
    """The document does not describe a valid problem instance."""


@dataclass
class ProblemInstance:
    weights: list
    pairs: list  # [(x, y), ...]
    base_index: int = 0
    queries: list = field(default_factory=list)
    tol: dict = field(default_factory=dict)
    seed: int | None = None
    generator: dict | None = None

    @classmethod
    def from_dict(cls, doc) -> "ProblemInstance":
        try:
            jsonschema.validate(doc, SCHEMA)
        except jsonschema.ValidationError as exc:
            path = "/".join(str(p) for p in exc.absolute_path)
            raise SchemaError(f"{path or '<root>'}: {exc.message}") from None
        n = len(doc["weights"])
        for k, pair in enumerate(doc["pairs"]):
            for key in ("x", "y"):
                if len(pair[key]) != n:
                    raise SchemaError(f"pairs/{k}/{key}: expected {n} coordinates")
        for k, qv in enumerate(doc.get("queries", [])):
            if len(qv) != n:
                raise SchemaError(f"queries/{k}: expected {n} coordinates")
        base = doc.get("base_index", 0)
        if base >= len(doc["pairs"]):
            raise SchemaError(f"base_index {base} out of range")
        return cls(
            weights=list(doc["weights"]),
            pairs=[(list(p["x"]), list(p["y"])) for p in doc["pairs"]],
            base_index=base,
            queries=[list(qv) for qv in doc.get("queries", [])],
            tol=dict(doc.get("tol", {})),
            seed=doc.get("seed"),
            generator=doc.get("generator"),
        )

    @classmethod
    def loads(cls, text: str) -> "ProblemInstance":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SchemaError(f"invalid JSON: {exc}") from None
        return cls.from_dict(doc)

    def to_dict(self) -> dict:
        doc = {
            "weights": [float(v) for v in self.weights],
            "pairs": [
                {"x": [float(v) for v in x], "y": [float(v) for v in y]}
                for x, y in self.pairs
            ],
            "base_index": int(self.base_index),
        }
        if self.queries:
            doc["queries"] = [[float(v) for v in qv] for qv in self.queries]
        if self.tol:
            doc["tol"] = dict(self.tol)
        if self.seed is not None:
            doc["seed"] = int(self.seed)
        if self.generator is not None:
            doc["generator"] = self.generator
        return doc

    def tolerances(self, isometry: float | None = None) -> dict:
        tol = dict(DEFAULT_TOL)
        tol.update(self.tol)
        if isometry is not None:
            tol["isometry"] = isometry
        return tol

    def weights_obj(self) -> Weights:
        return Weights(self.weights)

    def sample(self) -> PairedSample:
        return PairedSample(
            self.weights_obj(),
            [x for x, _ in self.pairs],
            [y for _, y in self.pairs],
            base_index=self.base_index,
        )


def _encode(obj, out: list) -> None:
    if isinstance(obj, dict):
        out.append("{")
        for k, (key, val) in enumerate(obj.items()):
            if k:
                out.append(", ")
            out.append(json.dumps(str(key)))
            out.append(": ")
            _encode(val, out)
        out.append("}")
    elif isinstance(obj, (list, tuple)):
        out.append("[")
        for k, val in enumerate(obj):
            if k:
                out.append(", ")
            _encode(val, out)
        out.append("]")
    elif isinstance(obj, np.ndarray):
        _encode(obj.tolist(), out)
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        x = float(obj)
        out.append(format(x, ".17g") if math.isfinite(x) else "null")
    elif obj is None:
        out.append("null")
    else:
        out.append(json.dumps(str(obj)))


def dumps(obj) -> str:
    """JSON text with every float written to 17 significant digits."""
    out: list = []
    _encode(obj, out)
    return "".join(out)

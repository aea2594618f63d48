"""JSON matrix bundles.

Format::

    {"dim": n,
     "matrices": {"name": [[row], ...], ...},
     "tags": {"name": "p0", ...}}

Floats are written with 17 significant digits so every matrix re-loads
bit-for-bit.  Extra top-level keys are ignored on load, which lets CLI
reports double as bundles.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DimensionMismatch, NonFinite, ParseError

GENERATOR_TAGS = ("p0", "p1", "p2", "p3", "l1", "l2", "l3", "k1", "k2", "k3")
ROLE_TAGS = GENERATOR_TAGS + ("structure", "structure2", "density", "projector",
                              "generator", "operator")


@dataclass
class MatrixBundle:
    dim: int
    matrices: dict = field(default_factory=dict)
    tags: dict = field(default_factory=dict)

    def __post_init__(self):
        for name, m in self.matrices.items():
            m = np.asarray(m, dtype=float)
            if m.shape != (self.dim, self.dim):
                raise DimensionMismatch(f"matrix {name!r} has shape {m.shape}, expected "
                                        f"({self.dim}, {self.dim})")
            if not np.all(np.isfinite(m)):
                raise NonFinite(f"matrix {name!r} has non-finite entries")
            self.matrices[name] = m
        for name in self.tags:
            if name not in self.matrices:
                raise ParseError(f"tag refers to unknown matrix {name!r}")

    def tagged(self, *tags: str) -> dict:
        return {n: m for n, m in self.matrices.items() if self.tags.get(n) in tags}

    def untagged(self) -> dict:
        return {n: m for n, m in self.matrices.items() if n not in self.tags}

    def generators(self) -> dict:
        """Matrices carrying a Poincare generator label, keyed by that label."""
        out = {}
        for name, m in self.matrices.items():
            tag = self.tags.get(name)
            if tag in GENERATOR_TAGS:
                if tag in out:
                    raise ParseError(f"generator label {tag!r} used twice")
                out[tag] = m
        return out

    @property
    def is_poincare(self) -> bool:
        return bool(self.generators())


def _fmt(x: float) -> str:
    x = float(x)
    if not math.isfinite(x):
        raise NonFinite("cannot serialise a non-finite float")
    if x == int(x) and abs(x) < 1e16:
        return repr(float(x))
    return format(x, ".17g")


def dumps(obj, indent: int = 0) -> str:
    """Deterministic JSON writer with 17-significant-digit floats."""
    pad = "  " * indent
    inner = "  " * (indent + 1)
    if isinstance(obj, np.ndarray):
        obj = obj.tolist()
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{inner}{json.dumps(str(k))}: {dumps(v, indent + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + pad + "}"
    if isinstance(obj, (list, tuple)):
        if obj and all(isinstance(r, (list, tuple)) and all(
                isinstance(x, (int, float, np.floating, np.integer)) and not isinstance(x, bool)
                for x in r) for r in obj):
            rows = [f"{inner}[" + ", ".join(_fmt(x) for x in r) + "]" for r in obj]
            return "[\n" + ",\n".join(rows) + "\n" + pad + "]"
        return "[" + ", ".join(dumps(v, indent + 1) for v in obj) + "]"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if obj is None:
        return "null"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _fmt(obj)
    if hasattr(obj, "value"):
        return json.dumps(str(obj.value))
    return json.dumps(str(obj))


def bundle_to_dict(bundle: MatrixBundle) -> dict:
    return {"dim": bundle.dim, "matrices": dict(bundle.matrices), "tags": dict(bundle.tags)}


def save_bundle(bundle: MatrixBundle, path) -> None:
    Path(path).write_text(dumps(bundle_to_dict(bundle)) + "\n")


def parse_bundle(text: str, source: str = "<string>") -> MatrixBundle:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}: line {exc.lineno} column {exc.colno}: {exc.msg}") from exc
    if not isinstance(data, dict):
        raise ParseError(f"{source}: top level must be an object")
    if "dim" not in data or not isinstance(data["dim"], int) or isinstance(data["dim"], bool) \
            or data["dim"] <= 0:
        raise ParseError(f"{source}: field 'dim' must be a positive integer")
    dim = data["dim"]
    raw = data.get("matrices", {})
    if not isinstance(raw, dict):
        raise ParseError(f"{source}: field 'matrices' must be an object")
    matrices = {}
    for name, rows in raw.items():
        if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
            raise ParseError(f"{source}: matrix {name!r} must be a list of rows")
        lengths = {len(r) for r in rows}
        if len(lengths) > 1:
            raise ParseError(f"{source}: matrix {name!r} has ragged rows (lengths {sorted(lengths)})")
        for r in rows:
            for x in r:
                if isinstance(x, bool) or not isinstance(x, (int, float)):
                    raise ParseError(f"{source}: matrix {name!r} has a non-numeric entry {x!r}")
        m = np.array(rows, dtype=float).reshape(len(rows), lengths.pop() if lengths else 0)
        if not np.all(np.isfinite(m)):
            raise NonFinite(f"{source}: matrix {name!r} has non-finite entries")
        matrices[name] = m
    tags = data.get("tags", {})
    if not isinstance(tags, dict) or not all(isinstance(v, str) for v in tags.values()):
        raise ParseError(f"{source}: field 'tags' must map names to strings")
    return MatrixBundle(dim, matrices, dict(tags))


def load_bundle(path) -> MatrixBundle:
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from exc
    return parse_bundle(text, str(path))

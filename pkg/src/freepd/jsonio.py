"""JSON serialization helpers shared by the file formats.

Complex numbers are stored as [re, im] pairs and complex matrices as
nested lists of those pairs.  Floats round-trip exactly (shortest-repr
formatting), so a value written and re-read is bit-identical, and the
same document always serializes to the same bytes.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np


class SchemaError(ValueError):
    """A document does not conform to its declared schema."""


def matrix_to_json(A: np.ndarray) -> list:
    M = np.asarray(A, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in M]


def matrix_from_json(rows, shape: tuple[int, int] | None = None) -> np.ndarray:
    try:
        M = np.array(
            [[complex(float(p[0]), float(p[1])) for p in row] for row in rows],
            dtype=complex,
        )
        if M.ndim == 1:
            M = M.reshape(0, 0) if M.size == 0 else M
    except (TypeError, ValueError, IndexError) as exc:
        raise SchemaError(f"malformed complex matrix: {exc}") from exc
    if M.ndim != 2:
        raise SchemaError(f"malformed complex matrix of shape {M.shape}")
    if shape is not None and M.shape != tuple(shape):
        raise SchemaError(f"matrix has shape {M.shape}, expected {shape}")
    if not np.all(np.isfinite(M.view(float))):
        raise SchemaError("matrix contains non-finite entries")
    return M


def word_to_json(word) -> list[int]:
    return [int(x) for x in word]


def word_from_json(obj, m: int):
    if not isinstance(obj, list) or not all(
        isinstance(x, int) and x != 0 and abs(x) <= m for x in obj
    ):
        raise SchemaError(f"malformed word {obj!r} for m = {m}")
    return tuple(obj)


def dumps(doc: dict) -> str:
    """Canonical serialization: stable key order, compact, newline-terminated."""
    return json.dumps(doc, indent=1) + "\n"


def dump_path(path, doc: dict):
    Path(path).write_text(dumps(doc), encoding="utf-8")


def load_path(path) -> dict:
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON in {path}: {exc}") from exc
    if not isinstance(doc, dict):
        raise SchemaError(f"top-level JSON value in {path} must be an object")
    return doc


def expect_schema(doc: dict, name: str):
    if doc.get("schema") != name:
        raise SchemaError(f"expected schema {name!r}, got {doc.get('schema')!r}")


def require(doc: dict, key: str):
    if key not in doc:
        raise SchemaError(f"missing required key {key!r}")
    return doc[key]

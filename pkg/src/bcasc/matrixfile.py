"""``.bcasc.json`` matrix files.

Layout::

    {
      "schema_version": "bcasc-1",
      "n": 2,
      "m": 2,
      "field": "complex",
      "columns": [
        [[1.0, 0.0], [0.0, 0.0]],
        [[0.0, 0.0], [1.0, 0.0]]
      ],
      "metadata": {"coherence": 0.0, "config_digest": "...", "tool_version": "0.1.0", "rng_seed": 7}
    }

Each column is a list of ``[re, im]`` pairs. Floats are written with Python's
shortest round-trip repr, so parse(serialize(code)) reproduces every bit.
"""
from __future__ import annotations

import json
import math
from pathlib import Path

import numpy as np

from . import __version__
from .codes import CodeError, Field, SphericalCode, coherence_value

SCHEMA_VERSION = "bcasc-1"
SUFFIX = ".bcasc.json"


class MatrixFileError(ValueError):
    pass


def _dump(x) -> str:
    return json.dumps(x, allow_nan=False)


def serialize(code: SphericalCode, metadata: dict | None = None) -> str:
    meta = {
        "coherence": coherence_value(code.entries) if code.m > 1 else 0.0,
        "config_digest": "",
        "tool_version": __version__,
        "rng_seed": None,
    }
    meta.update(metadata or {})
    a = code.entries
    cols = [
        "    [" + ", ".join(f"[{float(z.real)!r}, {float(z.imag)!r}]" for z in a[:, j]) + "]"
        for j in range(code.m)
    ]
    lines = [
        "{",
        f'  "schema_version": {_dump(SCHEMA_VERSION)},',
        f'  "n": {code.n},',
        f'  "m": {code.m},',
        f'  "field": {_dump(code.field.value)},',
        '  "columns": [',
        ",\n".join(cols),
        "  ],",
        f'  "metadata": {_dump(meta)}',
        "}",
    ]
    return "\n".join(lines) + "\n"


def _is_int(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def _is_num(x) -> bool:
    return (isinstance(x, (int, float)) and not isinstance(x, bool)) and math.isfinite(x)


def parse_document(doc) -> tuple[SphericalCode, dict]:
    if not isinstance(doc, dict):
        raise MatrixFileError("top level must be a JSON object")
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise MatrixFileError(f"schema_version must be {SCHEMA_VERSION!r}, got {doc.get('schema_version')!r}")
    n, m = doc.get("n"), doc.get("m")
    if not _is_int(n) or n < 1:
        raise MatrixFileError(f"n must be a positive integer, got {n!r}")
    if not _is_int(m) or m < 1:
        raise MatrixFileError(f"m must be a positive integer, got {m!r}")
    try:
        field = Field(doc.get("field"))
    except ValueError:
        raise MatrixFileError(f"field must be 'complex' or 'real', got {doc.get('field')!r}") from None
    cols = doc.get("columns")
    if not isinstance(cols, list) or len(cols) != m:
        raise MatrixFileError(f"columns must be a list of m={m} columns")
    a = np.empty((n, m), dtype=np.complex128)
    for j, col in enumerate(cols):
        if not isinstance(col, list) or len(col) != n:
            raise MatrixFileError(f"column {j} must hold n={n} entries")
        for i, z in enumerate(col):
            if not (isinstance(z, list) and len(z) == 2 and _is_num(z[0]) and _is_num(z[1])):
                raise MatrixFileError(f"entry ({i}, {j}) must be a pair [re, im] of finite numbers")
            a[i, j] = complex(float(z[0]), float(z[1]))
    if field is Field.REAL and np.any(a.imag != 0):
        j = int(np.argmax(np.any(a.imag != 0, axis=0)))
        raise MatrixFileError(f"real field but non-zero imaginary part in column {j}")
    meta = doc.get("metadata", {})
    if not isinstance(meta, dict):
        raise MatrixFileError("metadata must be an object")
    try:
        code = SphericalCode(a, field)
    except CodeError as exc:
        raise MatrixFileError(str(exc)) from None
    return code, meta


def parse(text: str) -> tuple[SphericalCode, dict]:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MatrixFileError(f"not valid JSON: {exc}") from None
    return parse_document(doc)


def write(path, code: SphericalCode, metadata: dict | None = None) -> None:
    Path(path).write_text(serialize(code, metadata), encoding="utf-8")


def read(path) -> tuple[SphericalCode, dict]:
    return parse(Path(path).read_text(encoding="utf-8"))

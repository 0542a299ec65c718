"""Deterministic random fields and atomic full-precision CSV/JSON writers."""

from __future__ import annotations

import json
import math
import os
import tempfile
from pathlib import Path

import numpy as np

from .grid import DomainGrid, Field

LCG_MULTIPLIER = 6364136223846793005
LCG_INCREMENT = 1442695040888963407
_MASK64 = (1 << 64) - 1


class Lcg64:
    """64-bit linear congruential generator; uniforms use the top 53 bits.

    Each draw advances ``state = state * 6364136223846793005 + 1442695040888963407 (mod 2^64)``
    and returns ``(state >> 11) / 2^53``, so streams are reproducible in any language.
    """

    def __init__(self, seed: int):
        self.state = int(seed) & _MASK64

    def next_u64(self) -> int:
        self.state = (self.state * LCG_MULTIPLIER + LCG_INCREMENT) & _MASK64
        return self.state

    def uniform(self) -> float:
        return (self.next_u64() >> 11) * (1.0 / (1 << 53))

    def uniforms(self, n: int) -> np.ndarray:
        return np.array([self.uniform() for _ in range(n)])


def random_field(grid: DomainGrid, rng: Lcg64) -> Field:
    """Values uniform in [-1, 1), drawn node by node."""
    return Field(grid, 2.0 * rng.uniforms(grid.n_nodes) - 1.0)


def fmt(x) -> str:
    if isinstance(x, (bool, np.bool_)):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".17g")


def _json(obj, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None:
        return "null"
    if isinstance(obj, (bool, np.bool_)):
        return "true" if obj else "false"
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        if not math.isfinite(obj):
            return "null"
        return format(float(obj), ".17g")
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{_json(str(k), indent, level + 1)}: {_json(v, indent, level + 1)}" for k, v in obj.items()]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple, np.ndarray)):
        if len(obj) == 0:
            return "[]"
        items = [pad + _json(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    """JSON text with every float written to 17 significant digits; non-finite floats become null."""
    return _json(obj, indent, 0) + "\n"


def write_text_atomic(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise
    return path


def write_csv(path, header, rows) -> int:
    lines = [",".join(header)]
    lines.extend(",".join(fmt(v) for v in row) for row in rows)
    write_text_atomic(path, "\n".join(lines) + "\n")
    return len(lines) - 1


def write_json(path, obj) -> None:
    write_text_atomic(path, dumps(obj))


def field_rows(f: Field):
    for n, (x, v) in enumerate(zip(f.grid.nodes, f.values)):
        yield (n, *x, v)


def field_header(grid: DomainGrid) -> list:
    return ["node_index", *(f"x{d + 1}" for d in range(grid.dimension)), "value"]


def write_field_csv(path, f: Field) -> int:
    return write_csv(path, field_header(f.grid), field_rows(f))


def write_operator_csv(path, entries: np.ndarray) -> int:
    """Lower triangle (diagonal included) as ``row,col,value``."""
    rows, cols = np.tril_indices(entries.shape[0])
    return write_csv(path, ["row", "col", "value"], zip(rows, cols, entries[rows, cols]))

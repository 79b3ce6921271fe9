"""Self-describing JSON documents for vectors, 2-forms, planes and frames.

Numbers are stored as strings, either 17-significant-digit decimals (the
default) or hex floats, so every document round-trips bit-exactly.  A file
or stream may hold several documents back to back.
"""
from __future__ import annotations

import json
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

SHAPES = {"vector7": (7,), "skew7": (7, 7), "plane3": (3, 7), "frame7": (7, 7)}
FORMATS = ("dec", "hex")


class DocumentError(ValueError):
    pass


def encode_number(x: float, fmt: str = "dec") -> str:
    if fmt == "hex":
        return float(x).hex()
    if fmt == "dec":
        return format(float(x), ".17g")
    raise ValueError(f"unknown number format {fmt!r}")


def decode_number(s) -> float:
    if isinstance(s, (int, float)):
        return float(s)
    s = s.strip()
    return float.fromhex(s) if "0x" in s.lower() else float(s)


@dataclass(frozen=True)
class MatrixDocument:
    kind: str
    data: np.ndarray
    label: str | None = None
    seed: int | None = None

    def __post_init__(self):
        if self.kind not in SHAPES:
            raise DocumentError(f"unknown kind {self.kind!r}")
        data = np.array(self.data, dtype=float)
        if data.shape != SHAPES[self.kind]:
            raise DocumentError(f"{self.kind} needs shape {SHAPES[self.kind]}, got {data.shape}")
        if not np.all(np.isfinite(data)):
            raise DocumentError("non-finite entries")
        if self.kind == "skew7":
            dev = np.abs(data + data.T).max()
            if dev > 1e-9 * max(np.linalg.norm(data), 1e-300):
                raise DocumentError(f"skew7 payload is not skew (asymmetry {dev:.3e})")
        if self.kind == "plane3" and np.linalg.matrix_rank(data, tol=1e-10 * max(np.abs(data).max(), 1e-300)) < 3:
            raise DocumentError("plane3 rows are linearly dependent")
        data.setflags(write=False)
        object.__setattr__(self, "data", data)

    def to_dict(self, fmt: str = "dec") -> dict:
        out = {"kind": self.kind, "shape": list(self.data.shape), "format": fmt,
               "data": [encode_number(x, fmt) for x in self.data.ravel()]}
        if self.label is not None:
            out["label"] = self.label
        if self.seed is not None:
            out["seed"] = int(self.seed)
        return out

    @classmethod
    def from_dict(cls, obj: dict) -> "MatrixDocument":
        try:
            kind = obj["kind"]
            values = [decode_number(s) for s in obj["data"]]
        except (KeyError, TypeError, ValueError) as exc:
            raise DocumentError(f"malformed document: {exc}") from exc
        shape = tuple(obj.get("shape", SHAPES.get(kind, ())))
        if kind in SHAPES and shape != SHAPES[kind]:
            raise DocumentError(f"declared shape {shape} does not match kind {kind}")
        if len(values) != int(np.prod(shape)):
            raise DocumentError("data length does not match shape")
        return cls(kind, np.array(values).reshape(shape), obj.get("label"), obj.get("seed"))


def dumps(docs, fmt: str = "dec") -> str:
    if isinstance(docs, MatrixDocument):
        docs = [docs]
    return "".join(json.dumps(d.to_dict(fmt), indent=1) + "\n" for d in docs)


def loads(text: str) -> list[MatrixDocument]:
    decoder = json.JSONDecoder()
    docs, pos = [], 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            return docs
        try:
            obj, pos = decoder.raw_decode(text, pos)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"invalid JSON: {exc}") from exc
        docs.append(MatrixDocument.from_dict(obj))


def read_documents(source) -> list[MatrixDocument]:
    """Read from a path, or standard input when ``source`` is None or '-'."""
    if source in (None, "-"):
        return loads(sys.stdin.read())
    return loads(Path(source).read_text())


def write_documents(docs, target=None, fmt: str = "dec") -> None:
    text = dumps(docs, fmt)
    if target in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(target).write_text(text)

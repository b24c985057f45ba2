"""Deterministic table and JSON writers plus operator/state dumps.

Data tables are written with 17 significant digits, '.' decimal separator,
a mandatory header row, and '\\n' line endings, so identical inputs produce
byte-identical files.
"""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .operators import Basis, RingOperator, RingState


def fmt17(x) -> str:
    return format(float(x), ".17g")


def write_table(path, columns: dict, output_format: str = "csv") -> Path:
    """Write named columns of equal length as CSV (or a JSON mirror)."""
    path = Path(path)
    names = list(columns)
    arrays = [np.asarray(columns[name]).ravel() for name in names]
    lengths = {len(a) for a in arrays}
    if len(lengths) != 1:
        raise ValueError("all columns must have the same length")
    if output_format == "csv":
        lines = [",".join(names)]
        for row in zip(*arrays):
            lines.append(",".join(fmt17(v) for v in row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    elif output_format == "json":
        doc = {name: [float(v) for v in a] for name, a in zip(names, arrays)}
        write_json(path, doc)
    else:
        raise ValueError(f"unknown output format {output_format!r}")
    return path


def read_table(path) -> dict:
    """Read a CSV written by ``write_table`` back into float arrays."""
    lines = Path(path).read_text(encoding="utf-8").strip().split("\n")
    names = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    data = np.array(rows, dtype=float) if rows else np.empty((0, len(names)))
    return {name: data[:, i] for i, name in enumerate(names)}


def write_json(path, obj) -> Path:
    path = Path(path)
    path.write_text(json.dumps(obj, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


def _complex_pairs(values: np.ndarray):
    return [[float(v.real), float(v.imag)] for v in values]


def operator_to_dict(op: RingOperator) -> dict:
    return {
        "label": op.label,
        "basis": {"l_max": op.basis.l_max, "twist": op.basis.twist},
        "matrix": [_complex_pairs(row) for row in op.matrix],
    }


def operator_from_dict(doc: dict) -> RingOperator:
    basis = Basis(doc["basis"]["l_max"], doc["basis"]["twist"])
    mat = np.array([[complex(re, im) for re, im in row] for row in doc["matrix"]])
    return RingOperator(mat, basis, doc.get("label", ""))


def state_to_dict(state: RingState) -> dict:
    return {
        "label": state.label,
        "basis": {"l_max": state.basis.l_max, "twist": state.basis.twist},
        "coeffs": _complex_pairs(state.coeffs),
    }


def state_from_dict(doc: dict) -> RingState:
    basis = Basis(doc["basis"]["l_max"], doc["basis"]["twist"])
    coeffs = np.array([complex(re, im) for re, im in doc["coeffs"]])
    return RingState(coeffs, basis, doc.get("label", ""))


def dump_operator(op: RingOperator, path) -> Path:
    return write_json(path, operator_to_dict(op))


def load_operator(path) -> RingOperator:
    with open(path, "r", encoding="utf-8") as fh:
        return operator_from_dict(json.load(fh))


def dump_state(state: RingState, path) -> Path:
    return write_json(path, state_to_dict(state))


def load_state(path) -> RingState:
    with open(path, "r", encoding="utf-8") as fh:
        return state_from_dict(json.load(fh))

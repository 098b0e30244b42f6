"""Reading and writing system files and pencils (JSON, complex entries as ``[re, im]``)."""

from __future__ import annotations

import json
import math
from importlib import resources
from pathlib import Path

import jsonschema
import numpy as np

from .errors import ValidationError
from .fiedler import BlockPencil
from .polymat import MatrixPoly
from .system import StateSpaceSystem

__all__ = ["load_system", "system_from_dict", "system_to_dict", "dump_system",
           "pencil_to_dict", "pencil_from_dict", "dump_pencil", "load_pencil",
           "encode_matrix", "decode_matrix", "SCHEMA"]

SCHEMA = json.loads(resources.files("fiedlersys").joinpath("data/system.schema.json").read_text())


def _reject_constant(token):
    raise ValidationError(f"non-finite number {token} in input")


def encode_matrix(mat) -> list:
    mat = np.asarray(mat, dtype=complex)
    return [[[float(v.real), float(v.imag)] for v in row] for row in mat]


def decode_matrix(rows, shape, name) -> np.ndarray:
    rows = list(rows)
    if shape[0] == 0 or shape[1] == 0:
        if any(len(r) for r in rows):
            raise ValidationError(f"{name}: expected an empty {shape} matrix")
        return np.zeros(shape, dtype=complex)
    if len(rows) != shape[0] or any(len(r) != shape[1] for r in rows):
        raise ValidationError(f"{name}: expected shape {shape}")
    out = np.empty(shape, dtype=complex)
    for i, row in enumerate(rows):
        for j, v in enumerate(row):
            re, im = (v, 0.0) if isinstance(v, (int, float)) else v
            if not (math.isfinite(re) and math.isfinite(im)):
                raise ValidationError(f"{name}[{i}][{j}] is not finite")
            out[i, j] = complex(re, im)
    return out


def system_from_dict(data: dict, check_regular: bool = True) -> StateSpaceSystem:
    try:
        jsonschema.validate(data, SCHEMA)
    except jsonschema.ValidationError as exc:
        raise ValidationError(f"system file: {exc.message}") from None
    n, r, m = data["n"], data["r"], data["m"]
    if len(data["A"]) != m + 1:
        raise ValidationError(f"expected m+1 = {m + 1} coefficients, got {len(data['A'])}")
    coeffs = [decode_matrix(a, (n, n), f"A[{j}]") for j, a in enumerate(data["A"])]
    B = decode_matrix(data.get("B", []), (n, r), "B")
    C = decode_matrix(data.get("C", []), (r, n), "C")
    D = decode_matrix(data.get("D", []), (r, r), "D")
    return StateSpaceSystem(MatrixPoly(coeffs), B, C, D, name=data.get("name", ""),
                            check_regular=check_regular)


def load_system(path, check_regular: bool = True) -> StateSpaceSystem:
    text = Path(path).read_text(encoding="utf-8")
    try:
        data = json.loads(text, parse_constant=_reject_constant)
    except json.JSONDecodeError as exc:
        raise ValidationError(f"{path}: {exc}") from None
    return system_from_dict(data, check_regular)


def system_to_dict(sys: StateSpaceSystem, seed: int | None = None) -> dict:
    out = {"n": sys.n, "r": sys.r, "m": sys.m,
           "A": [encode_matrix(a) for a in sys.P.coeffs],
           "B": encode_matrix(sys.B), "C": encode_matrix(sys.C), "D": encode_matrix(sys.D)}
    if sys.name:
        out["name"] = sys.name
    if seed is not None:
        out["seed"] = seed
    return out


def dump_system(sys: StateSpaceSystem, path, seed: int | None = None) -> None:
    Path(path).write_text(json.dumps(system_to_dict(sys, seed), indent=1) + "\n", encoding="utf-8")


def _plain(obj):
    if isinstance(obj, dict):
        return {str(k): _plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_plain(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    return obj


def _tuplify(obj):
    # metadata tuples come back from JSON as lists
    if isinstance(obj, list):
        return tuple(_tuplify(v) for v in obj)
    return obj


def pencil_to_dict(pencil: BlockPencil, extra: dict | None = None) -> dict:
    out = {"n": pencil.n, "m": pencil.m, "r": pencil.r, "label": pencil.label,
           "block_sizes": list(map(int, pencil.block_sizes)),
           "meta": _plain(pencil.meta), "tags": dict(pencil.tags),
           "T": encode_matrix(pencil.T), "N": encode_matrix(pencil.N)}
    if extra:
        out.update(_plain(extra))
    return out


def pencil_from_dict(data: dict) -> BlockPencil:
    n, m, r = int(data["n"]), int(data["m"]), int(data["r"])
    dim = n * m + r
    meta = {k: _tuplify(v) for k, v in data.get("meta", {}).items()}
    return BlockPencil(decode_matrix(data["T"], (dim, dim), "T"),
                       decode_matrix(data["N"], (dim, dim), "N"),
                       n, m, r, label=data.get("label", ""), meta=meta)


def dump_pencil(pencil: BlockPencil, path, extra: dict | None = None) -> None:
    Path(path).write_text(json.dumps(pencil_to_dict(pencil, extra), indent=1) + "\n",
                          encoding="utf-8")


def load_pencil(path) -> BlockPencil:
    data = json.loads(Path(path).read_text(encoding="utf-8"), parse_constant=_reject_constant)
    return pencil_from_dict(data)

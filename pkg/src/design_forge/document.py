"""JSON family documents (``"format": "design-forge/1"``).

Layout::

    {
      "format": "design-forge/1",
      "dimension": 2,
      "groups": [
        {"label": "z", "gamma": 1.0,
         "operators": [[[[1, 0], [0, 0]], [[0, 0], [0, 0]]], ...]}
      ]
    }

Each operator is a list of ``d`` rows of ``d`` entries; each entry is a
``[re, im]`` pair. Floats are written with ``repr`` so a dump/load round
trip is bit-exact.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field

import numpy as np

from .errors import DesignError
from .linalg import hermitian

FORMAT = "design-forge/1"


class DocumentError(DesignError):
    def __init__(self, message: str):
        super().__init__("PARSE", message)


@dataclass
class Group:
    operators: np.ndarray
    label: str | None = None
    gamma: float | None = None


@dataclass
class FamilyDocument:
    dimension: int
    groups: list[Group] = field(default_factory=list)

    @property
    def grouping(self) -> list[int]:
        return [len(g.operators) for g in self.groups]

    @property
    def operators(self) -> np.ndarray:
        return np.concatenate([g.operators for g in self.groups])


def _parse_matrix(raw, d: int, where: str, herm_tol: float) -> np.ndarray:
    if not isinstance(raw, list) or len(raw) != d:
        raise DocumentError(f"{where}: expected {d} rows")
    out = np.empty((d, d), dtype=np.complex128)
    for i, row in enumerate(raw):
        if not isinstance(row, list) or len(row) != d:
            raise DocumentError(f"{where}, row {i}: expected {d} entries")
        for j, entry in enumerate(row):
            if (not isinstance(entry, list) or len(entry) != 2
                    or not all(isinstance(v, (int, float)) and not isinstance(v, bool) for v in entry)
                    or not all(math.isfinite(v) for v in entry)):
                raise DocumentError(f"{where}, entry ({i}, {j}): expected a finite [re, im] pair")
            out[i, j] = complex(entry[0], entry[1])
    try:
        return hermitian(out, herm_tol)
    except DesignError as exc:
        raise DocumentError(f"{where}: not Hermitian ({exc.message})") from None


def parse_document(data, herm_tol: float = 1e-10) -> FamilyDocument:
    if not isinstance(data, dict):
        raise DocumentError("top level must be an object")
    if data.get("format") != FORMAT:
        raise DocumentError(f"unsupported format {data.get('format')!r}, expected {FORMAT!r}")
    d = data.get("dimension")
    if not isinstance(d, int) or isinstance(d, bool) or d < 1:
        raise DocumentError("dimension must be a positive integer")
    groups = data.get("groups")
    if not isinstance(groups, list) or not groups:
        raise DocumentError("groups must be a non-empty list")
    doc = FamilyDocument(d)
    for gi, g in enumerate(groups):
        if not isinstance(g, dict) or not isinstance(g.get("operators"), list) or not g["operators"]:
            raise DocumentError(f"group {gi}: needs a non-empty operators list")
        label = g.get("label")
        if label is not None and not isinstance(label, str):
            raise DocumentError(f"group {gi}: label must be a string")
        gamma = g.get("gamma")
        if gamma is not None and (isinstance(gamma, bool) or not isinstance(gamma, (int, float))
                                  or not math.isfinite(gamma)):
            raise DocumentError(f"group {gi}: gamma must be a finite number")
        ops = np.array([_parse_matrix(m, d, f"group {gi}, operator {k}", herm_tol)
                        for k, m in enumerate(g["operators"])])
        doc.groups.append(Group(ops, label, None if gamma is None else float(gamma)))
    return doc


def load_document(fp, herm_tol: float = 1e-10) -> FamilyDocument:
    """Read a document from a text stream."""
    try:
        data = json.load(fp)
    except json.JSONDecodeError as exc:
        raise DocumentError(f"invalid JSON: {exc}") from None
    return parse_document(data, herm_tol)


def _encode_matrix(m: np.ndarray) -> list:
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def document_to_dict(doc: FamilyDocument) -> dict:
    groups = []
    for g in doc.groups:
        entry = {}
        if g.label is not None:
            entry["label"] = g.label
        if g.gamma is not None:
            entry["gamma"] = float(g.gamma)
        entry["operators"] = [_encode_matrix(m) for m in g.operators]
        groups.append(entry)
    return {"format": FORMAT, "dimension": int(doc.dimension), "groups": groups}


def dump_document(doc: FamilyDocument) -> str:
    return json.dumps(document_to_dict(doc), indent=1) + "\n"


def document_from_groups(groups, labels=None, gammas=None) -> FamilyDocument:
    groups = [np.asarray(g, dtype=np.complex128) for g in groups]
    labels = labels or [None] * len(groups)
    gammas = gammas or [None] * len(groups)
    return FamilyDocument(groups[0].shape[1], [Group(g, l, gm) for g, l, gm in zip(groups, labels, gammas)])

"""Structure-constant tables as JSON documents.

A document is a single JSON object with keys, in this order: ``kind``,
``dims`` (even, odd), ``labels``, ``entries`` (sparse ``[i, j, k, c]``),
``form`` (sparse ``[i, j, c]``), ``unit`` (sparse ``[i, c]``, or null) and
``metadata``.
"""

from __future__ import annotations

import json

import numpy as np

from .algebra import Algebra
from .exactf3 import DTYPE, P

KINDS = ("algebra", "superalgebra", "lie", "liesuper")


def to_document(alg: Algebra, kind: str, metadata: str = "") -> dict:
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}")
    entries = [[int(i), int(j), int(k), int(alg.mult[i, j, k])] for i, j, k in np.argwhere(alg.mult)]
    form = []
    if alg.form is not None:
        form = [[int(i), int(j), int(alg.form[i, j])] for i, j in np.argwhere(alg.form)]
    unit = None
    if alg.unit is not None:
        unit = [[int(i), int(alg.unit[i])] for i in np.nonzero(alg.unit)[0]]
    return {
        "kind": kind,
        "dims": [alg.even_dim, alg.odd_dim],
        "labels": list(alg.labels),
        "entries": entries,
        "form": form,
        "unit": unit,
        "metadata": metadata,
    }


def dumps(doc: dict) -> str:
    """Canonical serialization: fixed key order, one line per entry list item."""
    return json.dumps(doc, ensure_ascii=False, separators=(",", ":")) + "\n"


def from_document(doc: dict | str) -> Algebra:
    """Rebuild the presentation; validates indices and coefficients."""
    if isinstance(doc, str):
        doc = json.loads(doc)
    if doc.get("kind") not in KINDS:
        raise ValueError(f"unknown kind {doc.get('kind')!r}")
    p, q = (int(v) for v in doc["dims"])
    n = p + q
    labels = doc["labels"]
    if len(labels) != n:
        raise ValueError("label count does not match dims")
    mult = np.zeros((n, n, n), dtype=DTYPE)
    for i, j, k, c in doc["entries"]:
        if not (0 <= min(i, j, k) and max(i, j, k) < n) or c % P == 0:
            raise ValueError(f"bad entry {[i, j, k, c]}")
        mult[i, j, k] = c % P
    form = None
    if doc.get("form"):
        form = np.zeros((n, n), dtype=DTYPE)
        for i, j, c in doc["form"]:
            if not (0 <= min(i, j) and max(i, j) < n) or c % P == 0:
                raise ValueError(f"bad form entry {[i, j, c]}")
            form[i, j] = c % P
    unit = None
    if doc.get("unit") is not None:
        unit = np.zeros(n, dtype=DTYPE)
        for i, c in doc["unit"]:
            unit[i] = c % P
    parity = np.array([0] * p + [1] * q, dtype=DTYPE)
    return Algebra(mult, labels, form=form, unit=unit, parity=parity)

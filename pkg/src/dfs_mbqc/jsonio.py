"""Complex matrices as nested JSON lists of ``[re, im]`` pairs (row-major)."""
from __future__ import annotations

import numpy as np

PAULI_LABELS = ["I", "X", "Y", "Z"]


def matrix_to_json(m) -> list:
    m = np.asarray(m, dtype=complex)
    return [[[float(z.real), float(z.imag)] for z in row] for row in m]


def matrix_from_json(rows) -> np.ndarray:
    arr = np.asarray(rows, dtype=float)
    if arr.ndim != 3 or arr.shape[-1] != 2:
        raise ValueError("expected a nested list of [re, im] pairs")
    return arr[..., 0] + 1j * arr[..., 1]


def chi_to_json(chi) -> dict:
    return {"basis": PAULI_LABELS, "chi": matrix_to_json(chi)}


def chi_from_json(doc: dict) -> np.ndarray:
    if doc.get("basis", PAULI_LABELS) != PAULI_LABELS:
        raise ValueError(f"unsupported operator basis {doc.get('basis')!r}")
    return matrix_from_json(doc["chi"])


def kraus_to_json(kraus) -> dict:
    return {"kraus": [matrix_to_json(k) for k in kraus]}


def kraus_from_json(doc: dict) -> list[np.ndarray]:
    ops = [matrix_from_json(k) for k in doc["kraus"]]
    if not ops or any(k.shape != (2, 2) for k in ops):
        raise ValueError("Kraus file must hold a non-empty list of 2x2 matrices")
    return ops

"""JSON operator documents: {"dim": D, "entries": [[[re, im], ...], ...]}."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from .errors import DimensionError, NotHermitianError, QFIError
from .operators import HERMITIAN_ATOL


class OperatorFileError(QFIError):
    pass


def operator_to_document(A) -> dict:
    A = np.asarray(A, dtype=complex)
    return {
        "dim": int(A.shape[0]),
        "entries": [[[float(z.real), float(z.imag)] for z in row] for row in A],
    }


def operator_from_document(doc) -> np.ndarray:
    if not isinstance(doc, dict) or "dim" not in doc or "entries" not in doc:
        raise OperatorFileError("operator document needs keys 'dim' and 'entries'")
    D = doc["dim"]
    if not isinstance(D, int) or isinstance(D, bool) or D < 1:
        raise OperatorFileError(f"'dim' must be a positive integer, got {D!r}")
    rows = doc["entries"]
    if not isinstance(rows, list) or len(rows) != D:
        raise DimensionError(f"'entries' must have {D} rows")
    A = np.empty((D, D), dtype=complex)
    for i, row in enumerate(rows):
        if not isinstance(row, list) or len(row) != D:
            raise DimensionError(f"row {i} must have {D} entries")
        for j, z in enumerate(row):
            try:
                re, im = z
                A[i, j] = complex(float(re), float(im))
            except (TypeError, ValueError):
                raise OperatorFileError(f"entry at row {i}, col {j} is not a [re, im] pair: {z!r}") from None
    asym = np.abs(A - A.conj().T)
    if asym.max() > HERMITIAN_ATOL:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise NotHermitianError(
            f"operator is not Hermitian: max asymmetry {asym.max():.3e} at row {i}, col {j}"
        )
    return (A + A.conj().T) / 2


def load_operator(path) -> np.ndarray:
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise OperatorFileError(f"{path}: invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
    return operator_from_document(doc)


def save_operator(path, A) -> None:
    Path(path).write_text(json.dumps(operator_to_document(A)) + "\n")

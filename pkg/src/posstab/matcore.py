"""Frobenius geometry, supports, projections, permutations and matrix file I/O.

Indices are 0-based throughout the package.
"""
from __future__ import annotations

import csv
import io
import json
from pathlib import Path

import numpy as np

from ._validation import check_matrix, check_permutation, check_same_shape

ZERO_TOL = 1e-10


def frobenius_distance(X, A):
    X = check_matrix(X, name="X")
    A = check_matrix(A)
    check_same_shape(X, A)
    return float(np.linalg.norm(X - A))


def nonneg_projection(A):
    """Entrywise positive part ``max(A, 0)``."""
    return np.maximum(check_matrix(A), 0.0)


def metzler_projection(A):
    """Keep the diagonal, clamp off-diagonal entries at zero."""
    A = check_matrix(A)
    out = np.maximum(A, 0.0)
    np.fill_diagonal(out, np.diag(A))
    return out


def support(X, zero_tol=ZERO_TOL):
    """Set of ``(i, j)`` positions with ``x_ij > zero_tol``."""
    X = check_matrix(X, name="X")
    return {(int(i), int(j)) for i, j in zip(*np.nonzero(X > zero_tol))}


def permute_symmetric(X, perm):
    """Return ``P X P^T`` where row ``k`` of the result is row ``perm[k]`` of ``X``."""
    X = check_matrix(X, name="X")
    perm = check_permutation(perm, X.shape[0])
    return X[np.ix_(perm, perm)]


def is_nonnegative(X, tol=0.0):
    return bool(X.size == 0 or X.min() >= -tol)


def is_metzler(X, tol=0.0):
    if X.shape[0] < 2:
        return True
    return bool(X[~np.eye(X.shape[0], dtype=bool)].min() >= -tol)


# -- file formats -----------------------------------------------------------

def _rows_to_matrix(rows, source):
    if not rows:
        raise ValueError(f"{source}: empty matrix")
    width = len(rows[0])
    for k, row in enumerate(rows):
        if len(row) != width:
            raise ValueError(f"{source}: ragged row {k} ({len(row)} entries, expected {width})")
    return check_matrix(np.array(rows, dtype=np.float64), name=source)


def parse_csv(text, source="<csv>"):
    rows = []
    for line in csv.reader(io.StringIO(text)):
        if not line or all(not cell.strip() for cell in line):
            continue
        try:
            rows.append([float(cell) for cell in line])
        except ValueError as exc:
            raise ValueError(f"{source}: {exc}") from None
    return _rows_to_matrix(rows, source)


def parse_json(text, source="<json>"):
    data = json.loads(text)
    if not isinstance(data, dict) or "rows" not in data:
        raise ValueError(f"{source}: expected an object with a 'rows' field")
    rows = data["rows"]
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ValueError(f"{source}: 'rows' must be a list of lists")
    A = _rows_to_matrix(rows, source)
    if "dim" in data and data["dim"] != A.shape[0]:
        raise ValueError(f"{source}: dim={data['dim']} does not match {A.shape[0]} rows")
    return A


def read_matrix(path, fmt=None):
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    text = path.read_text()
    return parse_json(text, str(path)) if fmt == "json" else parse_csv(text, str(path))


def format_csv(X):
    # 17 significant digits round-trips every float64 exactly
    return "".join(",".join(f"{x:.17g}" for x in row) + "\n" for row in np.asarray(X))


def format_json(X):
    X = np.asarray(X)
    return json.dumps({"dim": int(X.shape[0]), "rows": X.tolist()}, indent=2) + "\n"


def write_matrix(X, path, fmt=None):
    path = Path(path)
    fmt = fmt or ("json" if path.suffix.lower() == ".json" else "csv")
    path.write_text(format_json(X) if fmt == "json" else format_csv(X))

"""Families of local minima indexed by ordered set partitions.

For a strictly positive lower-dominant matrix, keeping ``A`` above the
diagonal blocks of a partition, zeroing everything below them and stabilizing
each diagonal block separately yields a distinct local minimum per partition.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from ._engine import SolverOptions
from ._validation import PreconditionError, check_matrix
from .schur import stabilize, verify_stationary
from .spectral import spectral_radius

MAX_ENUM_DIM = 8


@dataclass(frozen=True)
class OrderedPartition:
    blocks: tuple

    def __post_init__(self):
        blocks = tuple(tuple(int(i) for i in b) for b in self.blocks)
        object.__setattr__(self, "blocks", blocks)
        flat = [i for b in blocks for i in b]
        if any(len(b) == 0 for b in blocks):
            raise ValueError("partition blocks must be non-empty")
        if sorted(flat) != list(range(len(flat))):
            raise ValueError(f"blocks do not partition 0..{len(flat) - 1}: {blocks}")

    @property
    def d(self):
        return sum(len(b) for b in self.blocks)

    def label(self):
        return "|".join(" ".join(str(i) for i in b) for b in self.blocks)


def ordered_partitions(d):
    """All ordered set partitions of ``range(d)`` (Fubini many), as tuples of blocks."""
    if d > MAX_ENUM_DIM:
        raise ValueError(f"enumeration is limited to d <= {MAX_ENUM_DIM}")

    def rec(rest):
        if not rest:
            yield ()
            return
        for k in range(1, len(rest) + 1):
            for first in combinations(rest, k):
                remaining = tuple(i for i in rest if i not in first)
                for tail in rec(remaining):
                    yield (first,) + tail

    for blocks in rec(tuple(range(d))):
        yield OrderedPartition(blocks)


def lower_dominant_example(d):
    """Twos on and below the diagonal, ones above it."""
    if d < 2:
        raise ValueError("d must be at least 2")
    return np.tril(np.full((d, d), 2.0)) + np.triu(np.ones((d, d)), 1)


def is_lower_dominant(A):
    A = np.asarray(A)
    low = np.tril_indices(A.shape[0], -1)
    return bool(np.all(A[low] > A.T[low]))


def partition_local_minimum(A, part, opts=None):
    """Matrix equal to ``A`` above the blocks of ``part``, zero below, with each
    diagonal block replaced by its stabilization."""
    A = check_matrix(A)
    if part.d != A.shape[0]:
        raise ValueError("partition size does not match A")
    if np.any(A <= 0):
        raise PreconditionError("A must be strictly positive")
    opts = opts or SolverOptions()
    X = np.zeros_like(A)
    for p, bp in enumerate(part.blocks):
        rows = np.array(bp)
        Ab = A[np.ix_(rows, rows)]
        if spectral_radius(Ab) <= 1:
            raise PreconditionError(f"block {bp} has spectral radius <= 1")
        X[np.ix_(rows, rows)] = stabilize(Ab, opts).X
        for bq in part.blocks[p + 1:]:
            cols = np.array(bq)
            X[np.ix_(rows, cols)] = A[np.ix_(rows, cols)]
    return X


def check_family_hypotheses(A):
    if np.any(A <= 0):
        raise PreconditionError("A must be strictly positive")
    if not is_lower_dominant(A):
        raise PreconditionError("A must be lower dominant (a_ij > a_ji for i > j)")
    if np.any(np.diag(A) <= 1):
        raise PreconditionError("diagonal entries of A must exceed 1")


def enumerate_local_minima(A, opts=None):
    """Distinct stationary matrices from all ordered partitions.

    Returns a list of ``(partition, X, distance)`` in enumeration order,
    keeping the first partition that produced each matrix.
    """
    A = check_matrix(A)
    check_family_hypotheses(A)
    opts = opts or SolverOptions()
    found = []
    for part in ordered_partitions(A.shape[0]):
        X = partition_local_minimum(A, part, opts)
        if not verify_stationary(X, A, opts.cert_tol).accepted:
            continue
        if any(np.abs(X - Y).max() <= opts.cert_tol for _, Y, _ in found):
            continue
        found.append((part, X, float(np.linalg.norm(X - A))))
    return found

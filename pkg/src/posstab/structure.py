"""Combinatorial structure of non-negative matrices.

Frobenius normal form (strongly connected components of the support digraph
in upper-triangular order), primitivity, and the cyclic class partition of an
irreducible matrix.
"""
from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .matcore import ZERO_TOL


@dataclass(frozen=True)
class BlockStructure:
    """``X[np.ix_(perm, perm)]`` is block upper triangular with irreducible
    diagonal blocks ``blocks[0], blocks[1], ...`` (index arrays into ``X``)."""
    perm: np.ndarray
    blocks: tuple

    @property
    def block_sizes(self):
        return [len(b) for b in self.blocks]

    @property
    def m(self):
        return len(self.blocks)


@dataclass(frozen=True)
class CyclicPartition:
    """Classes ``classes[0..r-1]``; a positive entry ``x_ij`` has ``j`` in some
    class ``k`` and ``i`` in class ``k + 1 (mod r)``."""
    r: int
    classes: tuple


def _adjacency(X, zero_tol, ignore_diagonal):
    mask = np.asarray(X) > zero_tol
    if ignore_diagonal:
        np.fill_diagonal(mask, False)
    return [np.flatnonzero(row) for row in mask]


def strongly_connected_components(adj):
    """Tarjan's algorithm, iterative. Components come out in reverse
    topological order of the condensation (sinks first)."""
    n = len(adj)
    index = [-1] * n
    low = [0] * n
    on_stack = [False] * n
    stack, comps = [], []
    counter = 0
    for root in range(n):
        if index[root] >= 0:
            continue
        work = [(root, 0)]
        while work:
            v, pos = work.pop()
            if pos == 0:
                index[v] = low[v] = counter
                counter += 1
                stack.append(v)
                on_stack[v] = True
            recurse = False
            nbrs = adj[v]
            while pos < len(nbrs):
                w = nbrs[pos]
                pos += 1
                if index[w] < 0:
                    work.append((v, pos))
                    work.append((w, 0))
                    recurse = True
                    break
                if on_stack[w]:
                    low[v] = min(low[v], index[w])
            if recurse:
                continue
            if low[v] == index[v]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == v:
                        break
                comps.append(sorted(comp))
            if work:
                parent = work[-1][0]
                low[parent] = min(low[parent], low[v])
    return comps


def frobenius_normal_form(X, zero_tol=ZERO_TOL, ignore_diagonal=False):
    """Block upper-triangular ordering of ``X`` with irreducible diagonal blocks.

    Edges ``i -> j`` for ``x_ij > zero_tol``. ``ignore_diagonal`` is for Metzler
    matrices, whose diagonal carries no structural information.
    """
    X = np.asarray(X, dtype=float)
    comps = strongly_connected_components(_adjacency(X, zero_tol, ignore_diagonal))
    blocks = tuple(np.array(c, dtype=np.intp) for c in reversed(comps))
    perm = np.concatenate(blocks) if blocks else np.zeros(0, dtype=np.intp)
    return BlockStructure(perm, blocks)


def is_irreducible(X, zero_tol=ZERO_TOL, ignore_diagonal=False):
    return frobenius_normal_form(X, zero_tol, ignore_diagonal).m == 1


def is_primitive(X, zero_tol=ZERO_TOL):
    """Return ``(primitive, partition)`` for an irreducible non-negative ``X``.

    The period is the gcd of ``level(j) + 1 - level(i)`` over the support, where
    levels are BFS distances along ``j -> i`` for ``x_ij > 0``.
    """
    X = np.asarray(X, dtype=float)
    d = X.shape[0]
    if not is_irreducible(X, zero_tol):
        raise ValueError("is_primitive requires an irreducible matrix")
    mask = X > zero_tol
    level = [-1] * d
    level[0] = 0
    queue = deque([0])
    while queue:
        j = queue.popleft()
        for i in np.flatnonzero(mask[:, j]):
            if level[i] < 0:
                level[i] = level[j] + 1
                queue.append(int(i))
    r = 0
    for i, j in zip(*np.nonzero(mask)):
        r = math.gcd(r, abs(level[j] + 1 - level[i]))
    r = max(r, 1)
    lv = np.array(level) % r
    classes = tuple(np.flatnonzero(lv == k) for k in range(r))
    return r == 1, CyclicPartition(r, classes)


def cyclic_block_views(X, part, zero_tol=ZERO_TOL):
    """Blocks ``X[classes[k+1], classes[k]]`` for ``k = 0..r-1`` (indices mod r)."""
    X = np.asarray(X, dtype=float)
    r = part.r
    on_cycle = np.zeros(X.shape, dtype=bool)
    views = []
    for k in range(r):
        rows, cols = part.classes[(k + 1) % r], part.classes[k]
        on_cycle[np.ix_(rows, cols)] = True
        views.append(X[np.ix_(rows, cols)])
    if np.any(X[~on_cycle] > zero_tol):
        raise ValueError("partition is inconsistent with the support of X")
    return views

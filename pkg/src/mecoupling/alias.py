"""Excess-transfer decomposition of one sorted pmf onto another it majorizes.

The scan generalizes the classic alias-table construction: walk cells from
the smallest mass up, and whenever the source mass q(x) falls short of the
target p(x), consume whole leftover excesses from the right end. Each cell
ends up keeping q(x) - r(x) of its mass and donating r(x) to a single
earlier cell. With q uniform this reduces to Walker's alias method.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .errors import BadParameterError, NotMajorizedError, NotSortedError
from .pmf import _as_masses

NONE_TARGET = -1

_CLAMP = 1e-12
_SORT_SLACK = 1e-12


@dataclass(frozen=True)
class AliasDecomposition:
    """Transfer plan from q onto p (both non-increasing, same length).

    Cell x keeps q[x] - r[x] and donates r[x] to target[x] < x, so that
    p(x) = q(x) - r(x) + sum of r(y) over donors y with target[y] = x.
    target[x] = -1 means "none": r[x] is zero and never consulted.
    loop_iterations counts transfer-loop executions; it never exceeds n.
    """

    p: np.ndarray
    q: np.ndarray
    r: np.ndarray
    target: np.ndarray
    loop_iterations: int

    def __len__(self) -> int:
        return self.q.size

    def transfer_ratio(self) -> np.ndarray:
        """r(x) / q(x) per cell, zero where q(x) = 0."""
        out = np.zeros_like(self.q)
        pos = self.q > 0.0
        out[pos] = self.r[pos] / self.q[pos]
        return out


def _check_descending(masses: np.ndarray, name: str) -> None:
    rises = np.flatnonzero(np.diff(masses) > _SORT_SLACK)
    if rises.size:
        k = int(rises[0])
        raise NotSortedError(
            f"{name} rises at index {k + 1}: "
            f"{float(masses[k])!r} -> {float(masses[k + 1])!r}"
        )


def _check_majorized(p: np.ndarray, q: np.ndarray) -> None:
    deficit = np.cumsum(q.astype(np.longdouble)) - np.cumsum(p.astype(np.longdouble))
    bad = np.flatnonzero(deficit > _CLAMP)
    if bad.size:
        k = int(bad[0])
        raise NotMajorizedError(
            f"q is not majorized by p: prefix {k + 1} exceeds by {float(deficit[k])!r}"
        )


def _scan(p: list, q: list) -> tuple[list, list, int]:
    """Core transfer scan on plain lists; inputs descending, q majorized by p."""
    n = len(p)
    r = [0.0] * n
    target = [0] * n  # leftover excesses donate to the first cell
    b = n - 1
    pops = 0
    for x in range(n - 1, 0, -1):
        rx = q[x] - p[x]
        while rx < -_CLAMP:
            if b <= x:
                raise NotMajorizedError("ran out of excess; q is not majorized by p")
            rx += r[b]
            target[b] = x
            b -= 1
            pops += 1
        qx = q[x]
        if rx < 0.0:
            rx = 0.0
        elif rx > qx:
            rx = qx
        r[x] = rx
    return r, target, pops


def majorized_alias(p, q, *, validate: bool = True) -> AliasDecomposition:
    """Decompose q onto p it is majorized by, in one O(n) scan.

    Both inputs must be non-increasing and the same length. validate=False
    skips the order and majorization prechecks for callers that guarantee
    them by construction.
    """
    pa = np.ascontiguousarray(_as_masses(p), dtype=np.float64)
    qa = np.ascontiguousarray(_as_masses(q), dtype=np.float64)
    if pa.size != qa.size:
        raise BadParameterError(f"p has {pa.size} masses, q has {qa.size}; pad to a common length")
    if validate:
        _check_descending(pa, "p")
        _check_descending(qa, "q")
        _check_majorized(pa, qa)
    r, target, pops = _scan(pa.tolist(), qa.tolist())
    r_arr = np.asarray(r, dtype=np.float64)
    t_arr = np.asarray(target, dtype=np.int64)
    t_arr[r_arr == 0.0] = NONE_TARGET
    return AliasDecomposition(p=pa, q=qa, r=r_arr, target=t_arr, loop_iterations=pops)


def as_transition(dec: AliasDecomposition) -> sparse.csr_array:
    """The decomposition as a sparse row-stochastic matrix M with q @ M = p.

    Row x puts r(x)/q(x) on column target[x] and the rest on x; rows with
    q(x) = 0 keep a self-loop of weight 1. Lower triangular, at most one
    off-diagonal entry per row, and every row sums to exactly 1.
    """
    n = dec.q.size
    ratio = dec.transfer_ratio()
    off = (ratio > 0.0) & (dec.target >= 0)
    diag = 1.0 - ratio
    rows = np.concatenate([np.arange(n), np.flatnonzero(off)])
    cols = np.concatenate([np.arange(n), dec.target[off]])
    vals = np.concatenate([diag, ratio[off]])
    return sparse.csr_array((vals, (rows, cols)), shape=(n, n))

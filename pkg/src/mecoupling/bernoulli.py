"""Shared-stick splitting of a set of probabilities.

Given rho_1..rho_m in [0, 1], cut the unit interval into sticks and hand
each rho_i a subset of sticks summing to rho_i. Every round emits the
longest stick that each remaining rho_i can either take whole or skip, so
the leftover at least halves per round: at most m+1 sticks in total, and
the mass beyond the first L sticks never exceeds 2**-L.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import BadParameterError, BadProbabilityError
from .pmf import Pmf

DEFAULT_EPS = 1e-12


@dataclass(frozen=True)
class BernoulliSplit:
    """Sticks plus the take/skip matrix.

    q holds the stick lengths in the order they were cut, provably
    non-increasing. g is an (m, k) 0/1 matrix: row i marks the sticks
    whose lengths sum to rho_i.
    """

    q: Pmf
    g: np.ndarray


def _split_batch(
    ratios: np.ndarray, max_steps: int | None, eps: float
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Run the stick loop on every row of `ratios` in lockstep.

    ratios is (B, m) and is consumed. Returns (sticks, takes, counts):
    sticks (B, K), takes (B, m, K) bool, counts (B,) with K the largest
    emitted count; entries past a row's count are zero/False. Rows stopped
    by the step cap with more than eps left get that residual appended as
    one final stick, assigned by the same rho >= c/2 rule; anything
    smaller is folded into the row's last stick. Each row's sticks are
    scaled to sum to exactly 1.
    """
    rows, m = ratios.shape
    cap = m + 1 if max_steps is None else max_steps
    c = np.ones(rows)
    counts = np.zeros(rows, dtype=np.int64)
    stick_cols: list[np.ndarray] = []
    take_cols: list[np.ndarray] = []
    for _ in range(cap):
        active = c > eps
        if not active.any():
            break
        keep = c[:, None] - ratios
        np.maximum(keep, ratios, out=keep)
        gamma = keep.min(axis=1)
        gamma[~active] = 0.0
        take = (ratios >= (0.5 * c - eps)[:, None]) & (ratios > 0.0) & active[:, None]
        ratios -= np.where(take, gamma[:, None], 0.0)
        np.clip(ratios, 0.0, None, out=ratios)
        c -= gamma
        counts += active
        stick_cols.append(gamma)
        take_cols.append(take)
    sticks = np.stack(stick_cols, axis=1)
    takes = np.stack(take_cols, axis=2)
    if max_steps is not None:
        leftover = c > eps
        if leftover.any():
            final = np.where(leftover, c, 0.0)
            last_take = (ratios >= (0.5 * c - eps)[:, None]) & (ratios > 0.0) & leftover[:, None]
            sticks = np.concatenate([sticks, final[:, None]], axis=1)
            takes = np.concatenate([takes, last_take[:, :, None]], axis=2)
            counts += leftover
            c = np.where(leftover, 0.0, c)
    dust = np.flatnonzero(c != 0.0)
    sticks[dust, counts[dust] - 1] += c[dust]
    sticks /= sticks.sum(axis=1, keepdims=True)
    return sticks, takes, counts


def bernoulli_splitting(rhos, max_steps: int | None = None, eps: float = DEFAULT_EPS) -> BernoulliSplit:
    """Split rho_1..rho_m into shared sticks.

    Exact mode (max_steps=None) runs until the leftover drops below eps,
    at most m+1 rounds. With max_steps the loop stops early and the
    residual becomes one final stick, so each achieved sum sits within
    2**-max_steps of its rho_i.
    """
    arr = np.array(rhos, dtype=np.float64)
    if arr.ndim != 1:
        raise BadParameterError("rhos must be one-dimensional")
    if not np.isfinite(arr).all():
        raise BadProbabilityError("rhos must be finite")
    out_of_range = (arr < -1e-12) | (arr > 1.0 + 1e-12)
    if out_of_range.any():
        i = int(np.flatnonzero(out_of_range)[0])
        raise BadProbabilityError(f"rho[{i}] = {float(arr[i])!r} is outside [0, 1]")
    if max_steps is not None and (not isinstance(max_steps, (int, np.integer)) or max_steps < 1):
        raise BadParameterError(f"max_steps must be an integer >= 1, got {max_steps!r}")
    if not eps > 0.0:
        raise BadParameterError(f"eps must be positive, got {eps!r}")
    np.clip(arr, 0.0, 1.0, out=arr)
    if arr.size == 0:
        return BernoulliSplit(q=Pmf([1.0]), g=np.zeros((0, 1), dtype=np.uint8))
    sticks, takes, counts = _split_batch(arr[None, :], max_steps, eps)
    k = int(counts[0])
    return BernoulliSplit(q=Pmf(sticks[0, :k]), g=takes[0, :, :k].astype(np.uint8))

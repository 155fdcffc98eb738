"""Digit maps that stretch a transfer decomposition over fair-coin levels.

Pairing a source cell x with a fair-coin geometric level i and sending the
pair to the transfer target exactly when the i-th binary digit of
r(x)/q(x) is 1 reproduces p: the digits of the ratio spell out how much of
each cell migrates. Digits are extracted with exact integer arithmetic on
the float's integer ratio, so partial sums approach each ratio from below
and dyadic ratios are reproduced with zero error.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .alias import AliasDecomposition, majorized_alias
from .errors import BadParameterError
from .majorization import greatest_lower_bound
from .pmf import Pmf, _as_masses, sort_descending

DEFAULT_DIGITS = 60


def _digit(rho: float, i: int) -> int:
    """i-th binary digit of rho in [0, 1), exact for every i."""
    num, den = rho.as_integer_ratio()
    return ((num << i) // den) & 1


def _truncated_fraction(rho: float, digits: int) -> int:
    """floor(rho * 2**digits) as an exact integer."""
    num, den = rho.as_integer_ratio()
    return (num << digits) // den


@dataclass(frozen=True)
class GeomSplitMap:
    """Deterministic map (cell, level) -> cell.

    Level i of cell x moves to the transfer target when the i-th binary
    digit of ratio[x] = r(x)/q(x) is 1, else stays at x; levels beyond
    digit_cap stay at x. Rows with ratio exactly 1 are flagged dyadic and
    send every level to the target (the all-ones expansion).
    """

    dec: AliasDecomposition
    digit_cap: int
    dyadic: np.ndarray
    ratio: np.ndarray

    def __call__(self, x: int, i: int) -> int:
        if not 0 <= x < self.dec.q.size:
            raise BadParameterError(f"cell {x!r} is out of range")
        if i < 1:
            raise BadParameterError(f"levels start at 1, got {i!r}")
        if self.dyadic[x]:
            return int(self.dec.target[x])
        if i > self.digit_cap:
            return int(x)
        rho = float(self.ratio[x])
        if rho > 0.0 and _digit(rho, i):
            return int(self.dec.target[x])
        return int(x)


def geom_split(p, q, digit_cap: int = DEFAULT_DIGITS) -> GeomSplitMap:
    """Build the digit map stretching q onto p across fair-coin levels.

    Both inputs non-increasing with q majorized by p; digit_cap bounds how
    many levels keep their own digit before the map gives up and stays home.
    """
    if not isinstance(digit_cap, (int, np.integer)) or digit_cap < 1:
        raise BadParameterError(f"digit_cap must be an integer >= 1, got {digit_cap!r}")
    dec = majorized_alias(p, q)
    ratio = dec.transfer_ratio()
    return GeomSplitMap(dec=dec, digit_cap=int(digit_cap), dyadic=ratio == 1.0, ratio=ratio)


def truncated_pushforward(split: GeomSplitMap) -> Pmf:
    """Distribution of split(X, min(Z, L)) with X ~ q and Z fair-coin geometric.

    Level L absorbs the whole tail P(Z >= L) = 2**(1-L); the result is
    within total variation 2**-L of p.
    """
    q = split.dec.q
    target = split.dec.target
    cap = split.digit_cap
    out = np.zeros(q.size)
    for x in range(q.size):
        qx = q[x]
        if qx == 0.0:
            continue
        if split.dyadic[x]:
            moved = 1.0
        else:
            frac = _truncated_fraction(float(split.ratio[x]), cap)
            # min(Z, L) doubles the weight of digit L: the tail rides on it
            moved = math.ldexp(frac + (frac & 1), -cap)
        if moved > 0.0:
            out[target[x]] += qx * moved
        out[x] += qx * (1.0 - moved)
    return Pmf(out)


@dataclass(frozen=True)
class GeometricCoupling:
    """The greatest lower bound crossed with fair-coin levels.

    Cells are (rank, level) pairs in rank-major order over ranks with
    positive glb mass; levels 1..digit_cap carry glb(x) * 2**-i and one
    residual cell per rank carries the remaining glb(x) * 2**-digit_cap.
    splits[i] is distribution i's digit map in sorted-rank space; perms[i]
    translates ranks back to that input's labels.
    """

    glb: Pmf
    digit_cap: int
    splits: tuple[GeomSplitMap, ...]
    perms: tuple[np.ndarray, ...]

    def underlying_pmf(self) -> Pmf:
        """Cell masses of the truncated grid, rank-major."""
        pos = self.glb.masses[self.glb.masses > 0.0]
        levels = np.ldexp(1.0, -np.arange(1, self.digit_cap + 2))
        levels[-1] = math.ldexp(1.0, -self.digit_cap)
        return Pmf(np.outer(pos, levels).ravel())

    def underlying_entropy(self) -> float:
        """Shannon entropy of the full untruncated stretch, in closed form.

        Per rank, the level masses are glb(x) * 2**-i for all i >= 1, so the
        geometric series sum 2**-i = 1 and sum i * 2**-i = 2 collapse the
        double sum to sum_x (-glb(x) log2 glb(x) + 2 glb(x)).
        """
        pos = self.glb.masses[self.glb.masses > 0.0]
        return float((-pos * np.log2(pos) + 2.0 * pos).sum())

    def pushforward(self, i: int) -> Pmf:
        """Image of the cell distribution under distribution i's map, in
        that input's original label space. Residual cells stay home, so the
        result is within total variation 2**-digit_cap of the input."""
        split = self.splits[i]
        q = self.glb.masses
        target = split.dec.target
        sorted_space = np.zeros(q.size)
        for x in range(q.size):
            qx = q[x]
            if qx == 0.0:
                continue
            if split.dyadic[x]:
                moved = 1.0
            else:
                frac = _truncated_fraction(float(split.ratio[x]), self.digit_cap)
                moved = math.ldexp(frac, -self.digit_cap)
            if moved > 0.0:
                sorted_space[target[x]] += qx * moved
            sorted_space[x] += qx * (1.0 - moved)
        out = np.empty_like(sorted_space)
        out[self.perms[i]] = sorted_space
        return Pmf(out)


def couple_geometric(ps, digit_cap: int = DEFAULT_DIGITS) -> GeometricCoupling:
    """Couple a pmf collection through its greatest lower bound and a
    fair-coin geometric level, one digit map per distribution."""
    if not isinstance(digit_cap, (int, np.integer)) or digit_cap < 1:
        raise BadParameterError(f"digit_cap must be an integer >= 1, got {digit_cap!r}")
    all_masses = [_as_masses(p) for p in ps]
    glb = greatest_lower_bound(all_masses)
    n = len(glb.glb)
    splits = []
    perms = []
    for masses in all_masses:
        padded = np.zeros(n)
        padded[: masses.size] = masses
        sp = sort_descending(Pmf(padded))
        splits.append(geom_split(sp.masses, glb.glb.masses, digit_cap))
        perms.append(sp.perm)
    return GeometricCoupling(
        glb=glb.glb, digit_cap=int(digit_cap), splits=tuple(splits), perms=tuple(perms)
    )

"""Validated pmfs, descending sorts, and Renyi entropies in bits.

The capped geometric family lives here too: it is the yardstick every
low-entropy coupling in this package is measured against.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadParameterError,
    EmptyPmfError,
    NegativeMassError,
    NotNormalizedError,
)

NEGATIVE_TOLERANCE = 1e-12
SUM_TOLERANCE = 1e-9

# Orders this close to 1 are computed with the Shannon branch; the generic
# formula divides by (1 - alpha) and loses every digit near the pole.
_SHANNON_BAND = 1e-6


class Pmf:
    """A finite pmf stored as a read-only float64 array.

    Negative dust above -1e-12 is clamped to zero, anything more negative is
    rejected, the total must be within 1e-9 of 1, and the stored masses are
    renormalized to sum to 1.
    """

    __slots__ = ("_masses",)

    def __init__(self, masses) -> None:
        arr = np.array(masses, dtype=np.float64)
        if arr.ndim != 1:
            raise BadParameterError("masses must be one-dimensional")
        if arr.size == 0:
            raise EmptyPmfError("a pmf needs at least one mass")
        if not np.isfinite(arr).all():
            raise BadParameterError("masses must be finite")
        low = arr.min()
        if low < -NEGATIVE_TOLERANCE:
            raise NegativeMassError(
                f"mass {float(low)!r} at index {int(arr.argmin())} is below -1e-12"
            )
        np.clip(arr, 0.0, None, out=arr)
        total = arr.sum()
        if abs(total - 1.0) > SUM_TOLERANCE:
            raise NotNormalizedError(
                f"masses sum to {float(total)!r}, expected 1 within 1e-9"
            )
        arr /= total
        arr.flags.writeable = False
        self._masses = arr

    @property
    def masses(self) -> np.ndarray:
        return self._masses

    def __len__(self) -> int:
        return self._masses.size

    def __repr__(self) -> str:
        return f"Pmf({self._masses.tolist()!r})"

    def support(self) -> np.ndarray:
        """Indices carrying strictly positive mass."""
        return np.flatnonzero(self._masses > 0.0)


def make_pmf(masses) -> Pmf:
    """Validate, clamp dust, and renormalize masses into a Pmf."""
    if isinstance(masses, Pmf):
        return masses
    return Pmf(masses)


@dataclass(frozen=True)
class SortedPmf:
    """Masses in non-increasing order plus the position -> original label map.

    perm[k] is the original index of the k-th largest mass; ties keep
    ascending original order. Scattering masses back through perm
    reproduces the source exactly.
    """

    masses: np.ndarray
    perm: np.ndarray

    def __len__(self) -> int:
        return self.masses.size

    def original(self) -> np.ndarray:
        out = np.empty_like(self.masses)
        out[self.perm] = self.masses
        return out


def sort_descending(p: Pmf) -> SortedPmf:
    """Stable descending sort of a pmf, remembering where each mass came from."""
    perm = np.argsort(-p.masses, kind="stable")
    masses = p.masses[perm]
    masses.flags.writeable = False
    perm.flags.writeable = False
    return SortedPmf(masses=masses, perm=perm)


def _as_masses(p) -> np.ndarray:
    if isinstance(p, Pmf):
        return p.masses
    if isinstance(p, SortedPmf):
        return p.masses
    return np.asarray(p, dtype=np.float64)


def _check_order(alpha: float) -> float:
    alpha = float(alpha)
    if math.isnan(alpha) or alpha < 0.0:
        raise BadParameterError(f"entropy order must be in [0, inf], got {alpha!r}")
    return alpha


def entropy(p, alpha: float = 1.0) -> float:
    """Renyi entropy of order alpha, in bits.

    alpha=1 is Shannon with 0*log(0) := 0, alpha=0 counts the support,
    alpha=inf is -log2 of the largest mass. Orders within 1e-6 of 1 take
    the Shannon branch.
    """
    alpha = _check_order(alpha)
    arr = _as_masses(p)
    pos = arr[arr > 0.0]
    if pos.size == 0:
        raise EmptyPmfError("entropy of an all-zero pmf is undefined")
    if alpha == math.inf:
        return float(-np.log2(pos.max()))
    if abs(alpha - 1.0) < _SHANNON_BAND:
        return float(-(pos * np.log2(pos)).sum())
    if alpha == 0.0:
        return float(np.log2(pos.size))
    # Factor out the peak so large orders cannot underflow the power sum.
    peak = pos.max()
    powered = float(((pos / peak) ** alpha).sum())
    return (alpha * math.log2(peak) + math.log2(powered)) / (1.0 - alpha)


def total_variation(p, q) -> float:
    """Half the L1 distance between two pmfs, zero-padding to a common length."""
    a = _as_masses(p)
    b = _as_masses(q)
    n = max(a.size, b.size)
    out = np.zeros(n)
    out[: a.size] = a
    out[: b.size] -= b
    return float(0.5 * np.abs(out).sum())


def capped_geometric(gamma: float, k: int) -> Pmf:
    """Geometric law with success gamma whose tail beyond k collapses onto k.

    Mass gamma*(1-gamma)**(x-1) at x = 1..k-1 (zero-based 0..k-2) and the
    full remaining tail (1-gamma)**(k-1) at the cap.
    """
    gamma = float(gamma)
    if not 0.0 < gamma <= 1.0:
        raise BadParameterError(f"gamma must be in (0, 1], got {gamma!r}")
    if not isinstance(k, (int, np.integer)) or k < 1:
        raise BadParameterError(f"cap must be an integer >= 1, got {k!r}")
    tail = (1.0 - gamma) ** np.arange(k, dtype=np.float64)
    masses = gamma * tail
    masses[-1] = tail[-1]
    return Pmf(masses)


def geometric_entropy(alpha: float = 1.0) -> float:
    """Renyi entropy in bits of the geometric law with success 1/2.

    Closed form: infinite at alpha=0 (countable support), 2 bits at
    alpha=1, 1 bit at alpha=inf.
    """
    alpha = _check_order(alpha)
    if alpha == 0.0:
        return math.inf
    if alpha == math.inf:
        return 1.0
    if abs(alpha - 1.0) < _SHANNON_BAND:
        return 2.0
    return (-alpha - math.log2(1.0 - 2.0**-alpha)) / (1.0 - alpha)

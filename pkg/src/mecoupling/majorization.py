"""Majorization order on pmfs and the greatest lower bound of a collection.

q is majorized by p when, for every k, the k largest masses of q sum to no
more than the k largest masses of p. The greatest lower bound of a
collection is the pmf whose sorted prefix sums are the pointwise minima of
the collection's sorted prefix sums; it is majorized by every member and
majorizes everything else that is.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyCollectionError, SupportTooLargeError
from .pmf import Pmf, _as_masses

MAJORIZATION_SLACK = 1e-12

# 2**support subsets are enumerated above this the oracle refuses to run.
ORACLE_SUPPORT_CAP = 14


def _sorted_prefix(masses: np.ndarray, n: int) -> np.ndarray:
    """Sums of the k largest masses for k = 1..n, padding with the total.

    Accumulated in 80-bit extended precision so prefix drift stays below
    1e-17 even at n = 1e6; the 1e-12 comparisons downstream never see it.
    """
    top = np.sort(masses)[::-1]
    out = np.empty(n, dtype=np.longdouble)
    k = min(top.size, n)
    np.cumsum(top[:k].astype(np.longdouble), out=out[:k])
    if k < n:
        out[k:] = out[k - 1]
    return out


def majorizes(p, q, slack: float = MAJORIZATION_SLACK) -> bool:
    """True iff q is majorized by p, within slack per prefix.

    Supports of different sizes are zero-padded to a common length.
    """
    pa = _as_masses(p)
    qa = _as_masses(q)
    n = max(pa.size, qa.size)
    return bool(np.all(_sorted_prefix(qa, n) <= _sorted_prefix(pa, n) + slack))


@dataclass(frozen=True)
class GlbResult:
    """Greatest lower bound plus the prefix minima it came from.

    glb lives in sorted-rank space: entry k is the mass of rank k, and the
    ranks are not any input's labels. prefix[k] is the smallest sum of the
    k+1 largest masses over the collection; it is non-decreasing, concave,
    and ends at 1.
    """

    glb: Pmf
    prefix: np.ndarray


def _glb_prefix(sorted_masses: list[np.ndarray], n: int) -> np.ndarray:
    pref = _sorted_prefix(sorted_masses[0], n)
    for masses in sorted_masses[1:]:
        np.minimum(pref, _sorted_prefix(masses, n), out=pref)
    return pref


def _prefix_to_masses(pref: np.ndarray) -> np.ndarray:
    masses = np.diff(pref, prepend=np.longdouble(0.0))
    # rounding dust where two prefix curves cross can leave a -1e-19 blip
    np.clip(masses, 0.0, None, out=masses)
    return masses.astype(np.float64)


def greatest_lower_bound(ps) -> GlbResult:
    """Greatest lower bound of a pmf collection in the majorization order.

    O(m n log n): sort each pmf, take pointwise minima of the prefix sums,
    and difference the result.
    """
    all_masses = [_as_masses(p) for p in ps]
    if not all_masses:
        raise EmptyCollectionError("need at least one pmf")
    n = max(m.size for m in all_masses)
    pref = _glb_prefix(all_masses, n)
    return GlbResult(glb=Pmf(_prefix_to_masses(pref)), prefix=pref.astype(np.float64))


def _best_prefixes(masses: np.ndarray, n: int) -> np.ndarray:
    """max over subsets A with |A| <= k of p(A), for k = 1..n, by brute force."""
    support = masses[masses > 0.0]
    s = support.size
    if s > ORACLE_SUPPORT_CAP:
        raise SupportTooLargeError(
            f"oracle enumerates 2**support subsets; support {s} exceeds {ORACLE_SUPPORT_CAP}"
        )
    sums = np.zeros(1 << s)
    sizes = np.zeros(1 << s, dtype=np.int64)
    for bit in range(s):
        lo = 1 << bit
        sums[lo : 2 * lo] = sums[:lo] + support[bit]
        sizes[lo : 2 * lo] = sizes[:lo] + 1
    best = np.full(s + 1, 0.0)
    np.maximum.at(best, sizes, sums)
    np.maximum.accumulate(best, out=best)
    out = np.empty(n)
    k = min(s, n)
    out[:k] = best[1 : k + 1]
    out[k:] = best[s]
    return out


def glb_oracle(ps) -> Pmf:
    """Greatest lower bound straight from the definition, for cross-checking.

    Enumerates every support subset of every pmf instead of sorting, takes
    the pointwise minima of the best-k envelopes, and differences them.
    Exponential in the support size, hence the cap of 14.
    """
    all_masses = [_as_masses(p) for p in ps]
    if not all_masses:
        raise EmptyCollectionError("need at least one pmf")
    n = max(m.size for m in all_masses)
    pref = _best_prefixes(all_masses[0], n)
    for masses in all_masses[1:]:
        np.minimum(pref, _best_prefixes(masses, n), out=pref)
    masses = np.diff(pref, prepend=0.0)
    np.clip(masses, 0.0, None, out=masses)
    return Pmf(masses)

"""Builds and checks low-entropy couplings of pmf collections.

The construction: take the greatest lower bound of the collection, run the
excess-transfer scan against every member, then split each rank's transfer
ratios into shared sticks. Every (rank, stick) pair becomes one cell of the
joint distribution, and each member reads its own label off the cell
through its take/skip bit. The result has joint entropy within
2 - 2**(2-m) bits of the lower bound, on at most m*(n-1) + 1 cells.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .alias import majorized_alias
from .bernoulli import DEFAULT_EPS, _split_batch
from .errors import BadParameterError, EmptyCollectionError, ParseError, ZeroRowError
from .majorization import GlbResult, _glb_prefix, _prefix_to_masses, majorizes
from .pmf import Pmf, capped_geometric, entropy, sort_descending, total_variation, _as_masses

# Ratios below this are treated as exactly zero: at every rank past the
# first, at least one member has zero excess in exact arithmetic, and the
# per-rank stick count (hence the support bound) hinges on that zero.
_RATIO_CLAMP = 1e-12

# Largest absolute mass the per-rank argmin zeroing may discard. The scan
# accumulates rounding drift on what should be an exact zero; anything
# bigger than drift means the lower bound itself is inconsistent.
_CONSISTENCY_TOL = 1e-9


@dataclass(frozen=True)
class Coupling:
    """A joint cell distribution plus one label map per input pmf.

    Cell y carries mass q[y] and maps[i][y] is the label distribution i
    shows on that cell, in the input's own label space. provenance[y] is
    the (rank, stick) pair the cell was built from, both zero-based. Cells
    keep construction order - rank-major, stick-minor - and all carry
    positive mass. truncation echoes the step cap the build ran with.
    """

    q: Pmf
    maps: np.ndarray
    provenance: np.ndarray
    n: int
    truncation: int | None = None

    @property
    def m(self) -> int:
        return int(self.maps.shape[0])

    @property
    def n_cells(self) -> int:
        return len(self.q)

    def pushforward(self, i: int) -> Pmf:
        """Marginal of distribution i under the coupling."""
        w = np.bincount(self.maps[i], weights=self.q.masses, minlength=self.n)
        return Pmf(w)


def _padded(masses_list: list[np.ndarray]) -> tuple[np.ndarray, int]:
    n = max(m.size for m in masses_list)
    out = np.zeros((len(masses_list), n))
    for i, m in enumerate(masses_list):
        out[i, : m.size] = m
    return out, n


def _prepare(ps) -> list[np.ndarray]:
    masses = [_as_masses(Pmf(p) if not isinstance(p, Pmf) else p) for p in ps]
    if not masses:
        raise EmptyCollectionError("need at least one pmf to couple")
    return masses


def compute_coupling(
    ps, truncation: int | None = None, eps: float = DEFAULT_EPS
) -> Coupling:
    """Couple a collection of pmfs into one low-entropy joint source.

    Inputs are zero-padded to a common length and sorted internally; the
    output maps speak each input's original labels. Exact mode
    (truncation=None) reproduces every marginal to within 1e-9 total
    variation; a truncation cap L trades that for at most 2**-L while
    bounding the per-rank stick count by L+1.
    """
    coupling, _ = _build(ps, truncation, eps)
    return coupling


def _build(ps, truncation: int | None, eps: float) -> tuple[Coupling, GlbResult]:
    masses_list = _prepare(ps)
    padded, n = _padded(masses_list)
    m = padded.shape[0]

    perms = np.argsort(-padded, axis=1, kind="stable")
    sorted_ps = np.take_along_axis(padded, perms, axis=1)

    pref = _glb_prefix(list(sorted_ps), n)
    glb_masses = _prefix_to_masses(pref)
    glb = Pmf(glb_masses)
    glb_masses = glb.masses

    targets = np.empty((m, n), dtype=np.int64)
    excesses = np.empty((m, n))
    for i in range(m):
        dec = majorized_alias(sorted_ps[i], glb_masses, validate=False)
        targets[i] = dec.target
        excesses[i] = dec.r

    n_pos = int((glb_masses > 0.0).sum())  # descending order: positives are a prefix
    ratios = excesses[:, :n_pos].T / glb_masses[:n_pos, None]

    # every rank past the first has a zero-excess member in exact
    # arithmetic; pin the float argmin to zero so the stick count stays
    # bounded, and refuse if that would discard real mass
    if n_pos > 1:
        rows = np.arange(1, n_pos)
        j = np.argmin(ratios[1:], axis=1)
        discarded = ratios[rows, j] * glb_masses[1:n_pos]
        worst = discarded.max(initial=0.0)
        if worst > _CONSISTENCY_TOL:
            raise RuntimeError(
                "lower-bound consistency broken: "
                f"a rank has no zero-excess member ({float(worst)!r})"
            )
        ratios[rows, j] = 0.0
    ratios[ratios < _RATIO_CLAMP] = 0.0

    sticks, takes, counts = _split_batch(ratios, truncation, eps)

    cell_rank = np.repeat(np.arange(n_pos), counts)
    cell_stick = np.arange(cell_rank.size) - np.repeat(
        np.cumsum(counts) - counts, counts
    )
    cell_mass = glb_masses[cell_rank] * sticks[cell_rank, cell_stick]

    keep = cell_mass > 0.0
    if not keep.all():
        cell_rank, cell_stick, cell_mass = cell_rank[keep], cell_stick[keep], cell_mass[keep]

    maps = np.empty((m, cell_rank.size), dtype=np.int64)
    for i in range(m):
        bit = takes[cell_rank, i, cell_stick]
        sorted_label = np.where(bit, targets[i, cell_rank], cell_rank)
        maps[i] = perms[i, sorted_label]

    coupling = Coupling(
        q=Pmf(cell_mass),
        maps=maps,
        provenance=np.stack([cell_rank, cell_stick], axis=1),
        n=n,
        truncation=None if truncation is None else int(truncation),
    )
    return coupling, GlbResult(glb=glb, prefix=pref.astype(np.float64))


@dataclass(frozen=True)
class CouplingReport:
    """Everything verify_coupling measured, with one flag per check."""

    tv: np.ndarray
    tv_bound: float
    entropy: float
    glb_entropy: float
    gap: float
    gap_bound: float
    support: int
    support_bound: int
    marginals_ok: bool
    support_ok: bool
    entropy_ok: bool
    majorizes_product: bool

    @property
    def passed(self) -> bool:
        return bool(
            self.marginals_ok and self.support_ok and self.entropy_ok and self.majorizes_product
        )

    def as_dict(self) -> dict:
        return {
            "tv": self.tv.tolist(),
            "tv_bound": self.tv_bound,
            "entropy": self.entropy,
            "glb_entropy": self.glb_entropy,
            "gap": self.gap,
            "gap_bound": self.gap_bound,
            "support": self.support,
            "support_bound": self.support_bound,
            "marginals_ok": self.marginals_ok,
            "support_ok": self.support_ok,
            "entropy_ok": self.entropy_ok,
            "majorizes_product": self.majorizes_product,
            "passed": self.passed,
        }


VERIFY_TOL = 1e-9


def verify_coupling(coupling: Coupling, ps, tol: float = VERIFY_TOL) -> CouplingReport:
    """Measure a coupling against the collection it claims to couple.

    Checks per-marginal total variation (within tol, plus 2**-L when the
    coupling was built truncated), the support bound m*(n-1) + 1, the
    entropy sandwich between the lower bound and lower bound + 2 - 2**(2-m),
    and that the cell masses majorize the lower bound crossed with the
    capped geometric yardstick.
    """
    masses_list = _prepare(ps)
    padded, _ = _padded(masses_list)
    m = padded.shape[0]
    if m != coupling.m:
        raise ParseError(f"coupling joins {coupling.m} distributions, collection has {m}")

    tv_bound = tol if coupling.truncation is None else tol + 2.0**-coupling.truncation
    tv = np.array([total_variation(coupling.pushforward(i), padded[i]) for i in range(m)])

    glb = greatest_lower_bound_of(padded)
    h_cells = entropy(coupling.q)
    h_glb = entropy(glb)
    gap_bound = 2.0 - 2.0 ** (2 - coupling.m)
    support = coupling.n_cells
    support_bound = coupling.m * (coupling.n - 1) + 1

    yardstick = capped_geometric(0.5, coupling.m)
    product = np.outer(glb.masses, yardstick.masses).ravel()
    product = product[product > 0.0]

    marginals_ok = bool((tv <= tv_bound).all())
    support_ok = support <= support_bound
    entropy_ok = (h_glb - tol <= h_cells) and (h_cells <= h_glb + gap_bound + tol)
    maj_ok = majorizes(coupling.q, product)

    return CouplingReport(
        tv=tv,
        tv_bound=float(tv_bound),
        entropy=h_cells,
        glb_entropy=h_glb,
        gap=h_cells - h_glb,
        gap_bound=gap_bound,
        support=support,
        support_bound=support_bound,
        marginals_ok=marginals_ok,
        support_ok=support_ok,
        entropy_ok=entropy_ok,
        majorizes_product=maj_ok,
    )


def greatest_lower_bound_of(padded: np.ndarray) -> Pmf:
    """Greatest lower bound of already-padded rows, as a bare Pmf."""
    sorted_ps = -np.sort(-padded, axis=1)
    pref = _glb_prefix(list(sorted_ps), padded.shape[1])
    return Pmf(_prefix_to_masses(pref))


def glb_entropy_score(joint) -> float:
    """Entropy in bits of the greatest lower bound of a joint table's rows.

    The rows are the conditionals of the column variable given the row
    variable, so this is the irreducible entropy any coupling of those
    conditionals must keep. Every row must carry mass.
    """
    arr = np.asarray(joint, dtype=np.float64)
    if arr.ndim != 2 or arr.size == 0:
        raise BadParameterError("joint table must be a non-empty 2-d array")
    row_sums = arr.sum(axis=1)
    dead = np.flatnonzero(row_sums <= 0.0)
    if dead.size:
        raise ZeroRowError(f"row {int(dead[0])} of the joint table has no mass")
    conditionals = [Pmf(row / s) for row, s in zip(arr, row_sums)]
    res = _glb_prefix([np.sort(c.masses)[::-1] for c in conditionals], arr.shape[1])
    return entropy(Pmf(_prefix_to_masses(res)))

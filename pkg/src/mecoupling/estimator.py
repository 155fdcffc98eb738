"""Scikit-learn style front end for fitting and sampling couplings."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_array, check_is_fitted

from .engine import CouplingReport, _build, verify_coupling
from .pmf import Pmf, entropy
from .sampling import sample_coupling


class MinEntropyCoupler(BaseEstimator):
    """Couples the rows of X, each a pmf over the columns, into one joint
    source whose entropy is within 2 - 2**(2-m) bits of the lowest any
    coupling of those rows can reach.

    Parameters
    ----------
    truncation : int or None, default None
        Step cap for the stick splitting. None is exact (marginals
        reproduced to 1e-9 total variation); an integer L trades accuracy
        (2**-L) for a hard per-rank work bound.
    eps : float, default 1e-12
        Residual mass below which the splitting loop stops.

    Attributes fitted: coupling_, glb_, entropy_, glb_entropy_,
    entropy_gap_, gap_bound_, n_cells_, n_features_in_.
    """

    def __init__(self, truncation: int | None = None, eps: float = 1e-12):
        self.truncation = truncation
        self.eps = eps

    def fit(self, X, y=None):
        """Build the coupling of the rows of X. Each row must be a pmf."""
        X = check_array(X, dtype=np.float64)
        pmfs = [Pmf(row) for row in X]
        coupling, glb = _build(pmfs, self.truncation, self.eps)
        self.n_features_in_ = X.shape[1]
        self.coupling_ = coupling
        self.glb_ = glb.glb.masses
        self.entropy_ = entropy(coupling.q)
        self.glb_entropy_ = entropy(glb.glb)
        self.entropy_gap_ = self.entropy_ - self.glb_entropy_
        self.gap_bound_ = 2.0 - 2.0 ** (2 - coupling.m)
        self.n_cells_ = coupling.n_cells
        self._fit_pmfs = pmfs
        return self

    def sample(self, n_samples: int = 1, random_state: int | None = None) -> np.ndarray:
        """Draw correlated labels, one column per fitted row.

        random_state keys the pinned counter-based generator; None draws a
        fresh seed from the OS entropy pool.
        """
        check_is_fitted(self, "coupling_")
        if random_state is None:
            random_state = int(np.random.SeedSequence().entropy % 2**64)
        _, labels = sample_coupling(self.coupling_, random_state, n_samples)
        return labels

    def verify(self) -> CouplingReport:
        """Re-measure the fitted coupling against the training rows."""
        check_is_fitted(self, "coupling_")
        return verify_coupling(self.coupling_, self._fit_pmfs)

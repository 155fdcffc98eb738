"""Estimator-convention tests for the sklearn front end."""

import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from mecoupling import MinEntropyCoupler, NotNormalizedError, total_variation

X_GOLDEN = np.array([[0.5, 0.5], [0.75, 0.25]])


class TestConventions:
    def test_get_params(self):
        est = MinEntropyCoupler(truncation=12, eps=1e-10)
        assert est.get_params() == {"truncation": 12, "eps": 1e-10}

    def test_set_params(self):
        est = MinEntropyCoupler().set_params(truncation=5)
        assert est.truncation == 5

    def test_clone_keeps_params_drops_state(self):
        est = MinEntropyCoupler(truncation=9).fit(X_GOLDEN)
        twin = clone(est)
        assert twin.truncation == 9
        assert not hasattr(twin, "coupling_")

    def test_params_stored_verbatim(self):
        # no validation or conversion at construction time
        est = MinEntropyCoupler(truncation="bogus")
        assert est.truncation == "bogus"

    def test_fit_returns_self(self):
        est = MinEntropyCoupler()
        assert est.fit(X_GOLDEN) is est

    def test_unfitted_raises(self):
        with pytest.raises(NotFittedError):
            MinEntropyCoupler().sample(3)
        with pytest.raises(NotFittedError):
            MinEntropyCoupler().verify()

    def test_refit_replaces_state(self, rng):
        est = MinEntropyCoupler().fit(X_GOLDEN)
        first = est.entropy_
        rows = rng.dirichlet(np.ones(4), size=3)
        est.fit(rows)
        assert est.n_features_in_ == 4
        assert est.entropy_ != first


class TestFittedAttributes:
    def test_golden_fit(self):
        est = MinEntropyCoupler().fit(X_GOLDEN)
        assert est.n_features_in_ == 2
        assert est.n_cells_ == 3
        assert est.entropy_ == pytest.approx(1.5, abs=1e-12)
        assert est.glb_entropy_ == pytest.approx(1.0, abs=1e-12)
        assert est.entropy_gap_ == pytest.approx(0.5, abs=1e-12)
        assert est.gap_bound_ == 1.0
        np.testing.assert_allclose(est.glb_, [0.5, 0.5], atol=1e-12)

    def test_gap_within_bound(self, rng):
        for _ in range(20):
            rows = rng.dirichlet(np.ones(int(rng.integers(2, 10))), size=int(rng.integers(1, 6)))
            est = MinEntropyCoupler().fit(rows)
            assert -1e-9 <= est.entropy_gap_ <= est.gap_bound_ + 1e-9

    def test_truncation_recorded_on_coupling(self):
        est = MinEntropyCoupler(truncation=7).fit(X_GOLDEN)
        assert est.coupling_.truncation == 7

    def test_verify_passes(self, rng):
        rows = rng.dirichlet(np.ones(6), size=3)
        assert MinEntropyCoupler().fit(rows).verify().passed


class TestSampling:
    def test_shape(self):
        est = MinEntropyCoupler().fit(X_GOLDEN)
        draws = est.sample(40, random_state=1)
        assert draws.shape == (40, 2)

    def test_reproducible_with_seed(self):
        est = MinEntropyCoupler().fit(X_GOLDEN)
        a = est.sample(100, random_state=11)
        b = est.sample(100, random_state=11)
        assert a.tobytes() == b.tobytes()

    def test_fresh_seed_without_state(self):
        est = MinEntropyCoupler().fit(X_GOLDEN)
        draws = est.sample(10)
        assert draws.shape == (10, 2)

    def test_marginal_frequencies(self, rng):
        rows = rng.dirichlet(np.ones(5), size=3)
        est = MinEntropyCoupler().fit(rows)
        draws = est.sample(60000, random_state=77)
        for i in range(3):
            freq = np.bincount(draws[:, i], minlength=5) / 60000
            assert total_variation(rows[i], freq) < 0.01


class TestInputValidation:
    def test_rejects_one_dimensional(self):
        with pytest.raises(ValueError):
            MinEntropyCoupler().fit(np.array([0.5, 0.5]))

    def test_rejects_unnormalized_rows(self):
        with pytest.raises(NotNormalizedError):
            MinEntropyCoupler().fit(np.array([[0.5, 0.1], [0.5, 0.5]]))

    def test_rejects_nan(self):
        with pytest.raises(ValueError):
            MinEntropyCoupler().fit(np.array([[np.nan, 1.0]]))

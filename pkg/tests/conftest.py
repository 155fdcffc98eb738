import numpy as np
import pytest

from mecoupling import Pmf


@pytest.fixture
def rng():
    return np.random.default_rng(20260816)


def random_pmf(rng, n, sparsity=0.0):
    """Dirichlet draw over n cells, optionally zeroing a random subset."""
    w = rng.dirichlet(np.ones(n))
    if sparsity > 0.0 and n > 1:
        kill = rng.random(n) < sparsity
        if kill.all():
            kill[rng.integers(n)] = False
        w = np.where(kill, 0.0, w)
        w /= w.sum()
    return Pmf(w)


def random_collection(rng, m, n, sparsity=0.0):
    return [random_pmf(rng, n, sparsity) for _ in range(m)]


def random_majorized_pair(rng, n):
    """Return (p, q) sorted descending with q majorized by p.

    Averaging a distribution with permuted copies of itself only ever
    moves it down the majorization order, so q built that way is always
    below p.
    """
    p = random_pmf(rng, n).masses
    q = p.copy()
    for _ in range(int(rng.integers(1, 4))):
        perm = rng.permutation(n)
        lam = rng.random()
        q = lam * q + (1.0 - lam) * q[perm]
    p = np.sort(p)[::-1].copy()
    q = np.sort(q)[::-1].copy()
    return Pmf(p), Pmf(q)

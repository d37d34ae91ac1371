import numpy as np
import pytest

from grpsel.design import build_design
from grpsel.scenarios import equicorrelated_columns


def gaussian_problem(n, sizes, beta=None, sigma=1.0, correlation=0.0, seed=0):
    """Raw (X, y, labels, beta) draw with grouped structure."""
    sizes = np.asarray(sizes, dtype=int)
    p = int(sizes.sum())
    labels = np.repeat(np.arange(len(sizes)), sizes)
    rng = np.random.default_rng(seed)
    X = equicorrelated_columns(n, p, correlation, rng)
    if beta is None:
        beta = np.zeros(p)
    beta = np.asarray(beta, dtype=float)
    y = X @ beta + sigma * rng.standard_normal(n)
    return X, y, labels, beta


def gaussian_design(n, sizes, beta=None, sigma=1.0, correlation=0.0, seed=0,
                    weights="sqrt", orthonormalize=True):
    X, y, labels, beta = gaussian_problem(n, sizes, beta, sigma, correlation, seed)
    design = build_design(X, y, labels, weights=weights, orthonormalize=orthonormalize)
    return design, beta


def cross_orthogonal_design(n, sizes, y=None, seed=0, weights="sqrt"):
    """A design whose group blocks are mutually orthogonal and orthonormal."""
    sizes = np.asarray(sizes, dtype=int)
    p = int(sizes.sum())
    assert p <= n
    rng = np.random.default_rng(seed)
    raw = rng.standard_normal((n, p))
    raw -= raw.mean(axis=0)  # keep columns centered after the QR
    q, _ = np.linalg.qr(raw)
    X = q[:, :p] * np.sqrt(n)
    labels = np.repeat(np.arange(len(sizes)), sizes)
    if y is None:
        y = rng.standard_normal(n)
    return build_design(X, y, labels, weights=weights, orthonormalize=True)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)

import math

import numpy as np

from grpsel.cv import DEFAULT_GAMMA_GRID, kfold_cv
from grpsel.paths import PathConfig, solution_path
from grpsel.penalties import PenaltySpec

from conftest import gaussian_design


def test_dispatch_covers_every_family():
    beta = np.array([1.0, 0.0, -0.7, 0.0, 0.4, 0.0])
    orth, _ = gaussian_design(60, [2, 2, 2], beta=beta, sigma=0.5, seed=1)
    flat, _ = gaussian_design(60, [2, 2, 2], beta=beta, sigma=0.5, seed=1,
                              orthonormalize=False)
    bridge, _ = gaussian_design(60, [2, 2, 2], beta=beta, sigma=0.5, seed=1,
                                orthonormalize=False, weights=("pow", 0.5))
    config = PathConfig(n_lambda=8, lambda_min_ratio=0.05)
    for family, design in [("glasso", orth), ("gmcp", orth), ("gscad", orth),
                           ("gbridge", bridge), ("cmcp", flat), ("sgl", flat)]:
        path = solution_path(design, PenaltySpec(family, lam=0.0), config)
        assert len(path.fits) == 8
        assert np.all(np.isfinite(path.coef_matrix()))
        assert np.all(path.fits[0].beta == 0.0)


def test_lcd_multi_gamma_sweep_concatenates_blocks():
    flat, _ = gaussian_design(50, [2, 2], sigma=0.5, seed=2,
                              beta=np.array([1.0, 0.0, 0.0, -0.5]),
                              orthonormalize=False)
    config = PathConfig(n_lambda=5, lambda_min_ratio=0.05,
                        gamma_grid=(2.0, 3.0))
    path = solution_path(flat, PenaltySpec("cmcp", lam=0.0), config)
    assert len(path.fits) == 10
    gammas = [g for _, g in path.grid]
    assert gammas == [2.0] * 5 + [3.0] * 5


def test_sgl_fixed_lambda2():
    flat, _ = gaussian_design(50, [2, 2], sigma=0.5, seed=3,
                              beta=np.array([1.0, 0.0, 0.0, -0.5]),
                              orthonormalize=False)
    config = PathConfig(n_lambda=6, lambda_min_ratio=0.05, sgl_lambda2=0.02)
    path = solution_path(flat, PenaltySpec("sgl", lam=0.0), config)
    assert all(l2 == 0.02 for _, l2 in path.grid)


def test_cv_with_lcd_gamma_sweep_keeps_folds_aligned():
    flat, _ = gaussian_design(60, [2, 2], sigma=0.5, seed=5,
                              beta=np.array([1.2, 0.0, 0.0, -0.8]),
                              orthonormalize=False)
    config = PathConfig(n_lambda=5, lambda_min_ratio=0.05,
                        gamma_grid=(2.0, 3.0))
    report = kfold_cv(flat, PenaltySpec("cmcp", lam=0.0), config, K=4, seed=5)
    assert len(report.grid) == 10
    assert np.all(np.isfinite(report.mean_cv_error))


def test_cv_applies_default_gamma_grid_for_concave_families():
    orth, _ = gaussian_design(60, [2, 2], sigma=0.5, seed=4,
                              beta=np.array([1.2, -0.8, 0.0, 0.0]))
    config = PathConfig(n_lambda=6, lambda_min_ratio=0.05)
    report = kfold_cv(orth, PenaltySpec("gmcp", lam=0.0), config, K=4, seed=4)
    assert len(report.grid) == 6 * len(DEFAULT_GAMMA_GRID["gmcp"])
    gammas = sorted({g for _, g in report.grid})
    assert gammas == [1.2, 2.7, 3.7, math.inf]
    scad = kfold_cv(orth, PenaltySpec("gscad", lam=0.0), config, K=4, seed=4)
    assert len(scad.grid) == 6 * len(DEFAULT_GAMMA_GRID["gscad"])
    assert all(g > 2 for _, g in scad.grid)

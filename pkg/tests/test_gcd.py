import math

import numpy as np
import pytest

from grpsel.design import GroupedDesign, build_design
from grpsel.errors import NotOrthonormalized, UnsupportedFamily
from grpsel.gcd import fit_gcd, fit_path, kkt_check, lambda_grid, lambda_max
from grpsel.penalties import PenaltySpec, objective, solve_single_group

from conftest import cross_orthogonal_design, gaussian_design, gaussian_problem


def _hand_design():
    # one group of two, X = sqrt(2)*I at n=2, chosen so X'y/n = (3, 4)
    X = math.sqrt(2.0) * np.eye(2)
    y = np.array([3 * math.sqrt(2.0), 4 * math.sqrt(2.0)])
    return GroupedDesign(
        y=y,
        X=X,
        groups=((0, 2),),
        cj=np.array([1.0]),
        U=(np.eye(2),),
        orthonormalized=True,
        X_centered=X,
        X_raw=X,
        y_raw=y,
        order=np.array([0, 1]),
        labels=np.array([0, 0]),
        y_mean=0.0,
        x_mean=np.zeros(2),
        weights_rule=("custom", (1.0,)),
    )


class TestLambdaMax:
    def test_orthogonal_response_gives_zero(self):
        design = cross_orthogonal_design(20, [2, 2], seed=0)
        y = np.ones(20) - design.X @ np.linalg.lstsq(design.X, np.ones(20), rcond=None)[0]
        d2 = design.with_response(y)
        assert lambda_max(d2) < 1e-12

    def test_hand_norm(self):
        assert lambda_max(_hand_design()) == pytest.approx(5.0, rel=1e-12)

    @pytest.mark.parametrize("family", ["glasso", "gmcp", "gscad"])
    def test_fit_at_lambda_max_is_exactly_zero(self, family):
        design, _ = gaussian_design(60, [2, 3, 1, 4], sigma=1.0, seed=3,
                                    beta=np.repeat([1.0, -0.5, 2.0, 0.0], [2, 3, 1, 4]))
        pen = PenaltySpec(family, lam=lambda_max(design))
        fit = fit_gcd(design, pen)
        assert np.all(fit.beta == 0.0)
        assert fit.converged and fit.iterations == 1
        slightly_less = fit_gcd(design, pen.with_lam(0.999 * lambda_max(design)))
        assert np.any(slightly_less.beta != 0.0)


class TestFitGcd:
    def test_orthogonal_groups_one_cycle_closed_form(self):
        design = cross_orthogonal_design(40, [2, 3, 1], seed=1)
        pen = PenaltySpec("gmcp", lam=0.2, gamma=2.7)
        fit = fit_gcd(design, pen)
        expected = np.concatenate([
            solve_single_group(
                design.X[:, design.group_slice(j)].T @ design.y / design.n,
                design.cj[j] * 0.2,
                2.7,
                "gmcp",
            )
            for j in range(design.J)
        ])
        np.testing.assert_allclose(fit.coef, expected, atol=1e-12)
        assert fit.iterations <= 2

    @pytest.mark.parametrize("family", ["glasso", "gmcp", "gscad"])
    def test_kkt_small_after_convergence(self, family):
        beta = np.repeat([1.5, 0.0, -1.0, 0.0, 0.5], [3, 3, 3, 3, 3])
        design, _ = gaussian_design(50, [3] * 5, beta=beta, sigma=0.5,
                                    correlation=0.3, seed=5)
        pen = PenaltySpec(family, lam=0.3 * lambda_max(design))
        fit = fit_gcd(design, pen, tol=1e-10)
        assert fit.converged
        assert fit.kkt_max_violation <= 1e-6
        assert kkt_check(design, pen, fit.coef) == fit.kkt_max_violation

    def test_descent_and_residual_integrity(self):
        design, _ = gaussian_design(50, [2, 2, 2, 2], sigma=1.0, seed=6)
        pen = PenaltySpec("gscad", lam=0.2 * lambda_max(design))
        fit = fit_gcd(design, pen, tol=1e-10, check_descent=True)
        assert fit.max_descent_violation <= 1e-12
        assert fit.residual_drift <= 1e-8

    def test_objective_recomputes(self):
        design, _ = gaussian_design(40, [2, 3], sigma=1.0, seed=7)
        pen = PenaltySpec("glasso", lam=0.1)
        fit = fit_gcd(design, pen)
        assert fit.objective == pytest.approx(
            objective(design, fit.coef, pen), rel=1e-10
        )

    def test_convex_fit_unique_across_inits(self, rng):
        design, _ = gaussian_design(80, [2, 2, 3], sigma=1.0, seed=8)
        pen = PenaltySpec("glasso", lam=0.05)
        a = fit_gcd(design, pen, tol=1e-11)
        b = fit_gcd(design, pen, init=rng.standard_normal(7), tol=1e-11)
        assert a.objective == pytest.approx(b.objective, abs=1e-8)

    def test_strictly_convex_mcp_unique_across_inits(self, rng):
        design, _ = gaussian_design(200, [2, 2, 2], sigma=0.8, seed=9)
        sigma_full = design.X.T @ design.X / design.n
        c_min = np.linalg.eigvalsh(sigma_full)[0]
        gamma = 2.0 / c_min  # comfortably above the strict convexity level
        pen = PenaltySpec("gmcp", lam=0.1, gamma=gamma)
        a = fit_gcd(design, pen, tol=1e-11)
        b = fit_gcd(design, pen, init=rng.standard_normal(6), tol=1e-11)
        np.testing.assert_allclose(a.beta, b.beta, atol=1e-5)

    def test_requires_orthonormalized_design(self):
        X, y, labels, _ = gaussian_problem(30, [2, 2], seed=10)
        design = build_design(X, y, labels, orthonormalize=False)
        with pytest.raises(NotOrthonormalized):
            fit_gcd(design, PenaltySpec("glasso", lam=0.1))
        with pytest.raises(UnsupportedFamily):
            fit_gcd(design, PenaltySpec("gbridge", lam=0.1))

    def test_max_iter_returns_unconverged(self):
        design, _ = gaussian_design(50, [2, 2], sigma=1.0, seed=11, correlation=0.6)
        fit = fit_gcd(design, PenaltySpec("glasso", lam=0.01), tol=1e-14, max_iter=1)
        assert not fit.converged
        assert fit.iterations == 1


class TestKktCheck:
    def test_zero_solution_above_lambda_max(self):
        design, _ = gaussian_design(40, [2, 3], sigma=1.0, seed=12)
        pen = PenaltySpec("glasso", lam=1.001 * lambda_max(design))
        assert kkt_check(design, pen, np.zeros(5)) == 0.0

    def test_exact_single_group_solution(self):
        design = cross_orthogonal_design(30, [3, 2], seed=13)
        pen = PenaltySpec("glasso", lam=0.15)
        coef = np.concatenate([
            solve_single_group(
                design.X[:, design.group_slice(j)].T @ design.y / design.n,
                design.cj[j] * pen.lam,
                math.inf,
                "glasso",
            )
            for j in range(design.J)
        ])
        assert kkt_check(design, pen, coef) <= 1e-10


class TestFitPath:
    def test_first_fit_zero_and_descending_grid(self):
        design, _ = gaussian_design(
            60, [2, 3, 3], beta=np.repeat([2.0, -1.0, 0.0], [2, 3, 3]),
            sigma=0.5, seed=14,
        )
        path = fit_path(design, PenaltySpec("glasso", lam=0.0), n_lambda=25)
        assert np.all(path.fits[0].beta == 0.0)
        lams = [lam for lam, _ in path.grid]
        assert lams == sorted(lams, reverse=True)
        assert path.grid[0][0] == pytest.approx(path.lambda_max)
        coefs = path.coef_matrix()
        assert np.all(np.isfinite(coefs))
        norms = path.group_norm_matrix(design)
        assert norms.shape == (25, 3)
        assert np.all(norms[0] == 0.0)

    def test_warm_start_descent_from_init(self):
        design, _ = gaussian_design(
            60, [2, 2, 2], beta=np.array([1.0, 1.0, 0.0, 0.0, -1.0, 0.5]),
            sigma=0.5, seed=15,
        )
        pen = PenaltySpec("gmcp", lam=0.0, gamma=3.0)
        path = fit_path(design, pen, n_lambda=20)
        for k in range(1, len(path.fits)):
            pen_k = pen.with_lam(path.grid[k][0])
            at_init = objective(design, path.fits[k - 1].coef, pen_k)
            assert path.fits[k].objective <= at_init + 1e-12

    def test_group_lasso_init_strategy(self):
        design, _ = gaussian_design(
            60, [2, 2, 2], beta=np.array([1.0, 1.0, 0.0, 0.0, -1.0, 0.5]),
            sigma=0.5, seed=15,
        )
        pen = PenaltySpec("gmcp", lam=0.0, gamma=2.0)
        path = fit_path(design, pen, n_lambda=20, warm_start="group_lasso_init")
        assert np.all(path.fits[0].beta == 0.0)
        assert all(f.converged for f in path.fits)
        # both strategies solve the same problems; converged objectives agree
        chained = fit_path(design, pen, n_lambda=20)
        for a, b in zip(path.fits, chained.fits):
            assert a.objective == pytest.approx(b.objective, abs=1e-6)

    def test_noiseless_orthogonal_path_reaches_least_squares(self):
        design = cross_orthogonal_design(40, [2, 2], seed=16)
        beta = np.array([1.0, -2.0, 0.5, 0.0])
        d2 = design.with_response(design.X @ beta)
        path = fit_path(d2, PenaltySpec("glasso", lam=0.0), n_lambda=40,
                        lambda_min_ratio=1e-6, tol=1e-12)
        np.testing.assert_allclose(path.fits[-1].coef, beta, atol=1e-4)

    def test_infinite_gamma_sentinel_equals_group_lasso_path(self):
        design, _ = gaussian_design(
            50, [2, 3], beta=np.array([1.0, 0.0, 0.5, -0.5, 0.0]),
            sigma=0.3, seed=17,
        )
        mcp_inf = fit_path(design, PenaltySpec("gmcp", lam=0.0, gamma=math.inf),
                           n_lambda=15)
        glasso = fit_path(design, PenaltySpec("glasso", lam=0.0), n_lambda=15)
        for a, b in zip(mcp_inf.fits, glasso.fits):
            np.testing.assert_array_equal(a.beta, b.beta)

    def test_big_gamma_path_close_to_group_lasso(self):
        design, _ = gaussian_design(
            50, [2, 3], beta=np.array([1.0, 0.0, 0.5, -0.5, 0.0]),
            sigma=0.3, seed=17,
        )
        for family in ("gmcp", "gscad"):
            big = fit_path(design, PenaltySpec(family, lam=0.0, gamma=1e8),
                           n_lambda=15, tol=1e-9)
            glasso = fit_path(design, PenaltySpec("glasso", lam=0.0),
                              n_lambda=15, tol=1e-9)
            for a, b in zip(big.fits, glasso.fits):
                np.testing.assert_allclose(a.beta, b.beta, atol=1e-4)

    def test_gamma_grid_orders_points_within_gamma(self):
        design, _ = gaussian_design(40, [2, 2], sigma=1.0, seed=18)
        path = fit_path(design, PenaltySpec("gmcp", lam=0.0, gamma=3.0),
                        n_lambda=5, gamma_grid=[1.5, 3.0])
        gammas = [g for _, g in path.grid]
        assert gammas == [1.5] * 5 + [3.0] * 5


def test_lambda_grid_endpoints_exact():
    grid = lambda_grid(2.0, 7, 0.01)
    assert grid[0] == 2.0
    assert grid[-1] == pytest.approx(0.02, rel=1e-12)
    assert np.all(np.diff(grid) < 0)
    with pytest.raises(ValueError):
        lambda_grid(1.0, 1, 0.1)
    with pytest.raises(ValueError):
        lambda_grid(1.0, 5, 1.5)

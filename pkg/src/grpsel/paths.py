"""Uniform pathwise fitting across all penalty families."""

from dataclasses import dataclass

from .bilevel import fit_path_lcd, fit_path_sgl
from .gcd import SolutionPath, fit_path
from .penalties import PenaltySpec


@dataclass(frozen=True)
class PathConfig:
    """Grid and solver settings shared by path fits and cross-validation.

    ``gamma_grid`` applies to the concave 2-norm families; ``None`` means
    the single value carried by the penalty spec.  For the sgl family the
    group-level parameter follows the grid as
    ``lam2 = sgl_lambda2_ratio * lam1`` unless ``sgl_lambda2`` pins it.
    """

    n_lambda: int = 100
    lambda_min_ratio: float = None
    gamma_grid: tuple = None
    warm_start: str = "previous_lambda"
    tol: float = 1e-7
    max_iter: int = 10_000
    sgl_lambda2_ratio: float = 1.0
    sgl_lambda2: float = None


def solution_path(
    design, pen_template: PenaltySpec, config: PathConfig = None, lambdas=None
) -> SolutionPath:
    """Fit the full path for any family, dispatching on the penalty."""
    if config is None:
        config = PathConfig()
    fam = pen_template.family
    if fam in ("glasso", "gmcp", "gscad"):
        return fit_path(
            design,
            pen_template,
            n_lambda=config.n_lambda,
            lambda_min_ratio=config.lambda_min_ratio,
            gamma_grid=config.gamma_grid,
            warm_start=config.warm_start,
            lambdas=lambdas,
            tol=config.tol,
            max_iter=config.max_iter,
        )
    if fam == "sgl":
        return fit_path_sgl(
            design,
            lam2_ratio=config.sgl_lambda2_ratio,
            lam2=config.sgl_lambda2,
            n_lambda=config.n_lambda,
            lambda_min_ratio=config.lambda_min_ratio,
            lambdas=lambdas,
            tol=config.tol,
            max_iter=config.max_iter,
        )
    if config.gamma_grid is not None and len(config.gamma_grid) > 1:
        # one lambda grid shared across the gamma sweep, so grids built on
        # different data (cross-validation folds) stay aligned point-for-point
        paths = []
        shared = lambdas
        for g in config.gamma_grid:
            block = fit_path_lcd(
                design,
                pen_template.with_gamma(g),
                n_lambda=config.n_lambda,
                lambda_min_ratio=config.lambda_min_ratio,
                lambdas=shared,
                tol=config.tol,
                max_iter=config.max_iter,
            )
            if shared is None:
                shared = [lam for lam, _ in block.grid]
            paths.append(block)
        return SolutionPath(
            family=fam,
            grid=[pt for p in paths for pt in p.grid],
            fits=[f for p in paths for f in p.fits],
            lambda_max=paths[0].lambda_max,
        )
    pen = pen_template
    if config.gamma_grid is not None:
        pen = pen_template.with_gamma(config.gamma_grid[0])
    return fit_path_lcd(
        design,
        pen,
        n_lambda=config.n_lambda,
        lambda_min_ratio=config.lambda_min_ratio,
        lambdas=lambdas,
        tol=config.tol,
        max_iter=config.max_iter,
    )

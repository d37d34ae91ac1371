"""Independent reference computations used as test oracles.

Everything here recomputes expected values by a route separate from the
package code: quadrature of the defining penalty integrands, brute-force
radial grids with golden-section polish for the group threshold operators,
numeric minimization for proximal maps, and a plain coordinate-descent
LASSO.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.optimize import minimize


def rho_quadrature(t, lam, gamma, family):
    """Penalty value by numerical quadrature of its defining integrand."""
    if family == "l1":
        return lam * t
    if family == "mcp":
        kinks = [s for s in (gamma * lam,) if 0 < s < t]
        val, _ = quad(lambda s: lam * max(1 - s / (gamma * lam), 0.0), 0, t,
                      points=kinks or None, epsabs=1e-12, limit=200)
        return val
    if family == "scad":
        kinks = [s for s in (lam, gamma * lam) if 0 < s < t]
        val, _ = quad(
            lambda s: lam * min(1.0, max(gamma - s / lam, 0.0) / (gamma - 1)), 0, t,
            points=kinks or None, epsabs=1e-12, limit=200,
        )
        return val
    if family == "bridge":
        return lam * t**gamma
    raise ValueError(family)


def _pen_radial(r, lam, gamma, family):
    # independent closed forms, written out separately from the package;
    # vectorized over r so the oracle grid stays cheap
    r = np.asarray(r, dtype=float)
    if family == "glasso" or math.isinf(gamma):
        return lam * r
    if family == "gmcp":
        return np.where(
            r < gamma * lam, lam * r - r * r / (2 * gamma), gamma * lam * lam / 2
        )
    if family == "gscad":
        mid = (2 * gamma * lam * r - r * r - lam * lam) / (2 * (gamma - 1))
        out = np.where(r <= lam, lam * r, mid)
        return np.where(r <= gamma * lam, out, lam * lam * (gamma + 1) / 2)
    raise ValueError(family)


def golden_section(g, lo, hi, iters=90):
    inv_phi = (math.sqrt(5) - 1) / 2
    a, b = lo, hi
    c = b - inv_phi * (b - a)
    d = a + inv_phi * (b - a)
    gc, gd = g(c), g(d)
    for _ in range(iters):
        if gc < gd:
            b, d, gd = d, c, gc
            c = b - inv_phi * (b - a)
            gc = g(c)
        else:
            a, c, gc = c, d, gd
            d = a + inv_phi * (b - a)
            gd = g(d)
    return 0.5 * (a + b)


def single_group_oracle(z, lam, gamma, family, grid_points=4001):
    """Brute-force minimizer of 0.5*||z - theta||^2 + rho(||theta||; lam, gamma).

    The minimizer is collinear with z because, at a fixed radius, the
    quadratic term is smallest along z; the search therefore runs over the
    radius in [0, ||z||] (shrinkage keeps the solution inside), with a dense
    grid followed by golden-section polish around the best cell.
    """
    z = np.asarray(z, dtype=float)
    nz = np.linalg.norm(z)
    if nz == 0:
        return np.zeros_like(z)

    def g(r):
        return 0.5 * (r - nz) ** 2 + _pen_radial(r, lam, gamma, family)

    grid = np.linspace(0.0, nz, grid_points)
    vals = g(grid)
    i = int(np.argmin(vals))
    lo = grid[max(i - 2, 0)]
    hi = grid[min(i + 2, grid_points - 1)]
    r_best = golden_section(g, lo, hi)
    for candidate in (0.0, nz):
        if g(candidate) < g(r_best):
            r_best = candidate
    return (r_best / nz) * z


def sparse_group_prox_oracle(z, t1, t2):
    """Numeric minimizer of 0.5*||z - x||^2 + t1*||x||_1 + t2*||x||_2."""
    z = np.asarray(z, dtype=float)

    def f(x):
        return (
            0.5 * float((x - z) @ (x - z))
            + t1 * float(np.abs(x).sum())
            + t2 * float(np.linalg.norm(x))
        )

    best = np.zeros_like(z)
    best_val = f(best)
    for start in (z, 0.5 * z, np.sign(z) * np.maximum(np.abs(z) - t1 - t2, 0)):
        res = minimize(f, start, method="Powell",
                       options={"xtol": 1e-12, "ftol": 1e-14, "maxiter": 20000})
        if res.fun < best_val:
            best, best_val = res.x, res.fun
    return best


def lasso_cd_reference(X, y, lam, tol=1e-13, max_iter=100_000):
    """Plain cyclic coordinate descent for (1/2n)||y - Xb||^2 + lam*||b||_1."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    diag = (X * X).sum(axis=0) / n
    b = np.zeros(p)
    r = y.copy()
    for _ in range(max_iter):
        delta = 0.0
        for k in range(p):
            zk = X[:, k] @ r / n + diag[k] * b[k]
            new = math.copysign(max(abs(zk) - lam, 0.0), zk) / diag[k]
            step = new - b[k]
            if step != 0.0:
                r -= X[:, k] * step
                b[k] = new
                delta = max(delta, abs(step))
        if delta <= tol:
            break
    return b


def subgradient_descent_reference(X, y, lam1, lam2, groups, iters=200_000, seed=0):
    """Slow projected-free subgradient descent for the sparse group LASSO.

    Used only as a corroborating route; accuracy is limited, so compare at
    loose tolerances.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float)
    n, p = X.shape
    rng = np.random.default_rng(seed)
    b = rng.standard_normal(p) * 0.01
    best = b.copy()

    def obj(v):
        r = y - X @ v
        val = 0.5 * float(r @ r) / n + lam1 * float(np.abs(v).sum())
        for s, d in groups:
            val += lam2 * float(np.linalg.norm(v[s:s + d]))
        return val

    best_val = obj(b)
    for t in range(1, iters + 1):
        r = y - X @ b
        g = -X.T @ r / n + lam1 * np.sign(b)
        for s, d in groups:
            block = b[s:s + d]
            nb = np.linalg.norm(block)
            if nb > 0:
                g[s:s + d] += lam2 * block / nb
        b = b - (0.5 / math.sqrt(t)) * g
        val = obj(b)
        if val < best_val:
            best, best_val = b.copy(), val
    return best

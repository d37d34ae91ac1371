"""Grouped design matrices with group-level standardization.

A grouped linear model splits the columns of the design matrix into J
nonoverlapping groups.  Penalizing the Gram-weighted norm ||U_j b_j||_2 of a
raw group block, where U_j'U_j = X_j'X_j / n, is equivalent to penalizing the
plain 2-norm of coefficients for the transformed block X_j U_j^{-1}, whose
Gram matrix is the identity.  ``build_design`` performs this reduction for
2-norm group penalties.  Penalties applied coordinate-wise inside groups do
not survive that transformation, so for those the blocks are only
standardized column by column; the scaling factors are stored in the same
per-group factor slots (as diagonal matrices), which keeps the mapping back
to the caller's coordinates uniform.
"""

from dataclasses import dataclass, replace

import numpy as np
from scipy.linalg import solve_triangular

from .errors import DimensionMismatch, EmptyGroup, SingularGroup

# A Cholesky pivot below PIVOT_RTOL times the largest diagonal entry of the
# group Gram matrix marks the group as numerically singular.
PIVOT_RTOL = 1e-10


@dataclass(frozen=True)
class GroupedDesign:
    """Centered response and group-transformed design, plus back-mapping data.

    Attributes
    ----------
    y : ndarray, shape (n,)
        Centered response.
    X : ndarray, shape (n, p)
        Column-centered predictors in internal order (groups contiguous),
        with each block either orthonormalized (``(1/n) X_j'X_j = I``) or
        standardized to unit root-mean-square columns.
    groups : tuple of (start, size)
        Column ranges of the groups in internal order.
    cj : ndarray, shape (J,)
        Group penalty weights.
    U : tuple of ndarray
        Per-group upper-triangular factors mapping internal coefficients to
        the caller's scale: ``b_j = U_j beta_j``.  Diagonal when only
        standardization was applied.
    orthonormalized : bool
        True when full group-level orthonormalization was applied.
    X_centered : ndarray, shape (n, p)
        Centered predictors in the caller's original column order.
    X_raw, y_raw
        The inputs exactly as given (caller's order), so row subsets can be
        re-standardized without reconstruction roundoff.
    order : ndarray, shape (p,)
        ``order[k]`` is the original column index of internal column k.
    labels : ndarray, shape (p,)
        Group label of each column, in the caller's original order.
    y_mean, x_mean
        Centering offsets (original column order), needed for prediction.
    weights_rule : tuple
        Normalized form of the rule used to build ``cj`` (for refits).
    """

    y: np.ndarray
    X: np.ndarray
    groups: tuple
    cj: np.ndarray
    U: tuple
    orthonormalized: bool
    X_centered: np.ndarray
    X_raw: np.ndarray
    y_raw: np.ndarray
    order: np.ndarray
    labels: np.ndarray
    y_mean: float
    x_mean: np.ndarray
    weights_rule: tuple

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def J(self) -> int:
        return len(self.groups)

    @property
    def dims(self) -> np.ndarray:
        return np.array([d for _, d in self.groups])

    def group_slice(self, j: int) -> slice:
        start, size = self.groups[j]
        return slice(start, start + size)

    def transform(self, beta: np.ndarray) -> np.ndarray:
        """Map caller-coordinate coefficients to internal solver coordinates."""
        beta = np.asarray(beta, dtype=float).ravel()
        if beta.shape != (self.p,):
            raise DimensionMismatch(
                f"expected coefficient vector of length {self.p}, got {beta.shape}"
            )
        internal = beta[self.order]
        coef = np.empty_like(internal)
        for j, (start, size) in enumerate(self.groups):
            coef[start:start + size] = self.U[j] @ internal[start:start + size]
        return coef

    def back_transform(self, coef: np.ndarray) -> np.ndarray:
        """Map internal solver coefficients back to the caller's coordinates."""
        coef = np.asarray(coef, dtype=float).ravel()
        if coef.shape != (self.p,):
            raise DimensionMismatch(
                f"expected coefficient vector of length {self.p}, got {coef.shape}"
            )
        internal = np.empty_like(coef)
        for j, (start, size) in enumerate(self.groups):
            block = coef[start:start + size]
            if np.any(block):
                internal[start:start + size] = solve_triangular(
                    self.U[j], block, lower=False
                )
            else:
                internal[start:start + size] = 0.0
        beta = np.empty_like(internal)
        beta[self.order] = internal
        return beta

    def with_response(self, y_new: np.ndarray) -> "GroupedDesign":
        """Same design with a replacement response (no re-centering).

        Intended for simulation experiments that redraw noise around a fixed
        design; ``y_new`` is used exactly as given.
        """
        y_new = np.asarray(y_new, dtype=float).ravel()
        if y_new.shape != (self.n,):
            raise DimensionMismatch("response length does not match the design")
        return replace(self, y=y_new)


def build_design(X, y, group_labels, weights="sqrt", orthonormalize=True):
    """Center, reorder, and group-standardize a grouped regression problem.

    Parameters
    ----------
    X : array-like, shape (n, p)
        Raw predictors.
    y : array-like, shape (n,)
        Raw response.
    group_labels : array-like of int, shape (p,)
        Group membership of each column.  Labels need not be contiguous;
        columns are reordered internally (stably) and all outputs are
        reported in the caller's original column order.
    weights : "sqrt" | ("pow", float) | array-like
        Group weights c_j: the square root of the group size (the usual
        choice for 2-norm penalties), a power ``d_j**g`` of the group size
        (``("pow", g)``, the usual bridge choice with g the bridge exponent),
        or an explicit vector of length J (ordered by sorted unique label).
    orthonormalize : bool
        True: replace each block by ``X_j U_j^{-1}`` so that
        ``(1/n) X_j'X_j = I``.  False: standardize columns to unit
        root-mean-square instead (required by penalties that act on
        individual coefficients, since orthonormalization would destroy
        coordinate-wise sparsity).

    Raises
    ------
    SingularGroup
        If a group Gram matrix is not numerically positive definite
        (more columns than rows, or collinear columns within the group).
    EmptyGroup, DimensionMismatch
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=float).ravel()
    if X.ndim != 2:
        raise DimensionMismatch("X must be a 2-d array")
    n, p = X.shape
    if y.shape != (n,):
        raise DimensionMismatch(f"y has length {y.shape[0]}, X has {n} rows")
    if n < 2:
        raise DimensionMismatch("need at least two observations")
    if p == 0:
        raise EmptyGroup("design has no columns")
    labels = np.asarray(group_labels).ravel()
    if labels.shape != (p,):
        raise DimensionMismatch("group_labels must have one entry per column")

    x_mean = X.mean(axis=0)
    Xc = X - x_mean
    y_mean = float(y.mean())
    yc = y - y_mean

    col_scale = np.linalg.norm(Xc, axis=0) / np.sqrt(n)
    dead = col_scale <= 1e-12 * np.maximum(1.0, np.abs(x_mean))
    if np.any(dead):
        raise SingularGroup(
            f"column(s) {np.flatnonzero(dead).tolist()} are constant after centering"
        )

    uniq = np.unique(labels)
    rank = np.searchsorted(uniq, labels)
    order = np.argsort(rank, kind="stable")
    sizes = np.bincount(rank, minlength=len(uniq))
    starts = np.concatenate([[0], np.cumsum(sizes)[:-1]])
    groups = tuple((int(s), int(d)) for s, d in zip(starts, sizes))

    Xg = Xc[:, order]
    Xt = np.empty_like(Xg)
    factors = []
    for j, (start, size) in enumerate(groups):
        block = Xg[:, start:start + size]
        if orthonormalize:
            if size > n:
                raise SingularGroup(
                    f"group {uniq[j]} has {size} columns but only {n} rows"
                )
            R = block.T @ block / n
            try:
                U = np.linalg.cholesky(R).T
            except np.linalg.LinAlgError:
                raise SingularGroup(
                    f"group {uniq[j]}: Gram matrix is not positive definite"
                ) from None
            # pivots are on the square-root scale of R, so compare squared
            if np.min(np.diag(U)) ** 2 < PIVOT_RTOL * np.max(np.diag(R)):
                raise SingularGroup(
                    f"group {uniq[j]}: Gram matrix is numerically singular"
                )
            Xt[:, start:start + size] = solve_triangular(
                U, block.T, lower=False, trans="T"
            ).T
        else:
            scale = col_scale[order[start:start + size]]
            U = np.diag(scale)
            Xt[:, start:start + size] = block / scale
        factors.append(U)

    J = len(groups)
    dims = sizes.astype(float)
    if isinstance(weights, str):
        if weights != "sqrt":
            raise ValueError(f"unknown weights rule {weights!r}")
        cj = np.sqrt(dims)
        rule = ("sqrt",)
    elif isinstance(weights, tuple) and len(weights) == 2 and weights[0] == "pow":
        cj = dims ** float(weights[1])
        rule = ("pow", float(weights[1]))
    else:
        cj = np.asarray(weights, dtype=float).ravel()
        if cj.shape != (J,):
            raise DimensionMismatch(f"need {J} group weights, got {cj.shape[0]}")
        rule = ("custom", tuple(cj.tolist()))

    return GroupedDesign(
        y=yc,
        X=Xt,
        groups=groups,
        cj=cj,
        U=tuple(factors),
        orthonormalized=bool(orthonormalize),
        X_centered=Xc,
        X_raw=X,
        y_raw=y,
        order=order,
        labels=labels.copy(),
        y_mean=y_mean,
        x_mean=x_mean,
        weights_rule=rule,
    )


def rebuild_design(design: GroupedDesign, rows) -> GroupedDesign:
    """Rebuild a design from a row subset of the original data.

    Re-centers and re-standardizes using only the selected rows, so factors
    and weights are recomputed from scratch (no information from excluded
    rows leaks in).
    """
    weights = design.weights_rule
    if weights[0] == "custom":
        weights = np.array(weights[1])
    elif weights[0] == "sqrt":
        weights = "sqrt"
    return build_design(
        design.X_raw[rows],
        design.y_raw[rows],
        design.labels,
        weights=weights,
        orthonormalize=design.orthonormalized,
    )


def group_norms(design: GroupedDesign, beta: np.ndarray) -> np.ndarray:
    """Per-group 2-norms of a caller-coordinate coefficient vector.

    Groups are ordered by sorted unique label, matching ``design.groups``.
    """
    beta = np.asarray(beta, dtype=float).ravel()
    if beta.shape != (design.p,):
        raise DimensionMismatch("coefficient length does not match the design")
    internal = beta[design.order]
    return np.array(
        [np.linalg.norm(internal[design.group_slice(j)]) for j in range(design.J)]
    )


def predict(design: GroupedDesign, beta: np.ndarray, X_new=None) -> np.ndarray:
    """Fitted or predicted values for caller-coordinate coefficients."""
    beta = np.asarray(beta, dtype=float).ravel()
    if X_new is None:
        return design.y_mean + design.X_centered @ beta
    X_new = np.asarray(X_new, dtype=float)
    return design.y_mean + (X_new - design.x_mean) @ beta

"""Lagged predictability testing on contiguous annual pairs.

The test compares two nested autoregressions of the response: one on its
own past, one additionally on the past of the candidate driver. The
variance-ratio statistic of the residual sums is referred to the F
distribution. Year gaps are rejected outright; a lag across a gap is not
a lag.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import betainc

from .errors import (
    DomainError,
    InsufficientDataError,
    NonContiguousYearsError,
    SingularDesignError,
)
from .panel import AlignedPair


def first_difference(series) -> tuple[float, ...]:
    """Consecutive differences; length shrinks by one."""
    values = tuple(series)
    if len(values) < 2:
        raise InsufficientDataError("need at least 2 points to difference")
    return tuple(b - a for a, b in zip(values, values[1:]))


def ols_rss(design, response) -> tuple[np.ndarray, float]:
    """Least squares via orthogonal decomposition; returns (coefficients, rss).

    The solver must not form the normal equations: near-collinear lag
    columns would square their condition number. Rank deficiency raises
    SingularDesignError with the estimated rank.
    """
    X = np.asarray(design, dtype=float)
    y = np.asarray(response, dtype=float)
    if X.ndim != 2:
        raise DomainError("design must be a 2-d matrix")
    rows, cols = X.shape
    if y.shape != (rows,):
        raise DomainError("response length does not match design rows")
    if rows <= cols:
        raise InsufficientDataError(
            f"need more rows than columns, got {rows}x{cols}"
        )
    beta, _, rank, _ = np.linalg.lstsq(X, y, rcond=None)
    if rank < cols:
        raise SingularDesignError(
            f"design is rank deficient (rank {rank} of {cols} columns)",
            rank=int(rank),
        )
    resid = y - X @ beta
    return beta, float(resid @ resid)


def f_sf(f: float, d1: float, d2: float) -> float:
    """Upper-tail probability of the F distribution.

    Evaluated through the regularized incomplete beta function. The
    equal-dof statistic at 1 sits on the symmetry point and is returned
    exactly.
    """
    if d1 < 1 or d2 < 1:
        raise DomainError(f"degrees of freedom must be >= 1, got ({d1}, {d2})")
    if math.isnan(f) or f < 0:
        raise DomainError(f"F statistic must be >= 0, got {f}")
    if f == 0.0:
        return 1.0
    if math.isinf(f):
        return 0.0
    if f == 1.0 and d1 == d2:
        return 0.5
    x = d2 / (d2 + d1 * f)
    return float(betainc(d2 / 2.0, d1 / 2.0, x))


@dataclass(frozen=True)
class LagDesign:
    """Regression pieces for one lag order on one aligned pair."""

    response: np.ndarray
    predictors_restricted: np.ndarray
    predictors_unrestricted: np.ndarray
    lag: int
    n_eff: int


@dataclass(frozen=True)
class GrangerResult:
    lag: int
    f_stat: float
    p_value: float
    rss_restricted: float
    rss_unrestricted: float
    n_eff: int


@dataclass(frozen=True)
class SkippedLag:
    lag: int
    reason: str


@dataclass(frozen=True)
class LagSweep:
    results: tuple[GrangerResult, ...]
    skipped: tuple[SkippedLag, ...]
    best: GrangerResult


def _check_contiguous(years) -> None:
    for a, b in zip(years, years[1:]):
        if b - a != 1:
            raise NonContiguousYearsError(
                f"years jump from {a} to {b}; lags are meaningless across gaps"
            )


def build_lag_design(x, y, lag: int) -> LagDesign:
    """Stack intercept and lag columns for the nested model pair.

    Restricted: intercept + ``lag`` lags of y. Unrestricted: those plus
    ``lag`` lags of x. Requires n - lag > 1 + 2*lag usable rows.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    n = len(y)
    if lag < 1:
        raise DomainError(f"lag must be >= 1, got {lag}")
    n_eff = n - lag
    if n_eff <= 1 + 2 * lag:
        raise InsufficientDataError(
            f"{n} observations leave {n_eff} usable rows, need more than "
            f"{1 + 2 * lag} for lag {lag}"
        )
    ones = np.ones((n_eff, 1))
    y_lags = np.column_stack([y[lag - j:n - j] for j in range(1, lag + 1)])
    x_lags = np.column_stack([x[lag - j:n - j] for j in range(1, lag + 1)])
    return LagDesign(
        response=y[lag:],
        predictors_restricted=np.hstack([ones, y_lags]),
        predictors_unrestricted=np.hstack([ones, y_lags, x_lags]),
        lag=lag,
        n_eff=n_eff,
    )


def granger_test(pair: AlignedPair, lag: int,
                 difference_first: bool = False) -> GrangerResult:
    """Test whether lagged x improves prediction of y beyond lagged y.

    Direction is fixed: x is the candidate driver, y the response. With
    ``difference_first`` both sequences are first-differenced before the
    designs are built (the caller's stationarity treatment; never applied
    silently).
    """
    _check_contiguous(pair.years)
    x, y = pair.x, pair.y
    if difference_first:
        x = first_difference(x)
        y = first_difference(y)
    design = build_lag_design(x, y, lag)
    _, rss_r = ols_rss(design.predictors_restricted, design.response)
    _, rss_ur = ols_rss(design.predictors_unrestricted, design.response)
    dof_den = design.n_eff - (1 + 2 * lag)
    if rss_ur == 0.0:
        return GrangerResult(lag, math.inf, 0.0, rss_r, rss_ur, design.n_eff)
    f = max(0.0, ((rss_r - rss_ur) / lag) / (rss_ur / dof_den))
    return GrangerResult(
        lag=lag,
        f_stat=f,
        p_value=f_sf(f, lag, dof_den),
        rss_restricted=rss_r,
        rss_unrestricted=rss_ur,
        n_eff=design.n_eff,
    )


def lag_sweep(pair: AlignedPair, max_lag: int,
              difference_first: bool = False) -> LagSweep:
    """Run the test at every lag 1..max_lag that fits the sample.

    Lags that individually lack data are skipped with a reason; if no lag
    fits at all that is an error. Best lag is the smallest p-value, ties
    going to the shorter lag.
    """
    if max_lag < 1:
        raise DomainError(f"max_lag must be >= 1, got {max_lag}")
    results: list[GrangerResult] = []
    skipped: list[SkippedLag] = []
    for lag in range(1, max_lag + 1):
        try:
            results.append(granger_test(pair, lag, difference_first))
        except (InsufficientDataError, SingularDesignError) as exc:
            skipped.append(SkippedLag(lag, str(exc)))
    if not results:
        raise InsufficientDataError(
            f"pair of length {pair.n} is too short for even lag 1"
        )
    best = results[0]
    for res in results[1:]:
        if res.p_value < best.p_value:
            best = res
    return LagSweep(tuple(results), tuple(skipped), best)

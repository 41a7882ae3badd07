"""Linear association: product-moment correlation with a two-sided test."""

from __future__ import annotations

import math
from dataclasses import dataclass

from scipy.special import betainc

from .errors import DegenerateInputError, DomainError, InsufficientDataError
from .panel import AlignedPair


@dataclass(frozen=True)
class PearsonResult:
    r: float
    n: int
    p_value: float


def t_sf(t: float, dof: float) -> float:
    """Upper-tail probability of the t distribution.

    Evaluated through the regularized incomplete beta function; dof 1 uses
    the arctangent closed form so its textbook values come out exact.
    """
    if dof < 1:
        raise DomainError(f"dof must be >= 1, got {dof}")
    if math.isnan(t):
        raise DomainError("t statistic is NaN")
    if t == 0.0:
        return 0.5
    if t < 0.0:
        return 1.0 - t_sf(-t, dof)
    if dof == 1:
        return 0.5 - math.atan(t) / math.pi
    x = dof / (dof + t * t)
    return 0.5 * float(betainc(dof / 2.0, 0.5, x))


def pearson(pair: AlignedPair) -> PearsonResult:
    """Two-pass product-moment correlation with a two-sided p-value.

    The two-pass form (subtract the mean, then accumulate deviation
    products) is kept deliberately: annual series are often near-constant
    and the single-pass expansion loses precision there.
    """
    n = pair.n
    if n < 3:
        raise InsufficientDataError(f"need at least 3 observations, got {n}")
    mean_x = math.fsum(pair.x) / n
    mean_y = math.fsum(pair.y) / n
    sxy = math.fsum((x - mean_x) * (y - mean_y) for x, y in zip(pair.x, pair.y))
    sxx = math.fsum((x - mean_x) ** 2 for x in pair.x)
    syy = math.fsum((y - mean_y) ** 2 for y in pair.y)
    if sxx == 0.0 or syy == 0.0:
        raise DegenerateInputError("correlation undefined for a constant sequence")
    r = sxy / math.sqrt(sxx * syy)
    r = max(-1.0, min(1.0, r))
    if abs(r) == 1.0:
        p = 0.0
    else:
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        p = min(1.0, 2.0 * t_sf(abs(t), n - 2))
    return PearsonResult(r=r, n=n, p_value=p)

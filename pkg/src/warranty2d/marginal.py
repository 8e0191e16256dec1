"""Weibull marginal distribution and maximum likelihood fitting.

Parametrization used throughout:

    F(x) = 1 - exp(-(x / scale)**shape),   x >= 0,

so ``scale`` has the units of the data and ``shape`` is dimensionless.
The MLE is computed by profiling: for fixed shape k the optimal scale is
available in closed form, which reduces estimation to a one-dimensional
root find for k. The profile score is monotone decreasing in k, so a
bracketed solve is deterministic and needs no starting guess.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import optimize

from .errors import DataError, DomainError, FitError

#: Bracket for the profile-likelihood shape solve. Shapes outside this
#: range do not occur for positive data at realistic sample sizes.
_SHAPE_LO = 1e-3
_SHAPE_HI = 1e3
_SHAPE_TOL = 1e-12


@dataclass(frozen=True)
class WeibullParams:
    """Shape/scale pair for a Weibull distribution."""

    shape: float
    scale: float

    def __post_init__(self) -> None:
        for name, v in (("shape", self.shape), ("scale", self.scale)):
            if not np.isfinite(v) or v <= 0.0:
                raise DomainError(f"Weibull {name} must be finite and > 0, got {v!r}")


@dataclass(frozen=True)
class MarginalFit:
    """Result of a marginal MLE: parameters and attained log-likelihood."""

    params: WeibullParams
    loglik: float


def _check_nonneg(x: np.ndarray | float, what: str = "x") -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError(f"{what} must be finite and >= 0")
    return arr


def weibull_cdf(x, params: WeibullParams):
    """F(x) = 1 - exp(-(x/scale)^shape) for x >= 0."""
    arr = _check_nonneg(x)
    out = -np.expm1(-((arr / params.scale) ** params.shape))
    return out if np.ndim(x) else float(out)


def weibull_sf(x, params: WeibullParams):
    """Survival function exp(-(x/scale)^shape)."""
    arr = _check_nonneg(x)
    out = np.exp(-((arr / params.scale) ** params.shape))
    return out if np.ndim(x) else float(out)


def weibull_pdf(x, params: WeibullParams):
    """Weibull density.

    At x = 0 with shape < 1 the density diverges; the result is ``inf``
    (a well-defined one-sided limit), never NaN. With shape = 1 the value
    at zero is 1/scale, and with shape > 1 it is 0.
    """
    arr = _check_nonneg(x)
    k, s = params.shape, params.scale
    with np.errstate(divide="ignore", over="ignore"):
        z = arr / s
        out = np.where(
            arr == 0.0,
            np.inf if k < 1.0 else (1.0 / s if k == 1.0 else 0.0),
            (k / s) * z ** (k - 1.0) * np.exp(-(z**k)),
        )
    return out if np.ndim(x) else float(out)


def weibull_quantile(p, params: WeibullParams):
    """Inverse CDF: scale * (-log(1-p))^(1/shape) for p in [0, 1)."""
    arr = np.asarray(p, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0) or np.any(arr >= 1.0):
        raise DomainError("quantile level must lie in [0, 1)")
    out = params.scale * (-np.log1p(-arr)) ** (1.0 / params.shape)
    return out if np.ndim(p) else float(out)


def weibull_loglik(data, params: WeibullParams) -> float:
    """Log-likelihood of a positive sample, evaluated in log space."""
    x = np.asarray(data, dtype=float)
    if x.size == 0:
        raise DataError("empty sample")
    if np.any(~np.isfinite(x)) or np.any(x <= 0.0):
        raise DataError("sample values must be finite and strictly positive")
    k, s = params.shape, params.scale
    lx = np.log(x)
    ls = np.log(s)
    return float(np.sum(np.log(k) - ls + (k - 1.0) * (lx - ls) - np.exp(k * (lx - ls))))


def _profile_score(k: float, lx: np.ndarray) -> float:
    # d/dk of the profile log-likelihood, up to a positive factor:
    #   1/k + mean(log x) - sum(x^k log x) / sum(x^k).
    # The power terms are normalized by the sample maximum so that large
    # shapes do not overflow.
    w = np.exp(k * (lx - lx.max()))
    return 1.0 / k + lx.mean() - float(np.dot(w, lx) / w.sum())


def fit_weibull_mle(data) -> MarginalFit:
    """Maximum likelihood Weibull fit for a positive sample.

    The shape solves the profile score equation on a fixed bracket via a
    hybrid bracketed root finder; the scale then follows in closed form,
    scale = (mean(x^shape))^(1/shape), evaluated in normalized form for
    overflow safety.

    Raises
    ------
    DataError
        If the sample is empty or contains non-positive values.
    FitError
        If all values coincide (shape unbounded) or the score has no
        root inside the bracket.
    """
    x = np.asarray(data, dtype=float)
    if x.size == 0:
        raise DataError("empty sample")
    if np.any(~np.isfinite(x)) or np.any(x <= 0.0):
        raise DataError("sample values must be finite and strictly positive")
    lx = np.log(x)
    if np.ptp(lx) == 0.0:
        raise FitError("all sample values are identical; Weibull shape is unbounded")

    f_lo = _profile_score(_SHAPE_LO, lx)
    f_hi = _profile_score(_SHAPE_HI, lx)
    if not (f_lo > 0.0 > f_hi):
        raise FitError(
            f"profile score does not change sign on [{_SHAPE_LO:g}, {_SHAPE_HI:g}]"
        )
    k = float(
        optimize.brentq(
            _profile_score, _SHAPE_LO, _SHAPE_HI, args=(lx,), xtol=_SHAPE_TOL
        )
    )
    # scale^k = mean(x^k), computed relative to max(x) to avoid overflow
    lmax = lx.max()
    scale = float(np.exp(lmax + np.log(np.mean(np.exp(k * (lx - lmax)))) / k))
    params = WeibullParams(shape=k, scale=scale)
    return MarginalFit(params=params, loglik=weibull_loglik(x, params))

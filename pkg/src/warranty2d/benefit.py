"""Economic benefit of offering a warranty region, and rate calibration.

The benefit of a region saturates toward A1*M as the region grows:

    B = A1 * M * (1 - exp(-A2*(t_w1+t_w2)/2)) * (1 - exp(-A3*(u_w1+u_w2)/2)).

The rates A2, A3 are calibrated so that switching one axis from FRW (both
breakpoints at the anchor w) to PRW (breakpoints 0 and w) retains a target
fraction q of that axis's benefit factor:

    h(A) = (1 - exp(-A*w/2)) / (1 - exp(-A*w)) = 1 / (1 + exp(-A*w/2)),

which is solved by A = (2/w) * log(q / (1-q)). h maps (0, inf) onto
(1/2, 1), so targets must lie in that interval.

Anchors default to the anchor_p-quantile of each marginal under the joint
parameter estimate. With the bundled data this gives t_w = 0.1855 and
u_w = 0.0741; marginal-only estimates would not reproduce these.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

from .copula import JointModel, marginal_quantiles
from .errors import DomainError
from .policy import WarrantyRegion

_DEFAULT_ANCHOR_P = 0.1


@dataclass(frozen=True)
class EconomicConfig:
    """Economic parameters, fully resolved (anchors and rates included).

    Build with :meth:`calibrated` to derive ``t_w``, ``u_w`` from a fitted
    model and ``A2``, ``A3`` from the retention targets; pass explicit
    values to override any derived field.
    """

    S: float
    A1: float
    M: float
    q1: float
    q2: float
    anchor_p: float
    t_w: float
    u_w: float
    A2: float
    A3: float

    def __post_init__(self) -> None:
        if not self.S > 0.0:
            raise DomainError(f"S must be > 0, got {self.S!r}")
        if self.A1 < 0.0:
            raise DomainError(f"A1 must be >= 0, got {self.A1!r}")
        if self.M < 1.0:
            raise DomainError(f"M must be >= 1, got {self.M!r}")
        for name, q in (("q1", self.q1), ("q2", self.q2)):
            if not 0.5 < q < 1.0:
                raise DomainError(f"{name} must lie in (0.5, 1), got {q!r}")
        if not 0.0 < self.anchor_p < 1.0:
            raise DomainError(f"anchor_p must lie in (0, 1), got {self.anchor_p!r}")
        for name, v in (
            ("t_w", self.t_w),
            ("u_w", self.u_w),
            ("A2", self.A2),
            ("A3", self.A3),
        ):
            if not v > 0.0:
                raise DomainError(f"{name} must be > 0, got {v!r}")

    @classmethod
    def calibrated(
        cls,
        model: JointModel,
        S: float,
        A1: float = 200.0,
        M: float = 1.0,
        q1: float = 0.75,
        q2: float = 0.75,
        anchor_p: float = _DEFAULT_ANCHOR_P,
        t_w: float | None = None,
        u_w: float | None = None,
        A2: float | None = None,
        A3: float | None = None,
    ) -> "EconomicConfig":
        """Resolve anchors from the model quantiles and rates from targets."""
        qt, qu = marginal_quantiles(model, anchor_p)
        t_anchor = qt if t_w is None else t_w
        u_anchor = qu if u_w is None else u_w
        return cls(
            S=S,
            A1=A1,
            M=M,
            q1=q1,
            q2=q2,
            anchor_p=anchor_p,
            t_w=t_anchor,
            u_w=u_anchor,
            A2=calibrate_rate(q1, t_anchor) if A2 is None else A2,
            A3=calibrate_rate(q2, u_anchor) if A3 is None else A3,
        )

    def with_price(self, S: float) -> "EconomicConfig":
        """Same economics at a different sale price."""
        return replace(self, S=S)


def benefit(region: WarrantyRegion, cfg: EconomicConfig) -> float:
    """Expected benefit of offering ``region``; lies in [0, A1*M)."""
    bt = -math.expm1(-cfg.A2 * 0.5 * (region.t_w1 + region.t_w2))
    bu = -math.expm1(-cfg.A3 * 0.5 * (region.u_w1 + region.u_w2))
    return cfg.A1 * cfg.M * bt * bu


def retention_ratio(A: float, w: float) -> float:
    """Fraction of an axis benefit factor kept when FRW turns into PRW."""
    if not A > 0.0 or not w > 0.0:
        raise DomainError("A and w must be > 0")
    return 1.0 / (1.0 + math.exp(-A * w / 2.0))


def calibrate_rate(q: float, w: float) -> float:
    """Rate A with retention_ratio(A, w) == q, in closed form.

    The logistic form of h makes the inverse exact; a residual check
    guards against argument mix-ups.
    """
    if not 0.5 < q < 1.0:
        raise DomainError(f"retention target must lie in (0.5, 1), got {q!r}")
    if not w > 0.0:
        raise DomainError(f"anchor must be > 0, got {w!r}")
    a = (2.0 / w) * math.log(q / (1.0 - q))
    assert abs(retention_ratio(a, w) - q) < 1e-10
    return a


def combined_retention(A2: float, A3: float, t_w: float, u_w: float) -> float:
    """Benefit fraction kept when both axes switch from FRW to PRW."""
    return retention_ratio(A2, t_w) * retention_ratio(A3, u_w)

"""Reimbursement cost of a failed unit under 1-D and 2-D warranty policies.

Three one-dimensional policies on each axis:

* FRW: full refund S up to the breakpoint w;
* PRW: refund prorated linearly from S at 0 to 0 at w;
* CW:  full refund up to w1, then prorated down to 0 at w2.

CW is the superset: w1 = w2 collapses it to FRW and w1 = 0 to PRW, which
is also how a warranty region (t_w1, t_w2, u_w1, u_w2) encodes any of the
nine policy pairs. The two-dimensional cost is the normalized product
C(t, u) = C_t(t) * C_u(u) / S, so a refund is only due while both scales
are inside coverage.

Boundary convention: overlapping branch boundaries resolve to the earlier
branch (full refund wins at w1), and cost is 0 outside coverage. Both
choices affect sets of measure zero only.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .errors import DomainError


class PolicyKind(enum.Enum):
    FRW = "FRW"
    PRW = "PRW"
    CW = "CW"

    @classmethod
    def parse(cls, text: str) -> "PolicyKind":
        try:
            return cls[text.strip().upper()]
        except KeyError:
            raise DomainError(
                f"unknown policy kind {text!r}; expected FRW, PRW or CW"
            ) from None


@dataclass(frozen=True)
class WarrantyRegion:
    """Breakpoints (t_w1, t_w2, u_w1, u_w2) of a two-dimensional region.

    Encodes the CW x CW superset; equal breakpoints on an axis mean FRW,
    a zero first breakpoint means PRW. Degenerate (zero-width) axes are
    allowed so limiting regions stay representable.
    """

    t_w1: float
    t_w2: float
    u_w1: float
    u_w2: float

    def __post_init__(self) -> None:
        for name in ("t_w1", "t_w2", "u_w1", "u_w2"):
            object.__setattr__(self, name, float(getattr(self, name)))
        vals = self.as_tuple()
        if any(not np.isfinite(v) or v < 0.0 for v in vals):
            raise DomainError(f"region breakpoints must be finite and >= 0, got {vals}")
        if self.t_w1 > self.t_w2 or self.u_w1 > self.u_w2:
            raise DomainError(
                f"region breakpoints must be ordered per axis, got {vals}"
            )

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.t_w1, self.t_w2, self.u_w1, self.u_w2)


@dataclass(frozen=True)
class AxisPolicy:
    """One policy kind with its breakpoints, in region encoding.

    ``w1 == w2`` for FRW (single breakpoint), ``w1 == 0`` for PRW.
    """

    kind: PolicyKind
    w1: float
    w2: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "w1", float(self.w1))
        object.__setattr__(self, "w2", float(self.w2))
        if not (np.isfinite(self.w1) and np.isfinite(self.w2)):
            raise DomainError("breakpoints must be finite")
        if self.w1 < 0.0 or self.w2 < self.w1:
            raise DomainError(
                f"need 0 <= w1 <= w2, got w1={self.w1!r}, w2={self.w2!r}"
            )
        if self.kind is PolicyKind.FRW and self.w1 != self.w2:
            raise DomainError("FRW carries a single breakpoint (w1 == w2)")
        if self.kind is PolicyKind.PRW and self.w1 != 0.0:
            raise DomainError("PRW starts prorating at 0 (w1 == 0)")

    @classmethod
    def frw(cls, w: float) -> "AxisPolicy":
        return cls(PolicyKind.FRW, w, w)

    @classmethod
    def prw(cls, w: float) -> "AxisPolicy":
        return cls(PolicyKind.PRW, 0.0, w)

    @classmethod
    def cw(cls, w1: float, w2: float) -> "AxisPolicy":
        return cls(PolicyKind.CW, w1, w2)


@dataclass(frozen=True)
class PolicyPair:
    """Policies on the age and usage axes."""

    axis_t: AxisPolicy
    axis_u: AxisPolicy

    @classmethod
    def from_region(
        cls, kinds: tuple[PolicyKind, PolicyKind], region: WarrantyRegion
    ) -> "PolicyPair":
        return cls(
            axis_t=AxisPolicy(kinds[0], region.t_w1, region.t_w2),
            axis_u=AxisPolicy(kinds[1], region.u_w1, region.u_w2),
        )

    @property
    def kinds(self) -> tuple[PolicyKind, PolicyKind]:
        return (self.axis_t.kind, self.axis_u.kind)

    @property
    def region(self) -> WarrantyRegion:
        return WarrantyRegion(
            self.axis_t.w1, self.axis_t.w2, self.axis_u.w1, self.axis_u.w2
        )


def cost_1d(policy: AxisPolicy, S: float, x):
    """Refund on one axis at age-or-usage x.

    FRW pays S on [0, w]; PRW pays S(1 - x/w) on [0, w]; CW pays S on
    [0, w1] and S(w2 - x)/(w2 - w1) on (w1, w2]. Outside coverage the
    refund is 0. A zero-width prorate branch (w1 == w2) is never
    evaluated, so CW degrades gracefully to FRW.
    """
    if S < 0.0:
        raise DomainError(f"S must be >= 0, got {S!r}")
    arr = np.asarray(x, dtype=float)
    if np.any(~np.isfinite(arr)) or np.any(arr < 0.0):
        raise DomainError("x must be finite and >= 0")
    w1, w2 = policy.w1, policy.w2
    out = np.zeros_like(arr)
    if policy.kind is PolicyKind.FRW:
        out[arr <= w2] = S
    elif policy.kind is PolicyKind.PRW:
        if w2 > 0.0:
            inside = arr <= w2
            out[inside] = S * (1.0 - arr[inside] / w2)
    else:
        out[arr <= w1] = S
        if w2 > w1:
            prorate = (arr > w1) & (arr <= w2)
            out[prorate] = S * (w2 - arr[prorate]) / (w2 - w1)
    return out if np.ndim(x) else float(out)


def cost_2d(pair: PolicyPair, S: float, t, u):
    """Two-dimensional refund: product of the axis refunds over S."""
    if S <= 0.0:
        raise DomainError(f"S must be > 0, got {S!r}")
    ct = np.asarray(cost_1d(pair.axis_t, S, t), dtype=float)
    cu = np.asarray(cost_1d(pair.axis_u, S, u), dtype=float)
    out = ct * cu / S
    return out if (np.ndim(t) or np.ndim(u)) else float(out)


def cost_surface_grid(
    pair: PolicyPair,
    S: float,
    t_max: float,
    u_max: float,
    nt: int = 101,
    nu: int = 101,
) -> np.ndarray:
    """Evaluate cost_2d on a regular grid; rows are (t, u, cost).

    Intended for export and plotting, hence the flat row layout.
    """
    if nt < 2 or nu < 2:
        raise DomainError("grid resolution must be >= 2 per axis")
    if t_max <= 0.0 or u_max <= 0.0:
        raise DomainError("grid extents must be > 0")
    t = np.linspace(0.0, t_max, nt)
    u = np.linspace(0.0, u_max, nu)
    tt, uu = np.meshgrid(t, u, indexing="ij")
    cc = cost_2d(pair, S, tt.ravel(), uu.ravel())
    return np.column_stack([tt.ravel(), uu.ravel(), cc])

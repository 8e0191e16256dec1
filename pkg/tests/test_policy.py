"""Pointwise reimbursement rules: the three axis policies and their products."""

import numpy as np
import pytest

from warranty2d import DomainError
from warranty2d.policy import (
    AxisPolicy,
    PolicyKind,
    PolicyPair,
    WarrantyRegion,
    cost_1d,
    cost_2d,
    cost_surface_grid,
)


# -- types ------------------------------------------------------------------


def test_kind_parse():
    assert PolicyKind.parse("frw") is PolicyKind.FRW
    assert PolicyKind.parse("PRW") is PolicyKind.PRW
    assert PolicyKind.parse(" Cw ") is PolicyKind.CW
    with pytest.raises(DomainError, match="unknown policy"):
        PolicyKind.parse("rw")


def test_region_validation():
    r = WarrantyRegion(0.1, 0.3, 0.0, 0.2)
    assert r.as_tuple() == (0.1, 0.3, 0.0, 0.2)
    WarrantyRegion(0.0, 0.0, 0.0, 0.0)  # degenerate but constructible
    with pytest.raises(DomainError):
        WarrantyRegion(-0.1, 0.3, 0.0, 0.2)
    with pytest.raises(DomainError):
        WarrantyRegion(0.4, 0.3, 0.0, 0.2)
    with pytest.raises(DomainError):
        WarrantyRegion(0.1, 0.3, 0.2, 0.1)
    with pytest.raises(DomainError):
        WarrantyRegion(np.inf, np.inf, 0.0, 0.2)


def test_axis_policy_constructors():
    assert AxisPolicy.frw(0.5).w1 == 0.5
    assert AxisPolicy.frw(0.5).w2 == 0.5
    assert AxisPolicy.prw(0.4).w1 == 0.0
    assert AxisPolicy.cw(0.1, 0.3).kind is PolicyKind.CW
    with pytest.raises(DomainError):
        AxisPolicy.cw(0.3, 0.1)
    with pytest.raises(DomainError):
        AxisPolicy(PolicyKind.FRW, 0.1, 0.2)  # FRW must have w1 == w2
    with pytest.raises(DomainError):
        AxisPolicy(PolicyKind.PRW, 0.1, 0.2)  # PRW must start at 0


def test_pair_from_region_round_trip():
    region = WarrantyRegion(0.1, 0.3, 0.0, 0.25)
    pair = PolicyPair.from_region((PolicyKind.CW, PolicyKind.PRW), region)
    assert pair.kinds == (PolicyKind.CW, PolicyKind.PRW)
    assert pair.region.as_tuple() == region.as_tuple()


def test_pair_from_region_frw_uses_outer_breakpoint():
    region = WarrantyRegion(0.2, 0.2, 0.1, 0.1)
    pair = PolicyPair.from_region((PolicyKind.FRW, PolicyKind.FRW), region)
    assert pair.axis_t.w1 == pair.axis_t.w2 == 0.2
    assert pair.axis_u.w1 == pair.axis_u.w2 == 0.1


# -- 1-d costs ----------------------------------------------------------------


def test_cost_1d_examples():
    assert cost_1d(AxisPolicy.frw(0.2), 700.0, 0.1) == 700.0
    assert cost_1d(AxisPolicy.prw(0.2), 700.0, 0.1) == pytest.approx(350.0)
    assert cost_1d(AxisPolicy.cw(0.1, 0.3), 700.0, 0.2) == pytest.approx(350.0)


def test_cost_1d_boundaries():
    cw = AxisPolicy.cw(0.1, 0.3)
    assert cost_1d(cw, 700.0, 0.0) == 700.0
    assert cost_1d(cw, 700.0, 0.1) == 700.0  # left-branch priority at w1
    assert cost_1d(cw, 700.0, 0.3) == pytest.approx(0.0)
    assert cost_1d(cw, 700.0, 0.31) == 0.0
    prw = AxisPolicy.prw(0.2)
    assert cost_1d(prw, 700.0, 0.0) == 700.0
    assert cost_1d(prw, 700.0, 0.2) == pytest.approx(0.0)
    assert cost_1d(prw, 700.0, 5.0) == 0.0
    frw = AxisPolicy.frw(0.2)
    assert cost_1d(frw, 700.0, 0.2) == 700.0
    assert cost_1d(frw, 700.0, 0.2000001) == 0.0


def test_cost_1d_bounds_and_monotone():
    x = np.linspace(0.0, 0.5, 201)
    for pol in (AxisPolicy.frw(0.2), AxisPolicy.prw(0.3), AxisPolicy.cw(0.1, 0.4)):
        c = cost_1d(pol, 700.0, x)
        assert np.all((0.0 <= c) & (c <= 700.0))
        assert np.all(np.diff(c) <= 1e-12)


def test_cost_1d_validation():
    with pytest.raises(DomainError):
        cost_1d(AxisPolicy.frw(0.2), -5.0, 0.1)
    with pytest.raises(DomainError):
        cost_1d(AxisPolicy.frw(0.2), 700.0, -0.1)


# -- 2-d costs ----------------------------------------------------------------


def cw_pair(region):
    return PolicyPair.from_region((PolicyKind.CW, PolicyKind.CW), region)


def test_cost_2d_case_i_frw_frw():
    pair = PolicyPair.from_region(
        (PolicyKind.FRW, PolicyKind.FRW), WarrantyRegion(0.2, 0.2, 0.3, 0.3)
    )
    t = np.array([0.0, 0.1, 0.2])
    u = np.array([0.0, 0.15, 0.3])
    tt, uu = np.meshgrid(t, u)
    assert np.all(cost_2d(pair, 700.0, tt, uu) == 700.0)
    assert cost_2d(pair, 700.0, 0.21, 0.1) == 0.0


def test_cost_2d_case_v_prw_prw():
    pair = PolicyPair.from_region(
        (PolicyKind.PRW, PolicyKind.PRW), WarrantyRegion(0.0, 0.2, 0.0, 0.4)
    )
    assert cost_2d(pair, 700.0, 0.1, 0.2) == pytest.approx(175.0)


def test_cost_2d_case_ix_double_prorate_midpoint():
    pair = cw_pair(WarrantyRegion(0.1, 0.3, 0.2, 0.6))
    assert cost_2d(pair, 700.0, 0.2, 0.4) == pytest.approx(175.0)


def test_cost_2d_is_product_rule():
    pair = cw_pair(WarrantyRegion(0.1, 0.3, 0.2, 0.6))
    rng = np.random.default_rng(0)
    t = rng.uniform(0.0, 0.4, size=50)
    u = rng.uniform(0.0, 0.8, size=50)
    want = cost_1d(pair.axis_t, 700.0, t) * cost_1d(pair.axis_u, 700.0, u) / 700.0
    np.testing.assert_allclose(cost_2d(pair, 700.0, t, u), want, atol=1e-12)


def test_cost_2d_bounds_and_full_refund_zone():
    pair = cw_pair(WarrantyRegion(0.1, 0.3, 0.2, 0.6))
    t = np.linspace(0.0, 0.5, 60)
    u = np.linspace(0.0, 0.9, 60)
    tt, uu = np.meshgrid(t, u)
    c = cost_2d(pair, 700.0, tt, uu)
    assert np.all((0.0 <= c) & (c <= 700.0))
    at_max = np.isclose(c, 700.0)
    inside_full = (tt <= 0.1) & (uu <= 0.2)
    assert np.array_equal(at_max, inside_full)


def test_cost_2d_monotone_on_coverage():
    pair = cw_pair(WarrantyRegion(0.1, 0.3, 0.2, 0.6))
    t = np.linspace(0.0, 0.3, 40)
    u = np.linspace(0.0, 0.6, 40)
    tt, uu = np.meshgrid(t, u, indexing="ij")
    c = cost_2d(pair, 700.0, tt, uu)
    assert np.all(np.diff(c, axis=0) <= 1e-12)
    assert np.all(np.diff(c, axis=1) <= 1e-12)


def test_cw_specializes_to_frw_axis():
    region = WarrantyRegion(0.25, 0.25, 0.1, 0.5)
    a = PolicyPair.from_region((PolicyKind.CW, PolicyKind.CW), region)
    b = PolicyPair.from_region((PolicyKind.FRW, PolicyKind.CW), region)
    t = np.linspace(0.0, 0.6, 101)
    u = np.linspace(0.0, 0.7, 101)
    tt, uu = np.meshgrid(t, u)
    np.testing.assert_allclose(
        cost_2d(a, 700.0, tt, uu), cost_2d(b, 700.0, tt, uu), atol=1e-12
    )


def test_cw_specializes_to_prw_axis():
    region = WarrantyRegion(0.1, 0.4, 0.0, 0.5)
    a = PolicyPair.from_region((PolicyKind.CW, PolicyKind.PRW), region)
    b = PolicyPair.from_region((PolicyKind.CW, PolicyKind.CW), region)
    t = np.linspace(0.0, 0.6, 101)
    u = np.linspace(0.0, 0.7, 101)
    tt, uu = np.meshgrid(t, u)
    np.testing.assert_allclose(
        cost_2d(a, 700.0, tt, uu), cost_2d(b, 700.0, tt, uu), atol=1e-12
    )


# -- surface grid --------------------------------------------------------------


def test_surface_grid_frw_frw_constant():
    pair = PolicyPair.from_region(
        (PolicyKind.FRW, PolicyKind.FRW), WarrantyRegion(0.2, 0.2, 0.3, 0.3)
    )
    rows = cost_surface_grid(pair, 700.0, 0.2, 0.3, nt=21, nu=21)
    assert rows.shape == (21 * 21, 3)
    assert np.all(rows[:, 2] == 700.0)


def test_surface_grid_bound_and_shape():
    pair = cw_pair(WarrantyRegion(0.1, 0.3, 0.2, 0.6))
    rows = cost_surface_grid(pair, 700.0, 0.5, 0.9, nt=31, nu=41)
    assert rows.shape == (31 * 41, 3)
    t = np.unique(rows[:, 0])
    u = np.unique(rows[:, 1])
    assert t.shape == (31,) and u.shape == (41,)
    assert t[0] == 0.0 and t[-1] == 0.5 and u[-1] == 0.9
    assert np.max(rows[:, 2]) <= 700.0


def test_surface_grid_cw_frw_column_constancy():
    region = WarrantyRegion(0.1, 0.3, 0.25, 0.25)
    pair = PolicyPair.from_region((PolicyKind.CW, PolicyKind.FRW), region)
    rows = cost_surface_grid(pair, 700.0, 0.3, 0.25, nt=15, nu=15)
    # inside coverage the u-axis factor is flat, so each t-row is constant
    c = rows[:, 2].reshape(15, 15)
    assert np.max(np.abs(c - c[:, :1])) <= 1e-12


def test_surface_grid_validation():
    pair = cw_pair(WarrantyRegion(0.1, 0.3, 0.2, 0.6))
    with pytest.raises(DomainError):
        cost_surface_grid(pair, 700.0, 0.5, 0.9, nt=1)
    with pytest.raises(DomainError):
        cost_surface_grid(pair, 700.0, 0.0, 0.9)

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from illposed import HalfLineDomain, Interval, InvalidArgumentError, make_grid
from illposed.domains import half_line_for


def test_interval_validation():
    with pytest.raises(InvalidArgumentError):
        Interval(2.0, 1.0)
    with pytest.raises(InvalidArgumentError):
        Interval(1.0, 1.0)
    assert Interval(1.0, 2.0).length == 1.0


def test_half_line_validation():
    with pytest.raises(InvalidArgumentError):
        HalfLineDomain(-1.0)
    with pytest.raises(InvalidArgumentError):
        HalfLineDomain(10.0, panel_count=0)
    d = half_line_for(Interval(1.0, 2.0))
    assert d.s_max == 40.0 and d.panel_count == 8
    edges = d.breakpoints()
    assert edges[0] == 0.0 and edges[-1] == 40.0
    assert np.all(np.diff(edges) > 0)


def test_one_point_rule_is_midpoint():
    g = make_grid(Interval(-1.0, 1.0), 1)
    assert g.nodes[0] == pytest.approx(0.0, abs=1e-15)
    assert g.weights[0] == pytest.approx(2.0, abs=1e-15)


def test_two_point_rule():
    # moment equations for the 2-point rule give nodes +-1/sqrt(3), weights 1
    g = make_grid(Interval(-1.0, 1.0), 2)
    assert g.nodes == pytest.approx([-1.0 / np.sqrt(3.0), 1.0 / np.sqrt(3.0)])
    assert g.weights == pytest.approx([1.0, 1.0])


def test_weights_sum_to_length():
    for n in (1, 3, 17, 64):
        g = make_grid(Interval(1.0, 2.0), n)
        assert g.integrate(np.ones(g.size)) == pytest.approx(1.0, rel=1e-14)
    h = make_grid(half_line_for(Interval(1.0, 2.0)), 16)
    assert h.weights.sum() == pytest.approx(40.0, rel=1e-13)


def test_invalid_grid_arguments():
    with pytest.raises(InvalidArgumentError):
        make_grid(Interval(0.0, 1.0), 0)


@settings(max_examples=40, deadline=None)
@given(n=st.integers(min_value=1, max_value=24), k=st.integers(min_value=0, max_value=47))
def test_gauss_exactness_on_monomials(n, k):
    # exact for degree <= 2n-1
    if k > 2 * n - 1:
        return
    g = make_grid(Interval(0.0, 1.0), n)
    exact = 1.0 / (k + 1)
    assert g.integrate(g.nodes ** k) == pytest.approx(exact, rel=1e-12)


def test_half_line_panels_integrate_decaying_kernel():
    h = make_grid(half_line_for(Interval(1.0, 2.0)), 32)
    # int_0^inf e^{-2s} ds = 1/2, truncation tail below 1e-34
    assert h.integrate(np.exp(-2.0 * h.nodes)) == pytest.approx(0.5, rel=1e-13)

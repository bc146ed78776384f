import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from mobsum.errors import DomainError, InvalidArgumentError
from mobsum.quad import MellinBracket, integrate_piecewise, mellin_numeric
from mobsum.special import mellin_G1_closed, mellin_H1_closed
from mobsum.weights import G1_SPEC, H1_SPEC


def test_integrate_smooth():
    v = integrate_piecewise(np.sin, 0.0, math.pi)
    assert v == pytest.approx(2.0, abs=1e-12)
    v = integrate_piecewise(lambda x: x**3, 0.0, 2.0)
    assert v == pytest.approx(4.0, abs=1e-13)


def test_integrate_with_kink():
    # |x - 1| over [0, 2] = 1; the kink must be declared as a breakpoint
    f = lambda x: np.abs(x - 1.0)
    v = integrate_piecewise(f, 0.0, 2.0, breakpoints=[1.0])
    assert v == pytest.approx(1.0, abs=1e-13)


def test_integrate_scalar_callable():
    v = integrate_piecewise(lambda x: math.exp(-x), 0.0, 5.0)
    assert v == pytest.approx(1.0 - math.exp(-5.0), abs=1e-12)


def test_integrate_degenerate_and_bad_range():
    assert integrate_piecewise(np.cos, 1.0, 1.0) == 0.0
    with pytest.raises(InvalidArgumentError):
        integrate_piecewise(np.cos, 2.0, 1.0)


def test_bracket_basics():
    b = MellinBracket(lo=1.0, hi=2.0, finite_part_limit=10.0, tail_bound_used="t")
    assert b.width == 1.0
    assert b.contains(1.5) and not b.contains(2.5)


@pytest.mark.parametrize("s", [-0.5, 0.0, 0.5, 1.0, 2.0])
def test_mellin_bracket_contains_closed_form_G1(s):
    closed = mellin_G1_closed(s)
    b = mellin_numeric(G1_SPEC, s, 2000)
    assert b.contains(closed.value)


@pytest.mark.parametrize("s", [0.0, 0.5, 1.0])
def test_mellin_bracket_contains_closed_form_H1(s):
    closed = mellin_H1_closed(s)
    b = mellin_numeric(H1_SPEC, s, 2000)
    assert b.contains(closed.value)


@pytest.mark.parametrize("weight,s", [(G1_SPEC, 0.5), (H1_SPEC, 0.5)])
def test_simple_envelope_is_one_sided_and_wider(weight, s):
    sharp = mellin_numeric(weight, s, 1000)
    simple = mellin_numeric(weight, s, 1000, envelope="simple")
    closed = (mellin_G1_closed if weight is G1_SPEC else mellin_H1_closed)(s)
    assert simple.contains(closed.value)
    assert simple.width >= sharp.width


def test_sharp_envelope_needs_integer_cutoff():
    with pytest.raises(InvalidArgumentError):
        mellin_numeric(G1_SPEC, 0.5, 1000.5)
    # the simple envelope has no integrality requirement
    b = mellin_numeric(G1_SPEC, 0.5, 1000.5, envelope="simple")
    assert b.contains(mellin_G1_closed(0.5).value)


def test_mellin_tail_divergence_guard():
    with pytest.raises(DomainError):
        mellin_numeric(G1_SPEC, -1.5, 100)


def test_mellin_deterministic():
    a = mellin_numeric(G1_SPEC, 0.5, 500)
    b = mellin_numeric(G1_SPEC, 0.5, 500)
    assert (a.lo, a.hi) == (b.lo, b.hi)


def test_bracket_narrows_with_cutoff():
    widths = [mellin_numeric(G1_SPEC, 0.5, X).width for X in (10, 100, 1000)]
    assert widths[0] > widths[1] > widths[2]


@given(st.floats(min_value=-0.9, max_value=3.0))
@settings(max_examples=25, deadline=None)
def test_mellin_bracket_property(s):
    if abs(s - 1.0) < 1e-3:
        return
    closed = mellin_G1_closed(s)
    b = mellin_numeric(G1_SPEC, s, 500)
    assert b.lo - 1e-15 <= closed.value <= b.hi + 1e-15

import math

import pytest

from conftest import golden_points
from mobsum.errors import InvalidArgumentError
from mobsum.identities import (
    g1_boundary_over_y,
    g1_head_integral,
    h1_head_integral,
    residual_bal2,
    residual_h1_remainder,
    residual_mchliss,
    residual_thm1_G,
    residual_thm1_H,
    step_weighted_G1_integral,
)
from mobsum.quad import integrate_piecewise
from mobsum.weights import G1_SPEC, epsilon1, g1, h1


def test_closed_form_boundary_integrals_match_quadrature():
    for x in (2.0, 7.3, 50.0):
        num = integrate_piecewise(lambda y: g1(y) / y, 1.0 / x, 1.0, tol=1e-13) / x
        assert g1_boundary_over_y(x) == pytest.approx(num, abs=1e-12)
        num = integrate_piecewise(g1, 0.0, 1.0 / x, tol=1e-13)
        assert g1_head_integral(x) == pytest.approx(num, abs=1e-12)
        num = integrate_piecewise(h1, 0.0, 1.0 / x, tol=1e-13)
        assert h1_head_integral(x) == pytest.approx(num, abs=1e-12)


@pytest.mark.parametrize("x", [1.0, 1.7, 2.0, 7.0, 33.3, 500.9, 4999.5])
def test_thm1_both_families(tables_small, x):
    rg = residual_thm1_G(tables_small, x)
    rh = residual_thm1_H(tables_small, x)
    assert rg.passed and abs(rg.residual) < 1e-9
    assert rh.passed and abs(rh.residual) < 1e-9


@pytest.mark.parametrize("x", [1.0, 2.5, 7.0, 100.0, 1234.5])
def test_bal2_and_mchliss(tables_small, x):
    rb = residual_bal2(tables_small, x)
    rm = residual_mchliss(tables_small, x)
    assert rb.passed and abs(rb.residual) < 1e-9
    assert rm.passed and abs(rm.residual) < 1e-9


def test_identities_at_quasi_random_points(tables_small):
    for x in golden_points(10, 1.0, 10000.0):
        for fn in (residual_thm1_G, residual_thm1_H, residual_bal2, residual_mchliss):
            rep = fn(tables_small, x)
            assert rep.passed, (fn.__name__, x, rep.residual)


def test_step_weighted_integral_matches_quadrature(tables_small):
    # exact antiderivative route vs adaptive quadrature of M(x/t) G1(t)
    import numpy as np
    from mobsum.quad import _g1_lattice_vec, _panelize, _batch_quad, _integer_breaks

    for x in (7.0, 50.3, 200.0):
        exact = step_weighted_G1_integral(tables_small, x)
        mert = tables_small.mu.mertens

        def fvec(t):
            n = np.clip(np.floor(x / t).astype(np.int64), 1, tables_small.limit)
            return mert[n] * _g1_lattice_vec(t)

        k = np.arange(1, math.floor(x) + 1, dtype=np.float64)
        breaks = np.concatenate([_integer_breaks(1.0, x), x / k])
        lo, hi = _panelize(1.0, x, breaks)
        num, _, _ = _batch_quad(fvec, lo, hi, 1e-11)
        assert exact == pytest.approx(num, abs=1e-9)


def test_epsilon1_antiderivative_check():
    from mobsum.quad import _g1_lattice_vec, _panelize, _batch_quad, _integer_breaks
    import numpy as np

    for x in (2.0, 7.0, 50.0, 1000.0):
        lo, hi = _panelize(1.0, x, _integer_breaks(1.0, x))
        num, _, _ = _batch_quad(_g1_lattice_vec, lo, hi, 1e-12)
        assert abs(num - (epsilon1(x) - epsilon1(1.0))) < 1e-9


def test_h1_remainder_function():
    assert residual_h1_remainder(1.0) == pytest.approx(2 - 8 / 3 - 2 / 3 + 4 / 3)
    # increasing, nonnegative after its zero, limit 2
    vals = [residual_h1_remainder(x) for x in (1.0, 2.0, 5.0, 100.0, 1e6)]
    assert all(b >= a for a, b in zip(vals, vals[1:]))
    assert vals[-1] == pytest.approx(2.0, abs=1e-5)
    # |integral_0^{1/x} h1| = F(x)/x <= 2/x
    for x in (1.5, 4.0, 77.0):
        assert abs(h1_head_integral(x)) <= 2.0 / x


def test_x_below_one_rejected(tables_small):
    for fn in (residual_thm1_G, residual_thm1_H, residual_bal2, residual_mchliss):
        with pytest.raises(InvalidArgumentError):
            fn(tables_small, 0.5)

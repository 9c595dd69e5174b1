import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tfloc import spectral1d as sp
from tfloc.trace_squared import trs2_interval_explicit


# --- quadrature --------------------------------------------------------------


def test_gauss_legendre_one_point():
    r = sp.gauss_legendre(1)
    assert r.nodes[0] == pytest.approx(0.0, abs=1e-15) and r.weights[0] == pytest.approx(2.0)


def test_gauss_legendre_two_points():
    r = sp.gauss_legendre(2)
    np.testing.assert_allclose(np.sort(r.nodes), [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-15)
    np.testing.assert_allclose(r.weights, [1.0, 1.0], atol=1e-15)


def test_gauss_legendre_exactness():
    assert abs(sp.gauss_legendre(16, 0.0, 1.0).integrate(lambda x: x**5) - 1 / 6) < 1e-14


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 40), st.floats(-5, 5), st.floats(0.1, 10))
def test_gauss_legendre_polynomial_degree(n, a, width):
    b = a + width
    r = sp.gauss_legendre(n, a, b)
    k = 2 * n - 1
    exact = (b ** (k + 1) - a ** (k + 1)) / (k + 1)
    assert r.integrate(lambda x: x**k) == pytest.approx(exact, rel=1e-10, abs=1e-10)


def test_gauss_legendre_invalid():
    with pytest.raises(ValueError):
        sp.gauss_legendre(0)
    with pytest.raises(ValueError):
        sp.gauss_legendre(4, 1.0, 1.0)


def test_composite_rule():
    r = sp.composite_gauss_legendre(np.linspace(0, 3, 7), 5)
    assert len(r) == 30
    assert r.integrate(np.exp) == pytest.approx(math.e**3 - 1, rel=1e-13)


# --- localization spectra ------------------------------------------------------


@pytest.mark.parametrize("c", [1.0, 2.0, 5.0, 10.0, 20.0])
def test_trace_identity(c):
    s = sp.localization_spectrum(c)
    assert abs(math.fsum(s.values) - c) / c < 1e-8


def test_top_eigenvalue_below_one():
    for c in (0.5, 1.0, 2.0, 5.0):
        assert sp.localization_spectrum(c).values[0] < 1.0


def test_values_in_unit_interval_and_sorted():
    s = sp.localization_spectrum(15.0)
    assert np.all(s.values >= 0) and np.all(s.values <= 1)
    assert np.all(np.diff(s.values) <= 0)


def test_sum_of_squares_matches_closed_form():
    s = sp.localization_spectrum(10.0)
    assert abs(math.fsum(s.values**2) - trs2_interval_explicit(10.0)) < 1e-8


@pytest.mark.parametrize("c", [1.0, 5.0, 10.0, 20.0])
def test_nystrom_convergence(c):
    a = sp.localization_spectrum(c)
    b = sp.localization_spectrum(c, n_nodes=2 * a.nodes)
    k = np.count_nonzero(a.values > 1e-10)
    assert np.max(np.abs(a.values[:k] - b.values[:k])) < 1e-8


def test_interlacing_in_c():
    a = sp.localization_spectrum(6.0)
    b = sp.localization_spectrum(7.5, n_nodes=a.nodes + 20)
    k = np.count_nonzero(a.values > a.floor)
    assert np.all(b.values[:k] >= a.values[:k] - 1e-12)


def test_scale_invariance():
    s = sp.localization_spectrum(6.0)
    t = sp.localization_spectrum_ab(3.0, 2.0, n_nodes=s.nodes)
    k = np.count_nonzero(s.values > s.floor)
    np.testing.assert_allclose(t.values[:k], s.values[:k], atol=1e-8)


def test_eigenpair_residuals():
    s, M, V = sp.localization_spectrum(8.0, vectors=True)
    rng = np.random.default_rng(0)
    norm = np.linalg.norm(M, 2)
    for i in rng.choice(10, 5, replace=False):
        v = V[:, i]
        assert np.linalg.norm(M @ v - s.values[i] * v) <= 1e-10 * norm


def test_too_few_nodes():
    with pytest.raises(sp.ResolutionError):
        sp.localization_spectrum(20.0, n_nodes=30)


def test_invalid_c():
    with pytest.raises(ValueError):
        sp.localization_spectrum(0.0)


def test_untrusted_values_flagged():
    s = sp.localization_spectrum(3.0)
    assert not s.trusted[-1]
    assert np.all(s.trusted_values > s.floor)


def test_csv_roundtrip():
    s = sp.localization_spectrum(4.0)
    t = sp.Spectrum.from_csv(s.to_csv())
    np.testing.assert_array_equal(t.values, s.values)
    assert t.descriptor() == s.descriptor() and t.floor == s.floor and t.nodes == s.nodes


def test_clip_rejects_wild_eigenvalues():
    with pytest.raises(sp.NumericError):
        sp._sorted_clipped(np.array([1.5, 0.2]))


# --- I_r and J_r --------------------------------------------------------------


def test_ir_bounded_and_trace():
    s = sp.ir_singular_values(8.0)
    assert np.all(s.values <= 1.0)
    assert abs(math.fsum(s.values**2) - 8.0) < 1e-8


def test_ir_tiny_values_at_large_r():
    s = sp.ir_singular_values(100.0, n_nodes=1100)
    assert s.values[999] <= 1e-10


def test_ir_matches_localization_eigenvalues():
    r = 6.0
    s = sp.ir_singular_values(r)
    loc = sp.localization_spectrum(r, n_nodes=s.nodes)
    k = np.count_nonzero(loc.values > 1e-8)
    np.testing.assert_allclose(s.values[:k] ** 2, loc.values[:k], atol=1e-12)


def test_jr_first_tail_bound_any_r():
    for r in (0.5, 1.0, 3.0):
        s = sp.jr_singular_values(r)
        assert s.values[2] <= math.sqrt(2) / math.pi


def test_jr_exact_far_field_matches_truncation():
    r = 1.0
    exact = sp.jr_singular_values(r)
    trunc = sp.jr_singular_values(r, R=64.0)
    tail = trunc.params["tail"]
    k = 6
    assert np.all(np.abs(exact.values[:k] - trunc.values[:k]) <= tail + 1e-6)


def test_jr_r_independent_bound():
    assert sp.jr_rank2_tail_bound(4) == sp.jr_rank2_tail_bound(4)
    for r in (5.0, 50.0):
        s = sp.jr_singular_values(r, refine=False)
        assert s.values[4] <= sp.jr_rank2_tail_bound(1)


def test_jr_escalation_infeasible_tolerance():
    with pytest.raises(sp.ResolutionError):
        sp.jr_escalate(2.0, 1e-6)


def test_jr_escalation_reaches_tolerance():
    s = sp.jr_escalate(1.0, 0.05, n_nodes=64, refine=False)
    assert s.params["tail"] <= 0.05


def test_jr_invalid_radius():
    with pytest.raises(ValueError):
        sp.jr_singular_values(2.0, R=3.0)


def test_tail_bound_values():
    assert sp.jr_rank2_tail_bound(0) == pytest.approx(math.sqrt(2) / math.pi)
    assert sp.jr_rank2_tail_bound(10) == pytest.approx(math.sqrt(2) / math.pi / 1024)
    assert sp.jr_rank2_tail_sum(10) <= sp.jr_rank2_tail_bound(10)


def test_factor_norms_against_quadrature():
    n, r = 3, 1.5
    f, g = sp.jr_factor_norms(n, r)
    from scipy import integrate

    f2 = 2 * integrate.quad(lambda x: x ** (-2 * n - 2), 2 * r, np.inf)[0]
    g2 = 2 * integrate.quad(lambda y: y ** (2 * n), 0, r)[0]
    assert f == pytest.approx(math.sqrt(f2)) and g == pytest.approx(math.sqrt(g2))

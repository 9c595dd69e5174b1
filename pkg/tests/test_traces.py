import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tfloc import spectral1d as sp
from tfloc import tensor_counting as tc
from tfloc import traces as tr
from tfloc.geometry import AxisBox, BoxUnion

UNIT = BoxUnion([AxisBox([(0.0, 1.0)])])


@pytest.fixture(scope="module")
def spectra():
    return {c: sp.localization_spectrum(c) for c in (5.0, 10.0, 40.0, 80.0)}


@pytest.mark.parametrize("f", [tr.identity(), tr.entropy(), tr.indicator(0.3), tr.log_singular(), tr.power(3), tr.zero()],
                         ids=lambda f: f.name)
def test_envelopes_dominate_samples(f):
    assert f(np.array([0.0]))[0] == 0.0
    assert tr.envelope_violations(f) == 0


def test_sampled_envelopes():
    h = tr.entropy()
    g = tr.SpectralFunction(h.evaluate, "sampled entropy")
    assert tr.envelope_violations(g) == 0
    for t in (1e-6, 0.01, 0.3, 0.7):
        assert g.M0(t) >= h.M0(t) - 1e-15
        assert g.M0(t) <= h.M0(min(t * 1.01 + 1e-4, 1.0))


def test_envelopes_nondecreasing():
    f = tr.log_singular()
    ts = np.linspace(0, 1, 300)
    m0 = [f.M0(t) for t in ts]
    m1 = [f.M1(t) for t in ts]
    assert np.all(np.diff(m0) >= 0) and np.all(np.diff(m1) >= 0)


def test_trace_identity_function(spectra):
    for c, s in spectra.items():
        assert tr.trace_function(s, tr.identity()).value == pytest.approx(c, rel=1e-6)


def test_trace_identity_product(spectra):
    p = tc.product_spectrum(spectra[5.0], 2, floor=1e-12)
    assert tr.trace_function(p, tr.identity()).value == pytest.approx(25.0, rel=1e-6)


def test_trace_zero(spectra):
    assert tr.trace_function(spectra[10.0], tr.zero()).value == 0.0


def test_trace_tail_reported_separately(spectra):
    s = spectra[10.0]
    v = tr.trace_function(s, tr.identity())
    assert v.tail_bound == pytest.approx(s.floor * np.count_nonzero(~s.trusted))


def test_trace_nonfinite_raises(spectra):
    bad = tr.SpectralFunction(lambda x: np.log(np.asarray(x) - 0.5), "bad")
    with pytest.raises(tr.EvaluationError), np.errstate(invalid="ignore"):
        tr.trace_function(spectra[5.0], bad)


def test_entropy_trace_finite(spectra):
    v = tr.trace_function(spectra[40.0], tr.entropy()).value
    assert 0 < v < math.inf


def test_entropy_slope(spectra):
    h = tr.entropy()
    q = (tr.trace_function(spectra[80.0], h).value - tr.trace_function(spectra[40.0], h).value) / math.log(2)
    assert abs(q - 1 / 3) <= 0.1 / 3


def test_schatten_p1_is_trace(spectra):
    assert tr.schatten_quasinorm(spectra[10.0], 1.0) == pytest.approx(10.0, rel=1e-10)


def test_schatten_p2_against_closed_form(spectra):
    from tfloc.trace_squared import trs2_interval_explicit

    assert tr.schatten_quasinorm(spectra[10.0], 2.0) == pytest.approx(trs2_interval_explicit(10.0), abs=1e-8)


def test_schatten_direct_sum_additive(spectra):
    a, b = spectra[5.0], spectra[10.0]
    both = sp.Spectrum(np.sort(np.concatenate([a.trusted_values, b.trusted_values]))[::-1], "sum", {}, 1, 0, a.floor)
    for p in (0.1, 0.5, 2.0):
        assert tr.schatten_quasinorm(both, p) == pytest.approx(tr.schatten_quasinorm(a, p) + tr.schatten_quasinorm(b, p),
                                                               rel=1e-12)


def test_schatten_invalid():
    s = sp.localization_spectrum(2.0)
    for p in (0.0, -1.0, math.inf):
        with pytest.raises(ValueError):
            tr.schatten_quasinorm(s, p)


@pytest.mark.parametrize("delta", [0.3, 0.1, 0.01])
def test_schatten_count(spectra, delta):
    for s in spectra.values():
        count, bound = tr.schatten_count_bound(s, delta)
        assert count <= bound


@pytest.mark.parametrize("a", [round(0.1 * k, 1) for k in range(1, 10)])
def test_plunge_indicator(a):
    p = tr.plunge_integral(tr.indicator(a))
    assert not p.divergent
    assert abs(p.value - math.log((1 - a) / a)) < 1e-8


def test_plunge_identity_zero():
    assert tr.plunge_integral(tr.identity()).value == 0.0


def test_plunge_entropy():
    # -log(t)/(1-t) and -log(1-t)/t each integrate to sum 1/k^2
    oracle = 2 * math.fsum(1 / k**2 for k in range(1, 200_000)) + 2 / 200_000
    p = tr.plunge_integral(tr.entropy())
    assert abs(p.value - oracle) < 1e-6
    assert p.error < 1e-6


def test_plunge_divergent():
    one = tr.SpectralFunction(lambda x: (np.asarray(x) > 0).astype(float), "one")
    assert tr.plunge_integral(one).divergent


def test_two_term_identity():
    A = BoxUnion([AxisBox([(0.0, 3.0)])])
    rep = tr.two_term_prediction(tr.identity(), A, UNIT, 7.0)
    assert rep.second == 0.0
    assert rep.leading == pytest.approx(21.0)
    assert rep.residual is None


@pytest.mark.parametrize("a", [0.2, 0.8])
def test_two_term_matches_slepian(a):
    c = 30.0
    rep = tr.two_term_prediction(tr.indicator(a), UNIT, UNIT, c)
    assert rep.leading + rep.second == pytest.approx(tc.slepian_prediction(c, a), rel=1e-12)


def test_two_term_entropy_coefficient():
    c = 50.0
    rep = tr.two_term_prediction(tr.entropy(), UNIT, UNIT, c)
    assert rep.second == pytest.approx(math.log(c) / 3, rel=1e-9)


def test_report_json_and_csv(spectra):
    v = tr.trace_function(spectra[10.0], tr.entropy()).value
    rep = tr.two_term_prediction(tr.entropy(), UNIT, UNIT, 10.0, trace=v)
    data = json.loads(rep.to_json())
    assert {"trace", "leading", "second", "residual", "admissibility"} <= set(data)
    assert math.isfinite(data["residual"])
    assert len(rep.csv_row().split(",")) == len(tr.TraceReport.CSV_COLUMNS)


def test_admissibility_identity():
    a = tr.admissibility(tr.identity(), 2)
    assert not a.trace_class_divergent and not a.area_law_divergent


def test_admissibility_log_singular():
    f = tr.log_singular(1.5)
    a2 = tr.admissibility(f, 2)
    assert not a2.area_law_divergent and a2.trace_class_divergent
    a1 = tr.admissibility(f, 1)
    assert not a1.trace_class_divergent and math.isfinite(a1.trace_class_integral)


def test_admissibility_area_law_divergent_for_p_below_one():
    assert tr.admissibility(tr.log_singular(0.5), 1).area_law_divergent


def test_admissibility_delta_checked():
    with pytest.raises(ValueError):
        tr.admissibility(tr.identity(), 1, delta=0.2)


@settings(max_examples=10, deadline=None)
@given(st.floats(0.1, 10))
def test_admissibility_scales(s):
    f = tr.log_singular()
    a = tr.admissibility(f, 1)
    b = tr.admissibility(f.scaled(s), 1)
    assert b.trace_class_integral == pytest.approx(s * a.trace_class_integral, rel=1e-9)
    assert b.area_law_integral == pytest.approx(s * a.area_law_integral, rel=1e-9)


def test_dyadic_block_sum_geometric():
    # integral of exp(-u) from 1 to infinity
    b = tr.dyadic_block_sum(lambda u: math.exp(-u), 1.0)
    assert not b.divergent and b.value == pytest.approx(math.exp(-1), rel=1e-9)


def test_dyadic_block_sum_harmonic_diverges():
    assert tr.dyadic_block_sum(lambda u: 1 / u, 1.0).divergent

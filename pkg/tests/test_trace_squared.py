import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from tfloc import spectral1d as sp
from tfloc import trace_squared as t2
from tfloc.geometry import AxisBox, BoxUnion, Interval


def measure_profile(I1, I2, z):
    return np.array([I1.intersect(I2.shifted(-zz)) for zz in z])


# --- overlap profiles ---------------------------------------------------------


def test_profile_equal_intervals():
    p = t2.overlap_profile(Interval(0, 3), Interval(0, 3))
    assert (p.p1, p.p2, p.p3, p.p4, p.plateau) == (-3, 0, 0, 3, 3)


def test_profile_unequal_lengths():
    p = t2.overlap_profile(Interval(0, 1), Interval(0, 3))
    assert p.plateau == 1 and p.p3 - p.p2 == 2


interval = st.tuples(st.floats(-5, 5), st.floats(0.01, 4)).map(lambda t: Interval(t[0], t[0] + t[1]))


@settings(max_examples=50, deadline=None)
@given(interval, interval)
def test_profile_matches_measure(I1, I2):
    p = t2.overlap_profile(I1, I2)
    z = np.linspace(p.p1 - 1, p.p4 + 1, 100)
    np.testing.assert_allclose(p(z), measure_profile(I1, I2, z), atol=1e-12)
    assert p.integral() == pytest.approx(I1.length * I2.length)


# --- W-integrals ----------------------------------------------------------------


def test_w_degenerate():
    assert t2.w_integral(Interval(0, 1), Interval(0, 1), Interval(0, 0), Interval(0, 1)).value == 0


def test_w_matches_explicit():
    w = t2.w_integral(Interval(0, 2), Interval(0, 2), Interval(0, 1), Interval(0, 1))
    assert abs(w.value - t2.trs2_interval_explicit(2.0)) < 1e-8
    assert w.abs_error_bound >= 0


def test_w_against_brute_tensor_quadrature():
    I1, I2, J1, J2 = Interval(0, 1), Interval(0.5, 2), Interval(-0.5, 0.5), Interval(0, 1.5)
    P, Q = t2.overlap_profile(I1, I2), t2.overlap_profile(J1, J2)
    from scipy.special import roots_legendre

    x, w = roots_legendre(40)

    def rule(prof):
        pts, wts = [], []
        for a, b in ((prof.p1, prof.p2), (prof.p2, prof.p3), (prof.p3, prof.p4)):
            if b > a:
                pts.append(0.5 * (a + b) + 0.5 * (b - a) * x)
                wts.append(0.5 * (b - a) * w)
        pts, wts = np.concatenate(pts), np.concatenate(wts)
        return pts, wts * prof(pts)

    z, wz = rule(P)
    v, wv = rule(Q)
    brute = wz @ np.exp(2j * np.pi * np.outer(z, v)) @ wv
    assert abs(t2.w_integral(I1, I2, J1, J2).value - brute) < 1e-10


@settings(max_examples=25, deadline=None)
@given(interval, interval, interval, interval)
def test_w_conjugation_symmetry(I1, I2, J1, J2):
    a = t2.w_integral(I1, I2, J1, J2).value
    b = t2.w_integral(I2, I1, J1, J2).value
    assert abs(a - np.conj(b)) < 1e-10


# --- Tr S^2 ---------------------------------------------------------------------


@pytest.mark.parametrize("c", [1.0, 2.0, 5.0, 10.0])
def test_box_union_matches_explicit(c):
    assert abs(t2.trs2_box_union(*t2.interval_pair(c)) - t2.trs2_interval_explicit(c)) < 1e-8


@pytest.mark.parametrize("c", [1.0, 5.0, 10.0])
def test_oracle_triangle(c):
    A, B = t2.interval_pair(c)
    vals = [math.fsum(sp.localization_spectrum(c).values ** 2), t2.trs2_interval_explicit(c),
            t2.trs2_box_union(A, B), t2.trs2_brute(c)]
    assert max(vals) - min(vals) < 1e-6


def test_tensor_power_identity():
    one = t2.trs2_box_union(*t2.interval_pair(3.0))
    two = t2.trs2_box_union(*t2.interval_pair(3.0, 2))
    assert abs(two - one**2) < 1e-7


def test_explicit_small_c():
    c = 1e-3
    assert abs(t2.trs2_interval_explicit(c) - t2.trs2_brute(c)) < 1e-12
    assert t2.trs2_interval_explicit(c) < 1e-5


def _random_union(rng, d):
    boxes = []
    for _ in range(rng.integers(1, 4)):
        lo = rng.uniform(-2, 2, d)
        boxes.append(AxisBox.from_bounds(lo, lo + rng.uniform(0.1, 1.5, d)))
    return BoxUnion(boxes)


def test_random_unions_real_and_bounded():
    rng = np.random.default_rng(11)
    for i in range(50):
        d = 1 + i % 2
        A, B = _random_union(rng, d), _random_union(rng, d)
        value, err = t2.trs2_box_union(A, B, with_error=True)  # raises if the imaginary part is large
        from tfloc.geometry import normalize_box_union

        trace = normalize_box_union(A).volume * normalize_box_union(B).volume
        assert -1e-10 <= value <= trace + 1e-10
        assert err >= 0


def test_imaginary_residue_raises(monkeypatch):
    monkeypatch.setattr(t2, "w_integral", lambda *a: t2.WValue(1 + 1j, 0.0))
    with pytest.raises(t2.ConsistencyError):
        t2.trs2_box_union(*t2.interval_pair(1.0))


def test_dimension_mismatch():
    with pytest.raises(ValueError):
        t2.trs2_box_union(t2.interval_pair(1.0)[0], t2.interval_pair(1.0, 2)[1])


# --- asymptotics ------------------------------------------------------------------


def test_asymptotic_n0_is_smooth_part():
    c = 7.3
    smooth = c - math.log(c) / math.pi**2 - (1 + 0.5772156649015329 + math.log(2 * math.pi)) / math.pi**2
    assert t2.trs2_asymptotic(c, 0) == pytest.approx(smooth, abs=1e-14)


def test_asymptotic_consecutive_difference_is_term_size():
    c = 10.0
    diff = abs(t2.trs2_asymptotic(c, 3) - t2.trs2_asymptotic(c, 2))
    assert diff == pytest.approx(t2.first_omitted_term(c, 2), rel=0.5)
    assert diff <= t2.first_omitted_term(c, 2) * (1 + 1e-12)


@pytest.mark.parametrize("N", [1, 2, 3, 4])
@pytest.mark.parametrize("c", [5.0, 10.0, 20.0])
def test_asymptotic_error_vs_first_omitted(c, N):
    assert abs(t2.trs2_asymptotic_error(c, N)) <= 2 * t2.first_omitted_term(c, N)


@pytest.mark.parametrize("c,N", [(1.3, 1), (2.0, 2), (5.0, 1), (5.0, 2)])
def test_asymptotic_error_matches_direct_difference(c, N):
    direct = t2.trs2_interval_explicit(c) - t2.trs2_asymptotic(c, N)
    assert t2.trs2_asymptotic_error(c, N) == pytest.approx(direct, rel=1e-6)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_asymptotic_slope(N):
    cs = np.array([5.0, 10.0, 20.0, 40.0])
    err = np.abs([t2.trs2_asymptotic_error(c, N) for c in cs])
    assert np.polyfit(np.log(cs), np.log(err), 1)[0] <= -(2 * N + 1.5)


# --- separated unions ---------------------------------------------------------------


def test_separated_union_decay():
    reps = [t2.separated_union_demo(N, 2) for N in (2, 4, 8, 16)]
    vals = [r.trs2 for r in reps]
    assert all(b < a for a, b in zip(vals, vals[1:]))
    for r in reps:
        assert r.trace == pytest.approx(0.25, abs=1e-15)
        assert r.lambda1_bound == pytest.approx(math.sqrt(r.trs2))
        assert r.trs2 <= r.trace


def test_separated_union_json():
    data = json.loads(t2.separated_union_demo(3, 1).to_json())
    assert data["N"] == 3 and data["trace"] == pytest.approx(0.5)


def test_separated_union_invalid():
    with pytest.raises(ValueError):
        t2.separated_union(1, 0)

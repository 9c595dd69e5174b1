"""Acceptance checks: one function per criterion, each returning a :class:`CriterionResult`.

Shared by ``tfloc verify-all`` and the acceptance test module.
"""
from __future__ import annotations

import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import geometry as geo
from . import spectral1d as sp
from . import tensor_counting as tc
from . import trace_squared as t2
from . import traces as tr


@dataclass
class CriterionResult:
    key: str
    title: str
    passed: bool
    measured: dict = field(default_factory=dict)
    seconds: float = 0.0

    def stable_measured(self) -> dict:
        """Measurements without wall-clock timings (reproducible between runs)."""
        return {k: v for k, v in self.measured.items() if not k.endswith("seconds")}

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        summary = ", ".join(f"{k}={_fmt(v)}" for k, v in self.measured.items())
        return f"[{flag}] {self.key:>8}  {self.title} ({self.seconds:.2f}s): {summary}"


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.4g}"
    if isinstance(v, (list, tuple)):
        return "[" + " ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _timed(key: str, title: str, fn: Callable[[], tuple[bool, dict]]) -> CriterionResult:
    t0 = time.perf_counter()
    ok, measured = fn()
    return CriterionResult(key, title, bool(ok), measured, time.perf_counter() - t0)


# ---------------------------------------------------------------------------


def trace_identity() -> tuple[bool, dict]:
    rel, secs = [], []
    for c in (1.0, 5.0, 10.0, 20.0):
        t0 = time.perf_counter()
        s = sp.localization_spectrum(c)
        secs.append(time.perf_counter() - t0)
        rel.append(abs(math.fsum(s.values) - c) / c)
    return max(rel) <= 1e-8 and max(secs) < 10, {"max_rel_err": max(rel), "max_seconds": max(secs)}


def trs2_cross_oracle() -> tuple[bool, dict]:
    gaps = []
    t0 = time.perf_counter()
    for c in (1.0, 5.0, 10.0):
        A, B = t2.interval_pair(c)
        vals = [
            math.fsum(sp.localization_spectrum(c).values ** 2),
            t2.trs2_interval_explicit(c),
            t2.trs2_box_union(A, B),
            t2.trs2_brute(c),
        ]
        gaps.append(max(vals) - min(vals))
    secs = time.perf_counter() - t0
    return max(gaps) <= 1e-6 and secs < 60, {"max_pairwise_gap": max(gaps), "seconds": secs}


def asymptotic_series() -> tuple[bool, dict]:
    cs = np.array([5.0, 10.0, 20.0, 40.0])
    slopes, ok = [], True
    for N in (1, 2, 3):
        err = np.abs([t2.trs2_asymptotic_error(c, N) for c in cs])
        slope = float(np.polyfit(np.log(cs), np.log(err), 1)[0])
        slopes.append(slope)
        ok &= slope <= -(2 * N + 1.5)
    return ok, {"slopes_N1_N2_N3": slopes}


def slepian() -> tuple[bool, dict]:
    worst_half, worst_a, ok = 0.0, 0.0, True
    spectra = {c: sp.localization_spectrum(c) for c in (10.0, 20.0, 40.0, 80.0)}
    for c, s in spectra.items():
        dev = abs(tc.count_above(s, 0.5) - c)
        ok &= dev <= 2 + math.log(c)
        worst_half = max(worst_half, dev / (2 + math.log(c)))
    for c in (20.0, 40.0, 80.0):
        for a in (0.2, 0.8):
            dev = abs(tc.count_above(spectra[c], a) - tc.slepian_prediction(c, a))
            ok &= dev <= 3 + math.log(c)
            worst_a = max(worst_a, dev / (3 + math.log(c)))
    return ok, {"half_dev_over_slack": worst_half, "a_dev_over_slack": worst_a}


def karnik() -> tuple[bool, dict]:
    violations, worst = 0, 0.0
    for c in (5.0, 10.0, 20.0, 40.0):
        s = sp.localization_spectrum(c)
        for k in range(1, 9):
            eps = 10.0**-k
            if eps <= s.floor:
                continue
            rep = tc.plunge_counts(s, eps)
            bound = tc.karnik_bound(c, eps)
            violations += rep.Lambda > bound
            worst = max(worst, rep.Lambda / bound)
    return violations == 0, {"violations": violations, "max_count_over_bound": worst}


def sandwich() -> tuple[bool, dict]:
    failures = 0
    for c in (5.0, 10.0):
        base = sp.localization_spectrum(c)
        for d in (2, 3):
            for a in (0.3, 0.5, 0.7):
                lo, hi = tc.sandwich_check(base, d, a)
                failures += (not lo) + (not hi)
    return failures == 0, {"failures": failures}


def jr_tail() -> tuple[bool, dict]:
    worst, ok = 0.0, True
    bounds = [sp.jr_rank2_tail_bound(N) for N in range(13)]
    for r in (1.0, 2.0, 5.0, 20.0):
        s = sp.jr_singular_values(r)
        for N, b in enumerate(bounds):
            i = 2 * N + 2
            sigma = s.values[i] if i < len(s) else 0.0
            lhs = max(sigma, 0.0) + s.error_bound
            ok &= lhs <= 1.1 * b
            worst = max(worst, lhs / b)
    return ok, {"max_ratio_to_bound": worst, "bound_N0": bounds[0], "bound_N12": bounds[12]}


def ir_decay() -> tuple[bool, dict]:
    r = 100.0
    n_index = 1000
    s = sp.ir_singular_values(r, n_nodes=max(500, n_index + 100))
    sigma = float(s.values[n_index - 1])
    start = math.ceil(10 * r)
    beyond = s.values[start:]
    beyond = beyond[beyond > 0]
    idx = np.arange(start + 1, start + 1 + len(beyond))
    slope = float(np.polyfit(idx, np.log(beyond), 1)[0]) if len(beyond) >= 3 else float("nan")
    # the resolved part of the decay (below 1/2, above the floor), for reference
    vals = s.values
    seg = np.flatnonzero((vals < 0.5) & (vals > 1e3 * s.floor))
    trusted_slope = float(np.polyfit(seg + 1, np.log(vals[seg]), 1)[0]) if len(seg) >= 3 else float("nan")
    return sigma <= 1e-10 and slope < 0, {
        "sigma_1000": sigma, "slope_beyond_10r": slope, "resolved_decay_slope": trusted_slope,
    }


def schatten_count() -> tuple[bool, dict]:
    spectra = [sp.localization_spectrum(c) for c in (1.0, 5.0, 10.0, 20.0, 40.0)]
    spectra.append(tc.product_spectrum(spectra[1], 2))
    spectra.append(sp.ir_singular_values(10.0))
    spectra.append(sp.jr_singular_values(2.0))
    violations, worst = 0, 0.0
    for s in spectra:
        for delta in (0.3, 0.1, 0.01):
            count, bound = tr.schatten_count_bound(s, delta)
            violations += count > bound
            worst = max(worst, count / bound if bound > 0 else 0.0)
    return violations == 0, {"spectra": len(spectra), "violations": violations, "max_count_over_bound": worst}


def whitney() -> tuple[bool, dict]:
    t0 = time.perf_counter()
    regions = {
        "interval": geo.box_union_sdf(geo.BoxUnion([geo.AxisBox.cube(0.0, 1.0, 1)])),
        "square": geo.box_union_sdf(geo.BoxUnion([geo.AxisBox.cube(0.0, 1.0, 2)])),
        "L": geo.box_union_sdf(geo.l_shape()),
    }
    rng = np.random.default_rng(7)
    ok = True
    c3 = {}
    for name, reg in regions.items():
        per_D = []
        for D in (6, 8):
            w = geo.whitney_decompose(reg, D)
            ok &= bool(np.all(w.certified >= 2 * w.diameters))
            ok &= geo.whitney_disjoint(w)
            pts = reg.bbox.lo + (reg.bbox.hi - reg.bbox.lo) * rng.random((20000, reg.dim))
            pts = pts[reg.evaluate(pts) > 2.0**-D]
            ok &= bool(np.all(w.locate(pts) != 0))
            ratio = geo.complement_distance(reg, w, 2.0 ** -(D + 4)) / w.diameters
            ok &= bool(np.all(ratio >= 2.0))
            per_D.append(float(ratio.max()))
        c3[name] = per_D
        ok &= per_D[1] <= 2 * per_D[0] and per_D[0] <= 2 * per_D[1]
    secs = time.perf_counter() - t0
    return ok and secs < 30, {**{f"c3_{k}": v for k, v in c3.items()}, "seconds": secs}


def censuses() -> tuple[bool, dict]:
    regions = {
        "disk": geo.ball_region(1.0, 2),
        "square": geo.box_union_sdf(geo.BoxUnion([geo.AxisBox.cube(0.0, 1.0, 2)])),
    }
    targets = {"disk": 2 * math.pi, "square": 4.0}
    ok = True
    out = {}
    for name, reg in regions.items():
        cen = geo.shell_census(geo.whitney_decompose(reg, 11))
        full, head = cen.max_constant(4, 10), cen.max_constant(4, 7)
        ok &= full <= 2 * head
        cover = [geo.boundary_cover(reg, 2.0**-k) * 2.0 ** (-k * (reg.dim - 1)) for k in range(4, 11)]
        spread = max(cover) / min(cover)
        ok &= spread <= 2.0
        (_, mk), = geo.minkowski_profile(reg, [2.0**-8])
        rel = abs(mk - targets[name]) / targets[name]
        ok &= rel <= 0.05
        out[f"{name}_shell_C_ratio"] = full / head
        out[f"{name}_cover_spread"] = spread
        out[f"{name}_minkowski_rel_err"] = rel
    return ok, out


def entropy_slope() -> tuple[bool, dict]:
    h = tr.entropy()
    c = 40.0
    q = (tr.trace_function(sp.localization_spectrum(2 * c), h).value
         - tr.trace_function(sp.localization_spectrum(c), h).value) / math.log(2)
    rel = abs(q - 1 / 3) / (1 / 3)
    return rel <= 0.10, {"quotient": q, "rel_err": rel}


def admissibility_classifier() -> tuple[bool, dict]:
    f = tr.log_singular(1.5)
    a2 = tr.admissibility(f, 2)
    a1 = tr.admissibility(f, 1)
    ok = (not a2.area_law_divergent) and a2.trace_class_divergent and not a1.trace_class_divergent
    return ok, {"area_law": a2.area_law_integral, "trace_class_d1": a1.trace_class_integral,
                "trace_class_d2_divergent": a2.trace_class_divergent}


def counterexample() -> tuple[bool, dict]:
    reps = [t2.separated_union_demo(N, 2) for N in (2, 4, 8, 16)]
    vals = [r.trs2 for r in reps]
    decreasing = all(b < a for a, b in zip(vals, vals[1:]))
    trace_dev = max(abs(r.trace - 0.25) for r in reps)
    return decreasing and trace_dev <= 1e-14, {"trs2": vals, "trace_dev": trace_dev}


def envelope() -> tuple[bool, dict]:
    ratios = []
    for c in (10.0, 20.0, 40.0, 80.0):
        s = sp.localization_spectrum(c)
        ratios.append(tc.envelope_report(c, 1e-6, 1, s)["upper_ratio"])
    spread = max(ratios) / min(ratios)
    return spread <= 10, {"upper_ratios": ratios, "max_over_min": spread}


CRITERIA: dict[str, tuple[str, Callable[[], tuple[bool, dict]]]] = {
    "1": ("trace identity", trace_identity),
    "2": ("Tr S^2 cross-oracle", trs2_cross_oracle),
    "3": ("asymptotic series decay", asymptotic_series),
    "4": ("Slepian two-term counts", slepian),
    "5": ("Karnik plunge bound", karnik),
    "6": ("tensor sandwich", sandwich),
    "7": ("J_r tail bound", jr_tail),
    "8": ("I_r decay", ir_decay),
    "9": ("Schatten count inequality", schatten_count),
    "10": ("Whitney invariants", whitney),
    "11": ("geometry censuses", censuses),
    "12": ("enhanced area law slope", entropy_slope),
    "13": ("admissibility classifier", admissibility_classifier),
    "14": ("separated-union counterexample", counterexample),
    "envelope": ("plunge envelope ratio stability", envelope),
}


def run_criterion(key: str) -> CriterionResult:
    title, fn = CRITERIA[key]
    return _timed(key, title, fn)


def run_all(keys=None, jobs: int = 1) -> list[CriterionResult]:
    """Run the selected criteria (all by default); results keep the listed order."""
    keys = list(CRITERIA) if keys is None else list(keys)
    unknown = [k for k in keys if k not in CRITERIA]
    if unknown:
        raise KeyError(f"unknown criteria: {unknown}")
    if jobs <= 1:
        return [run_criterion(k) for k in keys]
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(run_criterion, keys))

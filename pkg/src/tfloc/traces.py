"""Trace functionals ``Tr f(S)``, Schatten sums, and the two-term area law.

A :class:`SpectralFunction` bundles f with its small-argument envelopes
``M0 f(t) = sup_{0<=x<=t} |f(x)|`` and ``M1 f(t) = sup_{1-t<=x<=1} |f(1) - f(x)|``.
Near 0 the envelopes are also available in log coordinates
(``u = log(1/t)``) so that integrals over ``t`` down to 1e-10000 stay finite.
"""
from __future__ import annotations

import json
import math
import warnings
from dataclasses import asdict, dataclass, field
from typing import Callable

import numpy as np
from scipy import integrate

from .geometry import BoxUnion, surface_coefficient
from .spectral1d import Spectrum

ScalarFn = Callable[[float], float]


class EvaluationError(ArithmeticError):
    """f returned non-finite values on the spectrum."""


def _sample_grid(n_linear: int = 10_001) -> np.ndarray:
    dyadic = np.ldexp(1.0, -np.arange(1, 1075))
    grid = np.concatenate([[0.0], dyadic, 1.0 - dyadic[:53], np.linspace(0.0, 1.0, n_linear)])
    return np.unique(np.clip(grid, 0.0, 1.0))


@dataclass(frozen=True)
class SpectralFunction:
    """A function on [0, 1] with f(0) = 0 and its envelopes.

    Missing envelopes are built from dense dyadic sampling (refined toward 0
    and 1). ``log_m0(u)`` / ``log_m1(u)`` give ``M0 f(e^{-u})`` /
    ``M1 f(e^{-u})``; they default to evaluating at ``exp(-u)`` directly.
    """

    evaluate: Callable[[np.ndarray], np.ndarray]
    name: str = "f"
    m0: ScalarFn | None = None
    m1: ScalarFn | None = None
    log_m0: ScalarFn | None = None
    log_m1: ScalarFn | None = None
    breakpoints: tuple[float, ...] = ()
    _samples: dict = field(default_factory=dict, repr=False, compare=False)

    def __call__(self, theta):
        return self.evaluate(np.asarray(theta, dtype=float))

    @property
    def f1(self) -> float:
        return float(self.evaluate(np.array([1.0]))[0])

    def _sampled(self):
        if not self._samples:
            g = _sample_grid()
            vals = np.abs(np.asarray(self.evaluate(g), dtype=float))
            dev = np.abs(self.f1 - np.asarray(self.evaluate(g), dtype=float))
            self._samples["grid"] = g
            self._samples["m0"] = np.maximum.accumulate(vals)
            # M1 at t: sup over x in [1 - t, 1]; accumulate from x = 1 downward
            self._samples["m1"] = np.maximum.accumulate(dev[::-1])[::-1]
        return self._samples

    def M0(self, t: float) -> float:
        if self.m0 is not None:
            return float(self.m0(t))
        s = self._sampled()
        # round outward to the next grid point so the envelope stays an upper bound
        i = np.searchsorted(s["grid"], t, side="left")
        return float(s["m0"][min(i, len(s["grid"]) - 1)])

    def M1(self, t: float) -> float:
        if self.m1 is not None:
            return float(self.m1(t))
        s = self._sampled()
        i = np.searchsorted(s["grid"], 1.0 - t, side="right") - 1
        return float(s["m1"][max(i, 0)])

    def M0_log(self, u: float) -> float:
        if self.log_m0 is not None:
            return float(self.log_m0(u))
        return self.M0(math.exp(-u))

    def M1_log(self, u: float) -> float:
        if self.log_m1 is not None:
            return float(self.log_m1(u))
        return self.M1(math.exp(-u))

    def scaled(self, s: float) -> "SpectralFunction":
        wrap = lambda g: None if g is None else (lambda t: abs(s) * g(t))
        return SpectralFunction(
            lambda x: s * self.evaluate(x),
            f"{s}*{self.name}",
            wrap(self.m0) if self.m0 else (lambda t: abs(s) * self.M0(t)),
            wrap(self.m1) if self.m1 else (lambda t: abs(s) * self.M1(t)),
            wrap(self.log_m0) if self.log_m0 else (lambda u: abs(s) * self.M0_log(u)),
            wrap(self.log_m1) if self.log_m1 else (lambda u: abs(s) * self.M1_log(u)),
            self.breakpoints,
        )


def envelope_violations(f: SpectralFunction, n: int = 10_000) -> int:
    """Grid points where an envelope falls below the sampled supremum (should be 0)."""
    g = np.unique(np.concatenate([np.ldexp(1.0, -np.arange(1, 60)), np.linspace(0, 1, n)]))
    vals = np.abs(f(g))
    sup0 = np.maximum.accumulate(vals)
    dev = np.abs(f.f1 - f(g))
    sup1 = np.maximum.accumulate(dev[::-1])[::-1]  # sup over [g_i, 1] -> M1(1 - g_i)
    bad = 0
    for t, s0, s1 in zip(g, sup0, sup1):
        if f.M0(t) < s0 * (1 - 1e-12) - 1e-300:
            bad += 1
        if f.M1(1.0 - t) < s1 * (1 - 1e-12) - 1e-15:
            bad += 1
    return bad


# ---------------------------------------------------------------------------
# common spectral functions


def identity() -> SpectralFunction:
    return SpectralFunction(lambda x: np.asarray(x, float), "identity", lambda t: t, lambda t: t,
                            lambda u: math.exp(-u), lambda u: math.exp(-u))


def power(k: float) -> SpectralFunction:
    return SpectralFunction(lambda x: np.asarray(x, float) ** k, f"theta^{k}", lambda t: t**k,
                            lambda t: 1 - (1 - t) ** k, lambda u: math.exp(-k * u),
                            lambda u: -math.expm1(k * math.log1p(-math.exp(-u))))


def zero() -> SpectralFunction:
    z = lambda t: 0.0
    return SpectralFunction(lambda x: np.zeros_like(np.asarray(x, float)), "zero", z, z, z, z)


def indicator(a: float) -> SpectralFunction:
    """``1_{(a, 1]}``."""
    if not (0 < a < 1):
        raise ValueError("threshold must lie in (0, 1)")
    return SpectralFunction(
        lambda x: (np.asarray(x, float) > a).astype(float),
        f"1_(>{a})",
        lambda t: 1.0 if t > a else 0.0,
        lambda t: 1.0 if t >= 1 - a else 0.0,
        lambda u: 1.0 if math.exp(-u) > a else 0.0,
        lambda u: 1.0 if math.exp(-u) >= 1 - a else 0.0,
        breakpoints=(a,),
    )


def _xlogx(x: np.ndarray) -> np.ndarray:
    out = np.zeros_like(x)
    m = x > 0
    out[m] = x[m] * np.log(x[m])
    return out


def _entropy_small(t: float) -> float:
    """h(t) for t <= 1/2, accurate for tiny t."""
    if t <= 0:
        return 0.0
    return -t * math.log(t) - (1 - t) * math.log1p(-t)


def entropy() -> SpectralFunction:
    """Binary entropy ``-t log t - (1-t) log(1-t)``."""

    def h(x):
        x = np.asarray(x, float)
        return -_xlogx(x) - _xlogx(1.0 - x)

    env = lambda t: _entropy_small(min(t, 0.5))

    def env_log(u):
        if u < math.log(2):
            return math.log(2)
        t = math.exp(-u)
        return t * u - (1 - t) * math.log1p(-t)

    return SpectralFunction(h, "entropy", env, env, env_log, env_log)


def log_singular(p: float = 1.5) -> SpectralFunction:
    """``1 / log(2/t)^p``: increasing, area-law admissible for p > 1."""
    L2 = math.log(2.0)
    f1 = L2**-p

    def f(x):
        x = np.asarray(x, float)
        out = np.zeros_like(x)
        m = x > 0
        out[m] = np.log(2.0 / x[m]) ** -p
        return out

    def m1_from_eps(eps: float) -> float:
        # f(1) - f(1 - eps) without cancellation
        if eps >= 1:
            return f1
        delta = -math.log1p(-eps)
        return -f1 * math.expm1(-p * math.log1p(delta / L2))

    return SpectralFunction(
        f,
        f"1/log(2/t)^{p}",
        lambda t: float(f(np.array([min(t, 1.0)]))[0]),
        lambda t: m1_from_eps(min(t, 1.0)),
        lambda u: (L2 + u) ** -p,
        lambda u: m1_from_eps(math.exp(-u)),
    )


# ---------------------------------------------------------------------------
# traces and Schatten sums


@dataclass(frozen=True)
class TraceValue:
    value: float
    tail_bound: float

    def __float__(self) -> float:
        return self.value


def trace_function(s: Spectrum, f: SpectralFunction) -> TraceValue:
    """``sum f(v)`` over trusted values; untrusted values only enter ``tail_bound``."""
    vals = s.trusted_values
    fv = np.asarray(f(vals), dtype=float)
    if not np.all(np.isfinite(fv)):
        raise EvaluationError(f"{f.name} is not finite on the spectrum")
    n_below = int(len(s) - len(vals))
    tail = f.M0(s.floor) * n_below
    return TraceValue(float(math.fsum(fv)), tail)


def schatten_quasinorm(s: Spectrum, p: float) -> float:
    """``sum v^p`` over trusted values (the p-th power of the Schatten quasi-norm)."""
    if not (p > 0) or not math.isfinite(p):
        raise ValueError("p must be positive and finite")
    return float(math.fsum(s.trusted_values**p))


def schatten_count_bound(s: Spectrum, delta: float) -> tuple[int, float]:
    """``(#{v >= delta}, sqrt(e) * sum v^p)`` with ``p = 1/(2 log(1/delta))``."""
    if not (0 < delta < 0.5):
        raise ValueError("delta must lie in (0, 1/2)")
    p = 1.0 / (2.0 * math.log(1.0 / delta))
    count = int(np.count_nonzero(s.values >= delta))
    return count, math.sqrt(math.e) * schatten_quasinorm(s, p)


# ---------------------------------------------------------------------------
# plunge integral and admissibility


@dataclass(frozen=True)
class PlungeIntegral:
    value: float
    error: float
    divergent: bool

    def __float__(self) -> float:
        return self.value


def plunge_integral(f: SpectralFunction) -> PlungeIntegral:
    """``integral_0^1 (f(t) - f(1) t) / (t (1 - t)) dt``.

    Adaptive quadrature on [0, 1/2] and [1/2, 1] (extrapolating toward the
    endpoints), split at the breakpoints of f. Divergence is flagged when the
    truncated integrals over ``[delta, 1 - delta]`` keep changing by the same
    amount as ``delta`` goes 1e-4 -> 1e-8 -> 1e-12.
    """
    f1 = f.f1

    def g(t):
        return (float(f(np.array([t]))[0]) - f1 * t) / (t * (1.0 - t))

    def piecewise(lo, hi):
        pts = sorted({lo, hi, *[b for b in (0.5, *f.breakpoints) if lo < b < hi]})
        total, err = 0.0, 0.0
        for a, b in zip(pts[:-1], pts[1:]):
            v, e = integrate.quad(g, a, b, limit=400, epsabs=1e-13, epsrel=1e-12)
            total += v
            err += e
        return total, err

    with warnings.catch_warnings():
        # divergent integrands make quad complain; the partial sums below decide
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        value, err = piecewise(0.0, 1.0)
        partial = [piecewise(dl, 1.0 - dl)[0] for dl in (1e-4, 1e-8, 1e-12)]
    d1 = abs(partial[1] - partial[0])
    d2 = abs(partial[2] - partial[1])
    divergent = d1 > 1e-9 and d2 >= 0.99 * d1
    if divergent:
        value = math.copysign(math.inf, partial[2]) if partial[2] != 0 else math.inf
    return PlungeIntegral(value, err, divergent)


@dataclass(frozen=True)
class BlockSum:
    value: float
    divergent: bool
    blocks: tuple[float, ...]


def dyadic_block_sum(h: ScalarFn, u0: float, max_blocks: int = 64, run: int = 10, ratio: float = 0.99) -> BlockSum:
    """``integral_{u0}^inf h(u) du`` summed over blocks ``[u0 2^k, u0 2^{k+1}]``.

    In ``eps = exp(-u)`` these are the doubly-exponential shells
    ``eps^{2^k}``. The integral is declared divergent when ``run`` consecutive
    block ratios are at least ``ratio``.
    """
    blocks = []
    streak = 0
    for k in range(max_blocks):
        a, b = u0 * 2.0**k, u0 * 2.0 ** (k + 1)
        v, _ = integrate.quad(lambda s: h(math.exp(s)) * math.exp(s), math.log(a), math.log(b), limit=200, epsrel=1e-10, epsabs=0.0)
        blocks.append(v)
        if k > 0 and blocks[-2] > 0 and v / blocks[-2] >= ratio:
            streak += 1
            if streak >= run:
                return BlockSum(math.inf, True, tuple(blocks))
        else:
            streak = 0
        if k > run and blocks[-1] == 0.0 and blocks[-2] == 0.0:
            break
    total = math.fsum(blocks)
    if len(blocks) >= 2 and blocks[-2] > 0:
        q = blocks[-1] / blocks[-2]
        if 0 < q < 1:
            total += blocks[-1] * q / (1 - q)
    return BlockSum(total, False, tuple(blocks))


@dataclass(frozen=True)
class Admissibility:
    trace_class_integral: float
    area_law_integral: float
    trace_class_divergent: bool
    area_law_divergent: bool

    @property
    def flags(self) -> dict[str, bool]:
        return {"trace_class_convergent": not self.trace_class_divergent,
                "area_law_convergent": not self.area_law_divergent}


def admissibility(f: SpectralFunction, d: int, delta: float = math.exp(-math.e)) -> Admissibility:
    """Trace-class and area-law admissibility integrals of f in dimension d.

    trace class: ``int_0^delta M0(e) log(1/e)^{d-1} / (e (log log(1/e))^d) de``;
    area law: ``int_0^1 (M0(e) + M1(e)) / e de``.
    """
    if not (0 < delta <= math.exp(-math.e) * (1 + 1e-12)):
        raise ValueError("delta must lie in (0, e^-e]")
    u0 = math.log(1.0 / delta)
    tc = dyadic_block_sum(lambda u: f.M0_log(u) * u ** (d - 1) / math.log(u) ** d, u0)

    head_pts = sorted({0.0, 1.0, *[math.log(1 / b) for b in f.breakpoints if 0 < math.log(1 / b) < 1],
                       *[-math.log1p(-b) for b in f.breakpoints if 0 < -math.log1p(-b) < 1]})
    head = 0.0
    for a, b in zip(head_pts[:-1], head_pts[1:]):
        head += integrate.quad(lambda u: f.M0_log(u) + f.M1_log(u), a, b, limit=200)[0]
    tail = dyadic_block_sum(lambda u: f.M0_log(u) + f.M1_log(u), 1.0)
    area = math.inf if tail.divergent else head + tail.value
    return Admissibility(tc.value, area, tc.divergent, tail.divergent)


# ---------------------------------------------------------------------------
# two-term prediction


@dataclass
class TraceReport:
    trace: float | None
    leading: float
    second: float
    residual: float | None
    admissibility: tuple[float, float]
    meta: dict = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(asdict(self), sort_keys=True)

    CSV_COLUMNS = ("trace", "leading", "second", "residual", "trace_class_integral", "area_law_integral")

    def csv_row(self) -> str:
        vals = [self.trace, self.leading, self.second, self.residual, *self.admissibility]
        return ",".join("" if v is None else repr(float(v)) for v in vals)


def two_term_prediction(f: SpectralFunction, A: BoxUnion, B: BoxUnion, c: float,
                        trace: float | None = None) -> TraceReport:
    """``c^d |A||B| f(1) + c^{d-1} log(c) I(A,B) * plunge_integral(f)`` for axis-box unions."""
    d = A.dim
    leading = c**d * A.volume * B.volume * f.f1 + 0.0
    coeff = surface_coefficient(A, B)
    pi_f = plunge_integral(f)
    second = c ** (d - 1) * math.log(c) * coeff * pi_f.value if coeff != 0 else 0.0
    adm = admissibility(f, d)
    residual = None if trace is None else trace - leading - second
    meta = {"surface_coefficient": coeff, "plunge_integral": pi_f.value, "c": c, "d": d, "f": f.name}
    return TraceReport(trace, leading, second, residual,
                       (adm.trace_class_integral, adm.area_law_integral), meta)

"""Sine, cosine and exponential integrals in double precision.

Branches
--------
* ``|t| <= 4``: power series (Si, Ci) -- terms stay below ~10 so cancellation
  costs at most one digit.
* ``4 < t < 40``: Lentz evaluation of the continued fraction of ``E1(it)``.
* ``t >= 40``: asymptotic series in the auxiliary functions ``f`` and ``g``,
  truncated at the smallest term (below 1e-17 there).

``E1`` uses its power series for ``t <= 1`` and the real continued fraction
beyond.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

EULER_GAMMA = 0.57721566490153286060651209008240243

SERIES_RADIUS = 4.0
ASYMPTOTIC_RADIUS = 40.0
E1_SERIES_RADIUS = 1.0

_EPS = 2.220446049250313e-16
_MAXIT = 10_000
_TINY = 1e-300


class DomainError(ValueError):
    """Argument outside the domain of a special function."""


@dataclass(frozen=True)
class SpecialValue:
    value: float
    abs_error_bound: float

    def __float__(self) -> float:
        return float(self.value)


def _si_series(t: float) -> tuple[float, float]:
    t2 = t * t
    term = t
    total = t
    mag = abs(t)
    k = 0
    while True:
        k += 1
        term *= -t2 / ((2 * k) * (2 * k + 1))
        contrib = term / (2 * k + 1)
        total += contrib
        mag += abs(contrib)
        if abs(contrib) <= _EPS * abs(total) * 0.1 or contrib == 0.0:
            break
    return total, 4 * _EPS * mag + abs(contrib)


def _ci_series(t: float) -> tuple[float, float]:
    # Ci(t) = gamma + log t + sum_{k>=1} (-1)^k t^{2k} / (2k (2k)!)
    t2 = t * t
    term = 1.0
    acc = 0.0
    mag = 0.0
    k = 0
    while True:
        k += 1
        term *= -t2 / ((2 * k - 1) * (2 * k))
        contrib = term / (2 * k)
        acc += contrib
        mag += abs(contrib)
        if abs(contrib) <= _EPS * max(abs(acc), _EPS) * 0.1 or contrib == 0.0:
            break
    lead = EULER_GAMMA + math.log(t)
    value = lead + acc
    return value, 4 * _EPS * (mag + abs(lead) + abs(value)) + abs(contrib)


def _e1_imag_cf(t: float) -> complex:
    """exp(it) * E1(it) by modified Lentz; equals g(t) - i f(t)."""
    b = complex(1.0, t)
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(2, _MAXIT):
        a = -float((i - 1) * (i - 1))
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta.real - 1.0) + abs(delta.imag) < _EPS:
            return h
    raise ArithmeticError(f"continued fraction for E1(i*{t}) did not converge")


def _fg_asymptotic(t: float) -> tuple[float, float, float]:
    """Auxiliary f, g from their asymptotic series and the truncation error."""
    inv2 = 1.0 / (t * t)
    # f ~ sum (-1)^n (2n)!/t^{2n+1},  g ~ sum (-1)^n (2n+1)!/t^{2n+2}
    f_term = 1.0 / t
    g_term = inv2
    f = f_term
    g = g_term
    n = 0
    while True:
        n += 1
        nf = -f_term * (2 * n - 1) * (2 * n) * inv2
        ng = -g_term * (2 * n) * (2 * n + 1) * inv2
        if abs(nf) >= abs(f_term) or abs(ng) >= abs(g_term):
            break
        f_term, g_term = nf, ng
        f += f_term
        g += g_term
        if abs(f_term) < _EPS * abs(f) * 1e-3 and abs(g_term) < _EPS * abs(g) * 1e-3:
            break
    return f, g, abs(f_term) + abs(g_term)


def auxiliary_fg(t: float) -> tuple[float, float]:
    """Auxiliary functions with Si = pi/2 - f cos t - g sin t, Ci = f sin t - g cos t."""
    if t <= 0:
        raise DomainError("auxiliary functions need t > 0")
    if t >= ASYMPTOTIC_RADIUS:
        f, g, _ = _fg_asymptotic(t)
        return f, g
    h = _e1_imag_cf(t)
    return -h.imag, h.real


def _si_ci_large(t: float) -> tuple[float, float, float]:
    if t >= ASYMPTOTIC_RADIUS:
        f, g, trunc = _fg_asymptotic(t)
    else:
        h = _e1_imag_cf(t)
        f, g, trunc = -h.imag, h.real, 0.0
    s, c = math.sin(t), math.cos(t)
    si = math.pi / 2 - f * c - g * s
    ci = f * s - g * c
    err = trunc + 8 * _EPS * (1.0 + abs(si) + abs(ci))
    return si, ci, err


def sine_integral(t: float) -> SpecialValue:
    """Si(t) = integral of sin(x)/x over [0, t]."""
    if not math.isfinite(t):
        raise DomainError("Si needs a finite argument")
    if t == 0.0:
        return SpecialValue(0.0, 0.0)
    sign = -1.0 if t < 0 else 1.0
    a = abs(t)
    if a <= SERIES_RADIUS:
        v, err = _si_series(a)
    else:
        v, _, err = _si_ci_large(a)
    return SpecialValue(sign * v, err)


def cosine_integral(t: float) -> SpecialValue:
    """Ci(t) = -integral of cos(x)/x over [t, inf), for t > 0."""
    if not (t > 0) or not math.isfinite(t):
        raise DomainError("Ci is defined for finite t > 0")
    if t <= SERIES_RADIUS:
        v, err = _ci_series(t)
    else:
        _, v, err = _si_ci_large(t)
    return SpecialValue(v, err)


def _e1_series(t: float) -> tuple[float, float]:
    term = 1.0
    acc = 0.0
    mag = 0.0
    k = 0
    while True:
        k += 1
        term *= -t / k
        contrib = -term / k
        acc += contrib
        mag += abs(contrib)
        if abs(contrib) <= _EPS * abs(acc) * 0.1:
            break
    lead = -EULER_GAMMA - math.log(t)
    value = lead + acc
    return value, 4 * _EPS * (mag + abs(lead) + abs(value)) + abs(contrib)


def _e1_cf(t: float) -> tuple[float, float]:
    b = t + 1.0
    c = 1.0 / _TINY
    d = 1.0 / b
    h = d
    for i in range(2, _MAXIT):
        a = -float((i - 1) * (i - 1))
        b += 2.0
        d = 1.0 / (a * d + b)
        c = b + a / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) < _EPS:
            value = h * math.exp(-t)
            return value, 8 * _EPS * value
    raise ArithmeticError(f"continued fraction for E1({t}) did not converge")


def exp_integral_e1(t: float) -> SpecialValue:
    """E1(t) = integral of exp(-x)/x over [t, inf), for t > 0."""
    if not (t > 0) or not math.isfinite(t):
        raise DomainError("E1 is defined for finite t > 0")
    if t <= E1_SERIES_RADIUS:
        v, err = _e1_series(t)
    else:
        v, err = _e1_cf(t)
    return SpecialValue(v, err)

"""Reference implementations of the hot kernels (numpy / pure Python).

The compiled module ``tfloc._kernels`` exposes the same three functions;
``tfloc._backend`` picks one at import.
"""
from __future__ import annotations

import numpy as np


def sinc_matrix(x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """``sin(pi (x_i - y_j)) / (pi (x_i - y_j))`` with value 1 on the diagonal."""
    return np.sinc(np.subtract.outer(np.asarray(x, float), np.asarray(y, float)))


def product_enumerate(base: np.ndarray, d: int, floor: float) -> np.ndarray:
    """All ordered d-fold products of ``base`` entries exceeding ``floor``.

    ``base`` must be sorted descending with entries in [0, 1]. Branches are
    pruned once ``partial * base[i] * base[0]**(remaining - 1) <= floor``.
    """
    vals = [float(v) for v in base if v > floor]
    if not vals or d < 1:
        return np.empty(0)
    top = vals[0]
    tops = [top**k for k in range(d)]
    out: list[float] = []
    stack = [(0, 1.0)]
    while stack:
        depth, partial = stack.pop()
        rest = d - depth - 1
        bound = tops[rest]
        if rest == 0:
            for v in vals:
                p = partial * v
                if p <= floor:
                    break
                out.append(p)
            continue
        for v in vals:
            p = partial * v
            if p * bound <= floor:
                break
            stack.append((depth + 1, p))
    return np.asarray(out)


def _j0(x: np.ndarray) -> np.ndarray:
    return np.sinc(x / np.pi)


def _j1(x: np.ndarray) -> np.ndarray:
    """Spherical Bessel j1 = (sin x - x cos x)/x^2, series for |x| < 1."""
    x = np.asarray(x, float)
    out = np.empty_like(x)
    small = np.abs(x) < 1.0
    xs = x[small]
    x2 = xs * xs
    # sum_k (-1)^k (2k+2) x^{2k+1} / (2k+3)!
    term = xs / 3.0
    acc = term.copy()
    for k in range(1, 9):
        term = -term * x2 * (2 * k + 2) / ((2 * k) * (2 * k + 2) * (2 * k + 3))
        acc += term
    out[small] = acc
    xl = x[~small]
    out[~small] = (np.sin(xl) - xl * np.cos(xl)) / (xl * xl)
    return out


def trapezoid_fourier(z: np.ndarray, q: tuple[float, float, float, float], plateau: float) -> np.ndarray:
    """``G(z) = integral of Q(w) exp(2 pi i z w) dw`` for a trapezoid profile ``Q``.

    ``Q`` rises linearly on [q1, q2] from 0 to ``plateau``, is flat on
    [q2, q3] and falls on [q3, q4]. Each piece is integrated in closed form
    about its midpoint using j0/j1, which stays accurate as z -> 0.
    """
    z = np.asarray(z, float)
    a = 2.0 * np.pi * z
    q1, q2, q3, q4 = q
    out = np.zeros(z.shape, dtype=complex)
    pieces = []
    if q2 > q1:
        g = plateau / (q2 - q1)
        pieces.append((q1, q2, g, -g * q1))
    if q3 > q2:
        pieces.append((q2, q3, 0.0, plateau))
    if q4 > q3:
        g = -plateau / (q4 - q3)
        pieces.append((q3, q4, g, -g * q4))
    for wa, wb, gamma, delta in pieces:
        m = 0.5 * (wa + wb)
        h = 0.5 * (wb - wa)
        x = a * h
        out += np.exp(1j * a * m) * ((gamma * m + delta) * 2.0 * h * _j0(x) + 2j * gamma * h * h * _j1(x))
    return out

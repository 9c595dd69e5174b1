"""One-dimensional localization spectra by Nystrom discretization.

All kernels use the frequency window B = [-1/2, 1/2], so that the kernel of
the localization operator is the real sinc kernel ``sin(pi t)/(pi t)``.
Translating or modulating A and B does not change singular values.
"""
from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.special import roots_legendre

from ._backend import sinc_matrix

DEFAULT_FLOOR = 1e-13
CLIP_SLACK = 1e-10


class ResolutionError(ValueError):
    """Too few quadrature nodes for the requested operator."""


class NumericError(ArithmeticError):
    """The discretized operator violated a spectral invariant."""


@dataclass(frozen=True)
class QuadratureRule:
    nodes: np.ndarray
    weights: np.ndarray
    a: float
    b: float

    def integrate(self, f) -> float:
        return float(np.dot(self.weights, f(self.nodes)))

    def __len__(self) -> int:
        return len(self.nodes)


def gauss_legendre(n: int, a: float = -1.0, b: float = 1.0) -> QuadratureRule:
    """n-point Gauss-Legendre rule on [a, b]."""
    if n < 1 or not (a < b):
        raise ValueError("need n >= 1 and a < b")
    x, w = roots_legendre(n)
    half = 0.5 * (b - a)
    return QuadratureRule(0.5 * (a + b) + half * x, half * w, a, b)


def composite_gauss_legendre(breaks, n_per_panel: int) -> QuadratureRule:
    """Gauss-Legendre on each panel between consecutive ``breaks``."""
    breaks = np.asarray(breaks, float)
    x, w = roots_legendre(n_per_panel)
    mid = 0.5 * (breaks[1:] + breaks[:-1])
    half = 0.5 * (breaks[1:] - breaks[:-1])
    nodes = (mid[:, None] + half[:, None] * x[None]).ravel()
    weights = (half[:, None] * w[None]).ravel()
    return QuadratureRule(nodes, weights, float(breaks[0]), float(breaks[-1]))


@dataclass(frozen=True)
class Spectrum:
    """Descending eigenvalues (or singular values) with their provenance.

    ``floor`` marks the level below which values are roundoff; ``error_bound``
    is a uniform absolute uncertainty for the trusted values (quadrature or
    truncation error), 0 when not estimated.
    """

    values: np.ndarray
    kind: str
    params: dict = field(default_factory=dict)
    dim: int = 1
    nodes: int = 0
    floor: float = DEFAULT_FLOOR
    error_bound: float = 0.0

    def __len__(self) -> int:
        return len(self.values)

    @property
    def trusted(self) -> np.ndarray:
        return self.values > self.floor

    @property
    def trusted_values(self) -> np.ndarray:
        return self.values[self.trusted]

    def descriptor(self) -> dict:
        return {"kind": self.kind, "dim": self.dim, **self.params}

    def to_csv(self) -> str:
        """JSON header line, then ``index,value,trusted`` rows."""
        header = {
            "descriptor": self.descriptor(),
            "nodes": self.nodes,
            "floor": self.floor,
            "error_bound": self.error_bound,
            "sum": float(np.sum(self.values)),
        }
        buf = io.StringIO()
        buf.write(json.dumps(header, sort_keys=True) + "\n")
        buf.write("index,value,trusted\n")
        for i, (v, t) in enumerate(zip(self.values, self.trusted), start=1):
            buf.write(f"{i},{float(v)!r},{int(t)}\n")
        return buf.getvalue()

    @classmethod
    def from_csv(cls, text: str) -> "Spectrum":
        lines = text.splitlines()
        header = json.loads(lines[0])
        desc = dict(header["descriptor"])
        kind = desc.pop("kind")
        dim = desc.pop("dim", 1)
        values = np.array([float(line.split(",")[1]) for line in lines[2:] if line.strip()])
        return cls(values, kind, desc, dim, header["nodes"], header["floor"], header["error_bound"])


def default_nodes(c: float) -> int:
    return max(64, math.ceil(4 * c) + 60)


def _sorted_clipped(ev: np.ndarray, upper: float | None = 1.0) -> np.ndarray:
    ev = np.sort(ev)[::-1]
    if ev.size and (ev[-1] < -CLIP_SLACK or (upper is not None and ev[0] > upper + CLIP_SLACK)):
        raise NumericError(f"eigenvalues left [0, {upper}] beyond slack: [{ev[-1]:.3e}, {ev[0]:.3e}]")
    return np.clip(ev, 0.0, upper)


def nystrom_matrix(rule: QuadratureRule, bandwidth: float = 1.0) -> np.ndarray:
    """Symmetric Nystrom matrix ``sqrt(w_i) K(x_i, x_j) sqrt(w_j)`` of the sinc kernel of width ``bandwidth``."""
    s = np.sqrt(rule.weights)
    K = bandwidth * sinc_matrix(bandwidth * rule.nodes, bandwidth * rule.nodes)
    return s[:, None] * K * s[None, :]


def localization_spectrum(c: float, n_nodes: int | None = None, vectors: bool = False):
    """Eigenvalues of the localization operator for A = [0, c], |B| = 1.

    Returns a :class:`Spectrum`; with ``vectors=True`` returns
    ``(spectrum, matrix, eigenvectors)`` with eigenvectors ordered like the values.
    """
    if not (c > 0):
        raise ValueError("c must be positive")
    need = default_nodes(c)
    n = need if n_nodes is None else int(n_nodes)
    if n < need:
        raise ResolutionError(f"c={c} needs at least {need} nodes, got {n}")
    M = nystrom_matrix(gauss_legendre(n, 0.0, c))
    if vectors:
        ev, V = np.linalg.eigh(M)
        order = np.argsort(ev)[::-1]
        spec = Spectrum(_sorted_clipped(ev), "localization_1d", {"c": float(c)}, 1, n)
        return spec, M, V[:, order]
    ev = np.linalg.eigvalsh(M)
    return Spectrum(_sorted_clipped(ev), "localization_1d", {"c": float(c)}, 1, n)


def localization_spectrum_ab(a: float, b: float, n_nodes: int | None = None) -> Spectrum:
    """Spectrum for A = [0, a], B = [-b/2, b/2] discretized with both parameters kept."""
    n = default_nodes(a * b) if n_nodes is None else int(n_nodes)
    ev = np.linalg.eigvalsh(nystrom_matrix(gauss_legendre(n, 0.0, a), bandwidth=b))
    return Spectrum(_sorted_clipped(ev), "localization_1d", {"a": float(a), "b": float(b), "c": float(a * b)}, 1, n)


def ir_singular_values(r: float, n_nodes: int | None = None) -> Spectrum:
    """Singular values of ``I_r = Q_B P_[0, r]``.

    The operator is discretized on the Fourier side, ``phi -> (F P phi)|_B``,
    and factored by a dense SVD, so tiny singular values are resolved to
    absolute accuracy ~1e-16 instead of the square root of the eigenvalue
    roundoff.
    """
    if not (r > 0):
        raise ValueError("r must be positive")
    n = default_nodes(r) if n_nodes is None else int(n_nodes)
    if n < default_nodes(r):
        raise ResolutionError(f"r={r} needs at least {default_nodes(r)} nodes, got {n}")
    space = gauss_legendre(n, 0.0, r)
    freq = gauss_legendre(n, -0.5, 0.5)
    phase = 2 * np.pi * np.outer(freq.nodes, space.nodes)
    sv = np.sqrt(freq.weights)[:, None]
    sw = np.sqrt(space.weights)[None, :]
    A = np.vstack([sv * np.cos(phase) * sw, sv * np.sin(phase) * sw])
    s = np.linalg.svd(A, compute_uv=False)
    return Spectrum(_sorted_clipped(s), "Ir", {"r": float(r)}, 1, n, floor=1e-15)


def jr_tail_bound(r: float, R: float) -> float:
    """Hilbert-Schmidt norm bound of the J_r kernel on |x| > R."""
    return math.sqrt(2 * r * (2 / math.pi**2) / (R - r))


def jr_singular_values(r: float, R: float | None = None, n_nodes: int | None = None, refine: bool = True) -> Spectrum:
    """Singular values of ``J_r = P_{|x| >= 2r} Q_B P_[-r, r]``.

    With ``R=None`` the far field is removed exactly through
    ``J_r^* J_r = P Q P - (P_{[-2r,2r]} Q P)^*(P_{[-2r,2r]} Q P)`` (both
    projections on [-r, r]), so no domain truncation is needed. With finite
    ``R`` the kernel is discretized on ``2r <= |x| <= R`` and the Hilbert-Schmidt
    tail bound is added to ``error_bound``.

    ``refine=True`` repeats the computation with 1.5x nodes and folds the
    largest change into ``error_bound``.
    """
    if not (r > 0):
        raise ValueError("r must be positive")
    if R is not None and R <= 2 * r:
        raise ValueError(f"truncation radius R={R} must exceed 2r={2 * r}")
    n = max(64, math.ceil(8 * r) + 60) if n_nodes is None else int(n_nodes)
    if n < 64:
        raise ResolutionError("J_r needs at least 64 nodes")

    def compute(n_y: int) -> np.ndarray:
        y = gauss_legendre(n_y, -r, r)
        sy = np.sqrt(y.weights)
        if R is None:
            x = gauss_legendre(2 * n_y, -2 * r, 2 * r)
            sx = np.sqrt(x.weights)
            M = sy[:, None] * sinc_matrix(y.nodes, y.nodes) * sy[None, :]
            T = sx[:, None] * sinc_matrix(x.nodes, y.nodes) * sy[None, :]
            ev = np.linalg.eigvalsh(M - T.T @ T)
            return np.sqrt(np.clip(np.sort(ev)[::-1], 0.0, None))
        panels = max(1, math.ceil(R - 2 * r))
        x = composite_gauss_legendre(np.linspace(2 * r, R, panels + 1), 16)
        xs = np.concatenate([-x.nodes[::-1], x.nodes])
        ws = np.concatenate([x.weights[::-1], x.weights])
        T = np.sqrt(ws)[:, None] * sinc_matrix(xs, y.nodes) * sy[None, :]
        return np.linalg.svd(T, compute_uv=False)

    s = compute(n)
    floor = math.sqrt(DEFAULT_FLOOR) if R is None else 1e-15
    err = 0.0
    if refine:
        s2 = compute(math.ceil(1.5 * n))
        k = min(len(s), len(s2))
        mask = s[:k] > floor
        if np.any(mask):
            err = float(np.max(np.abs(s[:k][mask] - s2[:k][mask])))
    tail = 0.0 if R is None else jr_tail_bound(r, R)
    params = {"r": float(r), "R": None if R is None else float(R), "tail": tail}
    return Spectrum(_sorted_clipped(s, upper=None), "Jr", params, 1, n, floor=floor, error_bound=err + tail)


def jr_escalate(r: float, tol: float, R0: float | None = None, R_max: float = 4096.0, **kw) -> Spectrum:
    """Truncated J_r spectrum with R doubled until the tail bound is at most ``tol``."""
    R = 4 * r if R0 is None else R0
    while jr_tail_bound(r, R) > tol:
        R *= 2
        if R > R_max:
            raise ResolutionError(f"tail {tol} needs R > {R_max}; use R=None for the exact far field")
    return jr_singular_values(r, R, **kw)


def jr_factor_norms(n: int, r: float) -> tuple[float, float]:
    """Norms of the rank-one factors ``x^{-n-1} 1_{|x|>2r}`` and ``y^n 1_{|y|<r}``."""
    f2 = 2.0 / (2 * n + 1) * (2 * r) ** (-2 * n - 1)
    g2 = 2.0 / (2 * n + 1) * r ** (2 * n + 1)
    return math.sqrt(f2), math.sqrt(g2)


def jr_rank2_tail_bound(N: int) -> float:
    """Upper bound ``(sqrt 2/pi) 2^{-N}`` on sigma_{2N+3}(J_r), independent of r."""
    if N < 0:
        raise ValueError("N must be non-negative")
    return math.sqrt(2) / math.pi * 2.0**-N


def jr_rank2_tail_sum(N: int, terms: int = 200) -> float:
    """The sharper intermediate sum ``(sqrt 2/pi) sum_{n>N} 2^{-n}/(2n+1)``."""
    return math.sqrt(2) / math.pi * math.fsum(2.0**-n / (2 * n + 1) for n in range(N + 1, N + 1 + terms))

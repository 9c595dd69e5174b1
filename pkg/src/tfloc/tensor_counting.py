"""Tensor-product spectra, counting functions and plunge counts."""
from __future__ import annotations

import io
import math
from dataclasses import asdict, dataclass, field

import numpy as np

from ._backend import product_enumerate
from .spectral1d import Spectrum


class UntrustedThresholdError(ValueError):
    """Threshold at or below the spectrum's numerical floor."""


def default_product_floor(base: Spectrum) -> float:
    return max(1e-12, math.sqrt(base.floor))


def product_spectrum(base: Spectrum, d: int, floor: float | None = None) -> Spectrum:
    """All products of d trusted base values above ``floor``, with multiplicity, descending.

    For a box ``[0, c]^d`` x ``[0, 1]^d`` these are exactly the eigenvalues of
    the localization operator above ``floor``.
    """
    if floor is None:
        floor = default_product_floor(base)
    if not (floor > 0):
        raise ValueError("product floor must be positive")
    if d < 1:
        raise ValueError("dimension must be at least 1")
    vals = product_enumerate(base.trusted_values, d, floor)
    vals = np.sort(vals)[::-1]
    params = dict(base.params)
    return Spectrum(vals, "product_d" if d > 1 else base.kind, params, d * base.dim, base.nodes, floor, base.error_bound)


def count_above(s: Spectrum, eps: float) -> int:
    """Number of values strictly greater than ``eps``."""
    if len(s) == 0:
        return 0
    if eps <= s.floor:
        raise UntrustedThresholdError(f"threshold {eps} is not above the floor {s.floor}")
    asc = s.values[::-1]
    return int(len(asc) - np.searchsorted(asc, eps, side="right"))


def count_at_least(s: Spectrum, t: float) -> int:
    asc = s.values[::-1]
    return int(len(asc) - np.searchsorted(asc, t, side="left"))


def karnik_bound(c: float, eps: float) -> float:
    """Explicit plunge-count bound ``(2/pi^2) log(50c+25) log(5/(eps(1-eps))) + 7``."""
    if not (0 < eps < 0.5) or not (c > 0):
        raise ValueError("need c > 0 and 0 < eps < 1/2")
    return 2 / math.pi**2 * math.log(50 * c + 25) * math.log(5 / (eps * (1 - eps))) + 7


def slepian_prediction(c: float, a: float) -> float:
    """Two-term prediction ``c + (1/pi^2) log((1-a)/a) log c`` for N_a."""
    if not (0 < a < 1) or not (c > 1):
        raise ValueError("need 0 < a < 1 and c > 1")
    return c + math.log((1 - a) / a) * math.log(c) / math.pi**2


@dataclass
class CountingReport:
    c: float
    d: int
    eps: float
    N_eps: int
    N_half: int
    N_one_minus_eps: int
    Lambda_plus: int
    Lambda_minus: int
    Lambda: int
    predictions: dict[str, float] = field(default_factory=dict)

    CSV_COLUMNS = (
        "c", "d", "eps", "N_eps", "N_half", "N_one_minus_eps", "Lambda_plus", "Lambda_minus", "Lambda",
    )

    def csv_header(self) -> str:
        return ",".join(self.CSV_COLUMNS + tuple(sorted(self.predictions)))

    def csv_row(self) -> str:
        row = asdict(self)
        cells = [repr(row[k]) if isinstance(row[k], float) else str(row[k]) for k in self.CSV_COLUMNS]
        cells += [repr(float(self.predictions[k])) for k in sorted(self.predictions)]
        return ",".join(cells)


def plunge_counts(s: Spectrum, eps: float) -> CountingReport:
    """Counts of values above ``1 - eps``, above 1/2, above ``eps``, and the plunge split.

    ``Lambda_plus`` counts ``1/2 < v <= 1 - eps`` and ``Lambda_minus`` counts
    ``eps < v <= 1/2``; with these conventions ``N_{1-eps} = N_{1/2} - Lambda_plus``
    and ``N_eps = N_{1/2} + Lambda_minus`` hold exactly.
    """
    if not (0 < eps < 0.5):
        raise ValueError("eps must lie in (0, 1/2)")
    n_eps = count_above(s, eps)
    n_half = count_above(s, 0.5)
    n_hi = count_above(s, 1 - eps)
    lp = n_half - n_hi
    lm = n_eps - n_half
    c = float(s.params.get("c", s.params.get("r", float("nan"))))
    preds: dict[str, float] = {}
    if c > 0 and math.isfinite(c):
        vol = c**s.dim
        preds["karnik"] = karnik_bound(vol, eps) if s.dim == 1 else float("nan")
        if c > 1:
            preds["slepian_half"] = slepian_prediction(vol, 0.5) if s.dim == 1 else vol
        preds["two_cubes_upper"] = _upper_envelope(c, eps, s.dim)
        preds["tiny_eps_equivalent"] = _tiny_envelope(c, eps, s.dim)
    return CountingReport(float(c), s.dim, float(eps), n_eps, n_half, n_hi, lp, lm, lp + lm, preds)


def _upper_envelope(c: float, eps: float, d: int, alpha: float = 4.0) -> float:
    L = math.log(1 / eps)
    inner = alpha * c / L
    if inner <= 1:
        return float("nan")
    return c ** (d - 1) * L * math.log(inner)


def _tiny_envelope(c: float, eps: float, d: int) -> float:
    L = math.log(1 / eps)
    if L <= c:
        return float("nan")
    return (L / math.log(L / c)) ** d


def sandwich_check(base: Spectrum, d: int, a: float) -> tuple[bool, bool]:
    """Check ``N_{a^{1/d}}(base)^d <= N_a(product) <= N_a(base)^d``."""
    if not (0 < a < 1):
        raise ValueError("a must lie in (0, 1)")
    root = a ** (1.0 / d)
    if root <= base.floor or a <= base.floor:
        raise UntrustedThresholdError("threshold below the base floor")
    prod = product_spectrum(base, d, floor=0.5 * a)
    middle = count_above(prod, a)
    lower = count_above(base, root) ** d
    upper = count_above(base, a) ** d
    return lower <= middle, middle <= upper


def envelope_report(c: float, eps: float, d: int, s: Spectrum, alpha: float = 4.0) -> dict[str, float]:
    """Plunge counts divided by their conjectured envelopes (no assertion made).

    ``upper_ratio`` uses ``c^{d-1} log(1/eps) log(alpha c / log(1/eps))``;
    ``tiny_ratio`` uses ``(log(1/eps) / log(log(1/eps)/c))^d`` and is NaN
    unless ``log(1/eps) > c``.
    """
    rep = plunge_counts(s, eps)
    up = _upper_envelope(c, eps, d, alpha)
    tiny = _tiny_envelope(c, eps, d)
    return {
        "c": c,
        "d": d,
        "eps": eps,
        "Lambda": rep.Lambda,
        "Lambda_plus": rep.Lambda_plus,
        "Lambda_minus": rep.Lambda_minus,
        "upper_envelope": up,
        "upper_ratio": rep.Lambda / up if up > 0 else float("nan"),
        "upper_ratio_plus": rep.Lambda_plus / up if up > 0 else float("nan"),
        "upper_ratio_minus": rep.Lambda_minus / up if up > 0 else float("nan"),
        "tiny_envelope": tiny,
        "tiny_ratio": rep.Lambda_minus / tiny if tiny > 0 else float("nan"),
    }


def counting_csv(reports: list[CountingReport]) -> str:
    if not reports:
        return ""
    buf = io.StringIO()
    buf.write(reports[0].csv_header() + "\n")
    for r in reports:
        buf.write(r.csv_row() + "\n")
    return buf.getvalue()

"""Numerics for time-frequency localization operators.

Spectra of ``P_A F^{-1} P_B F P_A`` for intervals and axis boxes, plunge
counts, trace functionals and ``Tr S^2`` for unions of boxes, together with
the geometric tools (Whitney decompositions, boundary covers) behind the
area-law estimates.
"""
from ._backend import BACKEND
from .geometry import AxisBox, BoxUnion, Interval, Region, box_union_sdf, whitney_decompose
from .spectral1d import (
    Spectrum,
    ir_singular_values,
    jr_singular_values,
    localization_spectrum,
)
from .tensor_counting import count_above, plunge_counts, product_spectrum
from .trace_squared import trs2_box_union, trs2_interval_explicit, w_integral
from .traces import SpectralFunction, plunge_integral, trace_function

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AxisBox",
    "BoxUnion",
    "Interval",
    "Region",
    "Spectrum",
    "SpectralFunction",
    "box_union_sdf",
    "count_above",
    "ir_singular_values",
    "jr_singular_values",
    "localization_spectrum",
    "plunge_counts",
    "plunge_integral",
    "product_spectrum",
    "trace_function",
    "trs2_box_union",
    "trs2_interval_explicit",
    "w_integral",
    "whitney_decompose",
]

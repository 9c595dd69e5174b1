"""Select the compiled kernels when available, else the numpy fallback.

Set ``TFLOC_BACKEND=python`` to force the fallback.
"""
import os

if os.environ.get("TFLOC_BACKEND", "").lower() == "python":
    from . import _kernels_py as kernels

    BACKEND = "python"
else:
    try:
        from . import _kernels as kernels  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        from . import _kernels_py as kernels

        BACKEND = "python"

sinc_matrix = kernels.sinc_matrix
product_enumerate = kernels.product_enumerate
trapezoid_fourier = kernels.trapezoid_fourier

__all__ = ["BACKEND", "kernels", "sinc_matrix", "product_enumerate", "trapezoid_fourier"]

import importlib

import numpy as np
import pytest
from scipy.integrate import trapezoid

from tfloc import _kernels_py as py
from tfloc._backend import BACKEND

try:
    cy = importlib.import_module("tfloc._kernels")
except ImportError:  # pragma: no cover - built in CI
    cy = None

backends = [py] + ([cy] if cy is not None else [])


def test_backend_selected():
    assert BACKEND in ("cython", "python")


@pytest.mark.parametrize("k", backends)
def test_sinc_matrix(k):
    x = np.linspace(-3, 3, 17)
    y = np.linspace(-1, 2, 9)
    np.testing.assert_allclose(k.sinc_matrix(x, y), np.sinc(x[:, None] - y[None, :]), rtol=0, atol=1e-15)


@pytest.mark.parametrize("k", backends)
def test_product_enumerate_small(k):
    out = np.sort(k.product_enumerate(np.array([0.9, 0.5]), 2, 0.1))[::-1]
    np.testing.assert_allclose(out, [0.81, 0.45, 0.45, 0.25])


@pytest.mark.parametrize("k", backends)
@pytest.mark.parametrize("d", [1, 2, 3])
def test_product_enumerate_brute(k, d):
    base = np.sort(np.random.default_rng(d).random(12))[::-1]
    floor = 0.05
    grids = np.meshgrid(*[base] * d, indexing="ij")
    brute = np.prod(np.stack([g.ravel() for g in grids]), axis=0)
    brute = np.sort(brute[brute > floor])
    got = np.sort(k.product_enumerate(base, d, floor))
    np.testing.assert_array_equal(got, brute)


def _brute_ft(z, q, plateau):
    w = np.linspace(q[0], q[3], 200001)
    prof = np.interp(w, q, [0, plateau, plateau, 0])
    return trapezoid(prof[None, :] * np.exp(2j * np.pi * np.outer(z, w)), w, axis=1)


@pytest.mark.parametrize("k", backends)
@pytest.mark.parametrize("q,plateau", [((-1, 0, 0, 1), 1.0), ((-2.0, -1.5, 0.5, 1.0), 0.5), ((0.3, 0.3, 1.7, 1.7), 2.0)])
def test_trapezoid_fourier_against_quadrature(k, q, plateau):
    z = np.array([0.0, 1e-9, 0.1, 0.77, 3.2, -2.5])
    if q[0] == q[1]:
        # box: closed form
        a, b = q[0], q[3]
        ref = np.array([plateau * (b - a) if zz == 0 else plateau * (np.exp(2j * np.pi * zz * b) - np.exp(2j * np.pi * zz * a)) / (2j * np.pi * zz) for zz in z])
    else:
        ref = _brute_ft(z, q, plateau)
    np.testing.assert_allclose(k.trapezoid_fourier(z, q, plateau), ref, atol=1e-8)


@pytest.mark.skipif(cy is None, reason="compiled kernels not built")
def test_backends_agree():
    rng = np.random.default_rng(5)
    z = rng.normal(scale=3, size=500)
    q = (-1.3, -0.2, 0.4, 2.0)
    np.testing.assert_allclose(cy.trapezoid_fourier(z, q, 1.1), py.trapezoid_fourier(z, q, 1.1), rtol=0, atol=1e-14)
    x = rng.random(40)
    np.testing.assert_allclose(cy.sinc_matrix(x, x), py.sinc_matrix(x, x), rtol=0, atol=1e-15)
    base = np.sort(rng.random(30))[::-1]
    np.testing.assert_array_equal(np.sort(cy.product_enumerate(base, 3, 1e-3)), np.sort(py.product_enumerate(base, 3, 1e-3)))


def test_forced_python_backend(monkeypatch):
    import tfloc._backend as b

    monkeypatch.setenv("TFLOC_BACKEND", "python")
    try:
        importlib.reload(b)
        assert b.BACKEND == "python"
    finally:
        monkeypatch.delenv("TFLOC_BACKEND")
        importlib.reload(b)

"""The compiled kernels and the numpy fallback must agree."""
import importlib
import os
import subprocess
import sys

import numpy as np
import pytest

from whitham_mi import _backend, _kernels_py

try:
    from whitham_mi import _kernels as compiled
except ImportError:  # extension not built
    compiled = None

needs_ext = pytest.mark.skipif(compiled is None, reason="compiled extension not built")

CASES = [(_kernels_py.FAMILY_CAPILLARY, 0.0, 1.0), (_kernels_py.FAMILY_CAPILLARY, 0.1, 1.0),
         (_kernels_py.FAMILY_CAPILLARY, 0.7, 1.0), (_kernels_py.FAMILY_VORTICITY, 3.0, 1.0),
         (_kernels_py.FAMILY_VORTICITY, -5.0, -1.0)]


@needs_ext
def test_constants_match():
    for name in ("FAMILY_CAPILLARY", "FAMILY_VORTICITY", "MECH_GROUP", "MECH_LONGSHORT",
                 "MECH_SECOND", "MECH_BF", "PLANE_RAW", "PLANE_CAPILLARY", "PLANE_VORTICITY",
                 "SERIES_CUTOFF"):
        assert getattr(compiled, name) == getattr(_kernels_py, name)


@needs_ext
@pytest.mark.parametrize("family,p,sign", CASES)
def test_symbol_derivs_agree(family, p, sign):
    z = np.concatenate([[0.0, 1e-8, 0.05, 0.1], np.geomspace(0.11, 200, 300)])
    a = _kernels_py.symbol_derivs(family, p, sign, z)
    b = compiled.symbol_derivs(family, p, sign, z)
    for u, v in zip(a, b):
        np.testing.assert_allclose(v, u, rtol=1e-13, atol=1e-14)
    assert compiled.symbol_at_zero(family, p, sign) == pytest.approx(
        _kernels_py.symbol_at_zero(family, p, sign), rel=1e-15)


@needs_ext
@pytest.mark.parametrize("plane", [0, 1, 2])
@pytest.mark.parametrize("mech", [1, 2, 3, 4])
def test_mechanism_values_agree(plane, mech):
    rng = np.random.default_rng(plane * 10 + mech)
    x = rng.uniform(0.05, 10, 500)
    y = rng.uniform(0.01, 3, 500)
    family = _kernels_py.FAMILY_VORTICITY if plane == 2 else _kernels_py.FAMILY_CAPILLARY
    if plane == 2:
        x = rng.uniform(-10, 10, 500)
    a = _kernels_py.mechanism_values(plane, family, 1.0, mech, x, y)
    b = compiled.mechanism_values(plane, family, 1.0, mech, x, y)
    np.testing.assert_allclose(b, a, rtol=1e-12, atol=1e-13)


@needs_ext
def test_bisection_agrees():
    fam = _kernels_py.FAMILY_CAPILLARY
    x0 = np.full(3, 0.5)
    x1 = np.full(3, 3.0)
    y = np.array([0.0, 0.05, 0.5])
    ra = _kernels_py.bisect_segments(0, fam, 1.0, 4, x0, y, x1, y, tol=1e-14)
    rb = compiled.bisect_segments(0, fam, 1.0, 4, x0, y, x1, y, tol=1e-14)
    np.testing.assert_allclose(rb[0], ra[0], atol=1e-12)
    np.testing.assert_allclose(rb[1], ra[1], atol=0)


def test_fallback_selected_by_env():
    env = dict(os.environ, WHITHAM_MI_BACKEND="python")
    out = subprocess.run([sys.executable, "-c", "import whitham_mi; print(whitham_mi.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"


def test_thread_cap(monkeypatch):
    monkeypatch.setenv("WHITHAM_MI_THREADS", "3")
    assert _backend.max_workers() == 3
    monkeypatch.setenv("WHITHAM_MI_THREADS", "junk")
    assert _backend.max_workers() == (os.cpu_count() or 1)


def test_library_results_identical_across_backends():
    code = ("import whitham_mi as w; m = w.DispersionModel.capillary(0.1);"
            "print(repr([r.z for r in w.critical_wavenumbers(m)]))")
    res = {}
    for backend in ("python", "auto"):
        env = dict(os.environ, WHITHAM_MI_BACKEND=backend)
        res[backend] = eval(subprocess.run([sys.executable, "-c", code], env=env,
                                           capture_output=True, text=True, check=True).stdout)
    np.testing.assert_allclose(res["python"], res["auto"], atol=1e-10)
    importlib.import_module("whitham_mi")

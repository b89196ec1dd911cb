import os
import subprocess
import sys
from pathlib import Path

import numpy as np

from helmscat import backend
from helmscat._kernels import grating_green_sum, jy_table

ROOT = Path(__file__).resolve().parents[1]


def _backend_in_subprocess(flag):
    env = dict(os.environ)
    env.pop("HELMSCAT_DISABLE_NUMBA", None)
    if flag is not None:
        env["HELMSCAT_DISABLE_NUMBA"] = flag
    r = subprocess.run([sys.executable, "-c", "import helmscat; print(helmscat.backend())"],
                       env=env, capture_output=True, text=True, check=True)
    return r.stdout.strip()


def test_flag_selects_numpy():
    assert _backend_in_subprocess("1") == "numpy"


def test_default_backend():
    assert _backend_in_subprocess(None) in ("numba", "numpy")
    assert backend() in ("numba", "numpy")


def test_backends_agree():
    x = np.linspace(0.01, 40.0, 500)
    for a, b in zip(jy_table(12, x, use_numba=True), jy_table(12, x, use_numba=False)):
        np.testing.assert_allclose(a, b, rtol=1e-12, atol=1e-15)
    j = np.arange(-20, 21)
    lam = 0.7 + 2.0 * j
    gap = 1.0 - lam**2
    mu = np.where(gap > 0, np.sqrt(np.abs(gap)) + 0j, 1j * np.sqrt(np.abs(gap)))
    px, py = np.array([0.3, 1.1]), np.array([0.2, -0.1])
    qx, qy = np.array([2.0, 0.4]), np.array([-0.8, -0.7])
    a = grating_green_sum(px, py, qx, qy, lam, mu, 1.2, np.pi, use_numba=True)
    b = grating_green_sum(px, py, qx, qy, lam, mu, 1.2, np.pi, use_numba=False)
    for u, v in zip(a if isinstance(a, tuple) else (a,), b if isinstance(b, tuple) else (b,)):
        np.testing.assert_allclose(u, v, rtol=1e-12, atol=1e-15)


def test_benchmark_smoke():
    sys.path.insert(0, str(ROOT / "benchmarks"))
    try:
        import bench_kernels
    finally:
        sys.path.pop(0)
    rows = bench_kernels.run(quick=True, runs=1)
    assert {r["kernel"] for r in rows} == {"jy_table n<=6", "green mode sum"}
    for r in rows:
        assert r["max_rel_diff"] < 1e-10
        assert r["numba_s"] > 0 and r["numpy_s"] > 0

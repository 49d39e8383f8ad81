"""Numpy and numba kernels must agree to tight tolerances."""

import numpy as np
import pytest

from evopool.functions import LunacekParams, _kernels_numba, _kernels_numpy

_EMPTY = np.empty(0)
_EMPTY2D = np.empty((0, 0))

CASES = [
    ("ackley", _kernels_numpy.FID_ACKLEY, _EMPTY),
    ("ackley-decoupled", _kernels_numpy.FID_ACKLEY_DECOUPLED, _EMPTY),
    ("rastrigin", _kernels_numpy.FID_RASTRIGIN, _EMPTY),
    ("schwefel", _kernels_numpy.FID_SCHWEFEL, _EMPTY),
    ("schafferf7", _kernels_numpy.FID_SCHAFFER_F7, _EMPTY),
    ("lunacek", _kernels_numpy.FID_LUNACEK, LunacekParams().as_array()),
]


@pytest.mark.parametrize("name,fid,fp", CASES, ids=[c[0] for c in CASES])
def test_value_and_gradient_agree(name, fid, fp):
    rng = np.random.default_rng(31)
    for dim in (2, 7, 50):
        for _ in range(20):
            x = rng.uniform(-30.0, 30.0, dim)
            g_np = np.empty(dim)
            g_nb = np.empty(dim)
            v_np = _kernels_numpy.value_and_grad(
                fid, x, fp, _EMPTY, _EMPTY, _EMPTY2D, g_np
            )
            v_nb = _kernels_numba.value_and_grad(
                fid, x, fp, _EMPTY, _EMPTY, _EMPTY2D, g_nb
            )
            assert v_nb == pytest.approx(v_np, rel=1e-12, abs=1e-12)
            np.testing.assert_allclose(g_nb, g_np, rtol=1e-12, atol=1e-12)


def test_schafferf6_agrees():
    rng = np.random.default_rng(32)
    fid = _kernels_numpy.FID_SCHAFFER_F6
    for _ in range(50):
        x = rng.uniform(-100.0, 100.0, 2)
        g_np = np.empty(2)
        g_nb = np.empty(2)
        v_np = _kernels_numpy.value_and_grad(
            fid, x, _EMPTY, _EMPTY, _EMPTY, _EMPTY2D, g_np
        )
        v_nb = _kernels_numba.value_and_grad(
            fid, x, _EMPTY, _EMPTY, _EMPTY, _EMPTY2D, g_nb
        )
        assert v_nb == pytest.approx(v_np, rel=1e-12, abs=1e-12)
        np.testing.assert_allclose(g_nb, g_np, rtol=1e-12, atol=1e-12)


def test_gaussmix_agrees():
    rng = np.random.default_rng(33)
    fid = _kernels_numpy.FID_GAUSSMIX
    m, n = 4, 25
    gw = rng.uniform(-10.0, -0.1, n)
    gz = rng.uniform(0.5, 5.0, n)
    gc = rng.uniform(0.0, 10.0, (n, m))
    for _ in range(50):
        x = rng.uniform(0.0, 10.0, m)
        g_np = np.empty(m)
        g_nb = np.empty(m)
        v_np = _kernels_numpy.value_and_grad(fid, x, _EMPTY, gw, gz, gc, g_np)
        v_nb = _kernels_numba.value_and_grad(fid, x, _EMPTY, gw, gz, gc, g_nb)
        assert v_nb == pytest.approx(v_np, rel=1e-12, abs=1e-12)
        np.testing.assert_allclose(g_nb, g_np, rtol=1e-12, atol=1e-12)


def test_backend_flag_selects_numpy(tmp_path):
    import subprocess
    import sys

    code = (
        "import evopool; "
        "print(evopool.USE_NUMBA, evopool.backend_name())"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"EVOPOOL_NO_NUMBA": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.split() == ["False", "numpy"]


def test_numpy_backend_runs_the_engine(tmp_path):
    import subprocess
    import sys

    code = (
        "from evopool import lookup_function\n"
        "from evopool.engine import PoolConfig, run\n"
        "spec = lookup_function('ackley', 2)\n"
        "cfg = PoolConfig(pool_size=30, max_steps=2000,"
        " termination_epsilon=1e-2)\n"
        "r = run(spec, 'germany', cfg, locopt=True, seed=3)\n"
        "print(r.success)\n"
    )
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"EVOPOOL_NO_NUMBA": "1", "PATH": "/usr/bin:/bin"},
        capture_output=True, text=True, check=True,
    )
    assert out.stdout.strip() == "True"

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import ortho2c
from ortho2c import _core_py

try:
    from ortho2c import _core
except ImportError:  # extension not built
    _core = None

needs_ext = pytest.mark.skipif(_core is None, reason="compiled extension not built")


def points(seed, count=25):
    rng = np.random.default_rng(seed)
    return rng.normal(size=count) + 1j * rng.normal(size=count)


def test_backend_name():
    assert ortho2c.BACKEND in ("cython", "python")
    if _core is not None and os.environ.get("ORTHO2C_PURE_PYTHON") != "1":
        assert ortho2c.BACKEND == "cython"


def test_python_monomial_table_layout():
    z = np.array([0.5 + 0.25j])
    table = _core_py.monomial_table(z, 2)
    zb = np.conj(z[0])
    assert np.allclose(table[0], [1, z[0], zb, z[0] ** 2, z[0] * zb, zb**2])


@needs_ext
@given(st.integers(0, 12), st.integers(0, 2**31))
def test_monomial_table_backends_agree(degree, seed):
    z = points(seed)
    a = _core.monomial_table(z, degree)
    b = _core_py.monomial_table(z, degree)
    assert a.shape == b.shape
    assert np.allclose(a, b, rtol=1e-13, atol=0)


@needs_ext
@given(st.integers(1, 30), st.integers(0, 2**31))
def test_eval_terms_backends_agree(nterms, seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 8, nterms)
    b = rng.integers(0, 8, nterms)
    c = rng.normal(size=nterms) + 1j * rng.normal(size=nterms)
    z = points(seed + 1)
    x = _core.eval_terms(a, b, c, z)
    y = _core_py.eval_terms(a, b, c, z)
    assert np.allclose(x, y, rtol=1e-12, atol=1e-12 * np.max(np.abs(y)))


@needs_ext
def test_empty_terms():
    z = points(0, 4)
    empty = np.zeros(0, dtype=np.int64)
    assert np.array_equal(_core.eval_terms(empty, empty, np.zeros(0, complex), z), np.zeros(4, complex))
    assert np.array_equal(_core_py.eval_terms(empty, empty, np.zeros(0, complex), z), np.zeros(4, complex))


def test_pure_python_fallback_selected():
    code = "import ortho2c, json; from ortho2c import WeightSpec, orthonormal_basis; orthonormal_basis(WeightSpec.hermite(), 3); print(ortho2c.BACKEND)"
    env = dict(os.environ, ORTHO2C_PURE_PYTHON="1")
    res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert res.returncode == 0, res.stderr
    assert res.stdout.strip() == "python"


def test_results_independent_of_backend():
    code = (
        "import numpy as np; from ortho2c import WeightSpec, orthonormal_basis;"
        "lv = orthonormal_basis(WeightSpec.deltoid('U'), 4)[4];"
        "print(repr(lv(np.array([0.1+0.2j, -0.3+0.05j])).tolist()))"
    )
    outs = []
    for flag in ("0", "1"):
        env = dict(os.environ, ORTHO2C_PURE_PYTHON=flag)
        res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
        assert res.returncode == 0, res.stderr
        outs.append(np.array(eval(res.stdout)))
    assert np.allclose(outs[0], outs[1], rtol=1e-12, atol=1e-13)

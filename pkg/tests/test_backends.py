"""The compiled kernel and the pure-Python fallback must agree bit for bit."""

import os
import subprocess
import sys

import numpy as np
import pytest

from tomofit import OptimizerAbort, StokesVector, seed_from_stokes
from tomofit import _backend, _simplex

compiled = pytest.mark.skipif(not _backend.COMPILED, reason="compiled kernel not built")


def _cases():
    rng = np.random.default_rng(5)
    for _ in range(40):
        s = rng.uniform(-1.3, 1.3, 3)
        yield _simplex.STOKES_LSQ, (*s, 0.0), seed_from_stokes(StokesVector(*s)).t.as_tuple()
        yield _simplex.STOKES_LSQ, (*s, 0.0), (1.0, 1.0, 1.0, 1.0)
    for _ in range(20):
        n = rng.uniform(10, 1e5)
        nh, nd, nr = rng.uniform(0, 1.1 * n, 3)
        yield _simplex.COUNT_LIKELIHOOD, (n, nh, nd, nr), tuple(rng.uniform(-2, 2, 4))


@compiled
@pytest.mark.parametrize("max_iter, restarts", [(2000, 1), (7, 0), (2000, 3)])
def test_compiled_matches_python(max_iter, restarts):
    for kind, data, x0 in _cases():
        a = _backend.compiled_nelder_mead(kind, data, x0, max_iter, 1e-12, 1e-10, restarts)
        b = _backend.pure_nelder_mead(kind, data, x0, max_iter, 1e-12, 1e-10, restarts)
        assert a == b


@compiled
def test_compiled_abort_is_optimizer_abort():
    with pytest.raises(OptimizerAbort):
        _backend.compiled_nelder_mead(0, (0, 0, 0, 0), (0.0, 0.0, 0.0, 0.0), 10, 1e-12, 1e-10, 0)
    with pytest.raises(OptimizerAbort):
        _backend.pure_nelder_mead(0, (0, 0, 0, 0), (0.0, 0.0, 0.0, 0.0), 10, 1e-12, 1e-10, 0)


@compiled
def test_unknown_kind_rejected():
    with pytest.raises(KeyError):
        _backend.compiled_nelder_mead(9, (0, 0, 0, 0), (1.0, 1.0, 1.0, 1.0), 10, 1e-12, 1e-10, 0)


def test_env_forces_pure_python():
    code = "import tomofit; print(tomofit.BACKEND)"
    env = dict(os.environ, TOMOFIT_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"

import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qqw import _kernels as K

needs_numba = pytest.mark.skipif(K.matmul_mod_numba is None, reason="numba not installed")
primes = st.sampled_from([2, 3, 7, 13, 101, 65521, 2**31 - 1])


def _arrays(draw, p, n, m):
    return np.array(draw(st.lists(st.integers(0, p - 1), min_size=n * m, max_size=n * m)),
                    dtype=np.int64).reshape(n, m)


@needs_numba
@settings(max_examples=50, deadline=None)
@given(st.data(), primes, st.integers(0, 6), st.integers(0, 6), st.integers(0, 6))
def test_matmul_backends_agree(data, p, n, k, m):
    a = _arrays(data.draw, p, n, k)
    b = _arrays(data.draw, p, k, m)
    want = np.array([[sum(int(a[i, t]) * int(b[t, j]) for t in range(k)) % p for j in range(m)]
                     for i in range(n)], dtype=np.int64).reshape(n, m)
    assert np.array_equal(K.matmul_mod_numpy(a, b, p), want)
    assert np.array_equal(K.matmul_mod_numba(a, b, np.int64(p), np.int64(K._chunk(p))), want)


@needs_numba
@settings(max_examples=50, deadline=None)
@given(st.data(), primes, st.integers(1, 6), st.integers(1, 6))
def test_rref_backends_agree(data, p, n, m):
    a = _arrays(data.draw, p, n, m)
    r1, p1 = K.rref_mod_numpy(a, p)
    r2, p2 = K.rref_mod_numba(a, np.int64(p))
    assert np.array_equal(r1, r2)
    assert list(p1) == list(p2)


def test_env_switch_selects_numpy():
    env = dict(os.environ, QQW_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from qqw import _kernels; print(_kernels.backend_name())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"

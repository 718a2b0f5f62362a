import os
import subprocess
import sys

import numpy as np
from hypothesis import given, settings, strategies as st

from pfaffrig import kernels
from pfaffrig._accel import HAVE_NUMBA

P = 10007


@settings(max_examples=30)
@given(st.integers(1, 12), st.integers(1, 12), st.integers(0, 2 ** 31))
def test_rref_backends_agree(n, m, seed):
    rng = np.random.default_rng(seed)
    mat = rng.integers(0, P, size=(n, m), dtype=np.int64)
    if rng.random() < 0.5 and n > 1:
        mat[-1] = (mat[0] * 3) % P
    a, pa = kernels.rref_mod_p_numpy(mat, P)
    b, pb = kernels.rref_mod_p_numba(mat, P)
    assert pa == pb
    assert np.array_equal(a, b)


def test_rank_of_dependent_rows():
    mat = np.array([[1, 2, 3], [2, 4, 6], [0, 1, 1]], dtype=np.int64)
    assert kernels.rank_mod_p(mat, P) == 2


@settings(max_examples=30)
@given(st.integers(0, 2 ** 31))
def test_eval_backends_agree(seed):
    rng = np.random.default_rng(seed)
    exps = rng.integers(0, 7, size=(15, 4), dtype=np.int64)
    pts = rng.integers(0, P, size=(9, 4), dtype=np.int64)
    a = kernels.eval_monomials_numpy(exps, pts, P)
    b = kernels.eval_monomials_numba(exps, pts, P)
    assert np.array_equal(a, b)
    i, j = 3, 5
    want = 1
    for v in range(4):
        want = want * pow(int(pts[i, v]), int(exps[j, v]), P) % P
    assert a[i, j] == want


def test_env_flag_disables_numba():
    code = "from pfaffrig import _accel; print(_accel.USE_NUMBA)"
    env = dict(os.environ, PFAFFRIG_NO_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    env.pop("PFAFFRIG_NO_NUMBA")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == str(HAVE_NUMBA)

"""The numba and numpy kernels must agree, and both must match the oracles."""
import random
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

import oracles
from finmetric import _accel, kernels
from finmetric.metric import encode


def _ints(rng, n, lo=1, hi=6):
    d = oracles.rand_symmetric_metric(rng, n) if rng.random() < 0.5 else oracles.rand_metric(rng, n, hi, 1)
    return np.array([[int(v) for v in row] for row in d], dtype=np.int64), d


def _rows(arr):
    return sorted(tuple(int(v) for v in r) for r in arr)


@pytest.fixture(params=range(12))
def rng(request):
    return random.Random(1000 + request.param)


def test_closure_paths_agree(rng):
    n = rng.randint(1, 8)
    c = np.array([[0 if i == j else rng.randint(0, 20) for j in range(n)] for i in range(n)], dtype=np.int64)
    c = np.minimum(c, c.T)
    a = kernels._minplus_closure_nb(c)
    b = kernels._minplus_closure_np(c)
    assert np.array_equal(a, b)
    assert a.tolist() == [[int(v) for v in r] for r in oracles.chain_closure([[Fraction(int(v)) for v in r] for r in c])] \
        if n <= 6 else True


def test_embeddings_paths_agree(rng):
    da, fa = _ints(rng, rng.randint(1, 4))
    db, fb = _ints(rng, rng.randint(1, 6))
    order = np.arange(da.shape[0], dtype=np.int64)
    cand = np.ones((da.shape[0], db.shape[0]), dtype=np.bool_)
    if da.shape[0] > db.shape[0]:
        return
    a = kernels._embeddings_nb(da, db, order, cand, 0)
    b = kernels._embeddings_np(da, db, order, cand, 0)
    assert _rows(a) == _rows(b) == sorted(oracles.brute_embeddings(fa, fb))


def test_surjections_paths_agree(rng):
    ds, fs = _ints(rng, rng.randint(1, 6))
    dt, ft = _ints(rng, rng.randint(1, 3))
    order = np.arange(ds.shape[0], dtype=np.int64)
    a = kernels._surjections_nb(ds, dt, order, 0)
    b = kernels._surjections_np(ds, dt, order, 0)
    assert _rows(a) == _rows(b) == sorted(oracles.brute_surjections(fs, ft))


def test_distortion_paths_agree(rng):
    dx, fx = _ints(rng, rng.randint(1, 3))
    dy, fy = _ints(rng, rng.randint(1, 3))
    order = np.arange(dx.shape[0], dtype=np.int64)
    start = int(max(dx.max(), dy.max())) + 1
    a, *_ = kernels._min_distortion_nb(dx, dy, order, np.int64(0), np.int64(start))
    b, *_ = kernels._min_distortion_np(dx, dy, order, 0, start)
    assert int(a) == int(b) == oracles.brute_gh(fx, fy) * 2


def test_limit_stops_early():
    d = np.array([[0, 1, 1], [1, 0, 1], [1, 1, 0]], dtype=np.int64)
    assert len(kernels.embeddings(d, d)) == 6
    assert len(kernels.embeddings(d, d, limit=1)) == 1


def test_object_arrays_use_numpy_path():
    huge = Fraction(2**70)
    den, (arr,) = encode(((Fraction(0), huge), (huge, Fraction(0))))
    assert arr.dtype == object
    assert not kernels._numba_ok(arr)
    out = kernels.minplus_closure(arr)
    assert int(out[0, 1]) == 2**70


def test_env_flag_selects_numpy_path():
    code = "from finmetric import _accel; print(_accel.USE_NUMBA)"
    out = subprocess.run([sys.executable, "-c", code], env={"FINMETRIC_NO_NUMBA": "1", "PATH": ""},
                         capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
    assert _accel.numba_installed

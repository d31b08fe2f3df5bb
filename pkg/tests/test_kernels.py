"""The compiled kernels must agree bitwise with the pure-Python reference."""
import math
import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from thetametric import _pykernels as pyk
from thetametric._backend import BACKEND

ck = pytest.importorskip("thetametric._ckernels")

KINDS = [
    (pyk.K_SUM, 1.0),
    (pyk.K_SUM, 0.25),
    (pyk.K_SUM_PROD, 0.5),
    (pyk.PROD_OVER_ONE_PLUS_PROD, 1.0),
    (pyk.ROOT_SUM_POWER, 2.0),
    (pyk.ROOT_SUM_POWER, 3.0),
    (pyk.ROOT_SUM_POWER, 5.0),
    (pyk.SUM_PLUS_PROD, 1.0),
    (pyk.SUM_PLUS_SQRT_PROD, 1.0),
    (pyk.SUM_TIMES_ONE_PLUS_PROD, 1.0),
]

nonneg = st.floats(min_value=0.0, max_value=1e6, allow_nan=False)
signed = st.floats(min_value=-1e3, max_value=1e3, allow_nan=False)


def same(x, y):
    return (math.isnan(x) and math.isnan(y)) or x == y


@pytest.mark.parametrize("kind,p", KINDS)
@settings(max_examples=200, deadline=None)
@given(s=nonneg, t=nonneg)
def test_theta_parity(kind, p, s, t):
    assert same(ck.theta(kind, p, s, t), pyk.theta(kind, p, s, t))


@settings(max_examples=200, deadline=None)
@given(s=signed, t=signed)
def test_signed_odd_root_parity(s, t):
    for p in (1.0, 3.0, 5.0):
        assert same(ck.theta(pyk.ROOT_SUM_POWER, p, s, t), pyk.theta(pyk.ROOT_SUM_POWER, p, s, t))


@pytest.mark.parametrize("kind,p", KINDS)
def test_bisect_parity(kind, p):
    rng = np.random.default_rng(3)
    for _ in range(300):
        s = float(rng.uniform(0, 50))
        t = float(rng.uniform(0, 50))
        r = pyk.theta(kind, p, t, s)
        hi = 2.0 * t + 1.0
        assert ck.bisect_kind(kind, p, r, s, 0.0, hi, 200) == pyk.bisect_kind(kind, p, r, s, 0.0, hi, 200)


def test_a3_scan_parity():
    rng = np.random.default_rng(11)
    x = rng.uniform(0, 10, (25, 2))
    d = np.sqrt(((x[:, None, :] - x[None, :, :]) ** 2).sum(-1))
    d[3, 7] = d[7, 3] = 40.0
    for kind, p in KINDS:
        assert ck.a3_scan(d, kind, p, 1e-9) == pyk.a3_scan(d.tolist(), kind, p, 1e-9)


def test_scan_reports_every_ordered_triple():
    d = [[0.0, 2.0, 6.0], [2.0, 0.0, 10.0], [6.0, 10.0, 0.0]]
    assert pyk.a3_scan(d, pyk.K_SUM, 1.0, 0.0) == [(1, 2, 0, 10.0, 8.0), (2, 1, 0, 10.0, 8.0)]


def test_forced_python_backend_selects_fallback():
    env = dict(os.environ, THETAMETRIC_BACKEND="python")
    code = (
        "import thetametric as tm;"
        "a = tm.make_action('sum_plus_prod');"
        "print(tm.BACKEND, tm.eta(a, 20.0, 6.0), tm.uniformity_base_index(a, 2))"
    )
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["python", "2.0", "5"]


@pytest.mark.skipif(os.environ.get("THETAMETRIC_BACKEND", "").lower() == "python", reason="fallback forced")
def test_default_backend_is_compiled():
    assert BACKEND == "cython"

"""Compiled vs pure-python kernel equivalence."""

import numpy as np
import pytest

from vsumpipe import _pykernels

try:
    from vsumpipe import _ckernels
except ImportError:
    _ckernels = None

needs_compiled = pytest.mark.skipif(_ckernels is None, reason="compiled kernels not built")


def random_gram(t, seed):
    x = np.random.default_rng(seed).standard_normal((t, 4))
    return x @ x.T


@needs_compiled
class TestBackendEquivalence:
    @pytest.mark.parametrize("t", [1, 2, 7, 40])
    def test_scatter(self, t):
        k = random_gram(t, t)
        a = _pykernels.kts_scatter(k)
        b = _ckernels.kts_scatter(k)
        assert np.allclose(a, b, rtol=1e-9, atol=1e-9)

    @pytest.mark.parametrize("t,band", [(12, 0), (12, 4), (40, 0), (40, 7)])
    def test_dp_tables(self, t, band):
        s = _pykernels.kts_scatter(random_gram(t, t + band))
        cost_p, prev_p = _pykernels.kts_dp(s, t, band)
        cost_c, prev_c = _ckernels.kts_dp(s, t, band)
        finite = np.isfinite(cost_p)
        assert np.array_equal(finite, np.isfinite(cost_c))
        assert np.allclose(cost_p[finite], cost_c[finite], rtol=1e-10)
        assert np.array_equal(prev_p, prev_c)

    @pytest.mark.parametrize("seed", range(5))
    def test_knapsack_tables_bitwise(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 30))
        values = rng.random(n)
        weights = rng.integers(1, 12, n)
        cap = int(rng.integers(0, 60))
        a = _pykernels.knapsack_table(values, weights, cap)
        b = _ckernels.knapsack_table(values, weights, cap)
        assert np.array_equal(a, b)


def test_pure_env_override(monkeypatch):
    import importlib

    import vsumpipe.kernels as kernels

    monkeypatch.setenv("VSUMPIPE_PURE", "1")
    mod = importlib.reload(kernels)
    assert mod.BACKEND == "pure"
    monkeypatch.delenv("VSUMPIPE_PURE")
    importlib.reload(kernels)

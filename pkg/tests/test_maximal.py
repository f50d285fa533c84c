import numpy as np
import pytest

from multidyadic.grid import DyadicInterval, StepFunction, Window, haar_function
from multidyadic.harness.generators import gen_step_function
from multidyadic.maximal import (maximal, maximal_delta, mean_oscillation_maximal,
                                 multilinear_maximal, multilinear_maximal_r, sharp_maximal,
                                 sharp_maximal_delta)

import oracles

I01 = DyadicInterval(0, 0)


def ind(window, left, right):
    x = window.left_endpoints()
    return StepFunction(window, ((x >= left) & (x < right)).astype(float))


def shells(window, f):
    """Values of ``f`` on [-4,0), [0,1), [1,2), [2,4) for the K=2 window."""
    x = window.left_endpoints()
    v = f.values
    return [np.unique(v[(x >= a) & (x < b)]).tolist()
            for a, b in ((-4, 0), (0, 1), (1, 2), (2, 4))]


class TestMaximal:
    def test_indicator_table(self):
        w = Window(2, 3, 0)
        assert shells(w, maximal(ind(w, 0, 1))) == [[0.0], [1.0], [0.5], [0.25]]

    def test_constant(self):
        w = Window(1, 2, 0)
        assert np.all(maximal(StepFunction.constant(w, 3.0)).values == 3.0)

    def test_matches_oracle_with_ancestors(self):
        w = Window(0, 2, 3)
        f = gen_step_function(3, w)
        want = oracles.maximal_over(w, lambda I: oracles.avg(f, I, np.abs(f.values)))
        assert np.allclose(maximal(f).values, want, atol=1e-14)
        assert np.all(maximal(f).values >= np.abs(f.values) - 1e-15)

    def test_delta_variants(self):
        w = Window(1, 3, 2)
        f = gen_step_function(4, w)
        assert np.allclose(maximal_delta(f, 1.0).values, maximal(f).values, rtol=1e-14)
        lo, hi = maximal_delta(f, 0.3).values, maximal_delta(f, 0.7).values
        assert np.all(lo <= hi * (1 + 1e-12))
        g = ind(w, 0, 1)
        assert np.allclose(maximal_delta(g, 0.5).values, maximal(g).values ** 2, rtol=1e-14)
        with pytest.raises(ValueError):
            maximal_delta(f, 0.0)


class TestSharpMaximal:
    def test_constant_without_ancestors(self):
        w = Window(1, 2, 0)
        assert not sharp_maximal(StepFunction.constant(w, 2.0)).values.any()

    def test_haar_example(self):
        w = Window(0, 3, 0)
        x = w.left_endpoints()
        v = sharp_maximal(haar_function(I01, w)).values
        assert np.allclose(v[(x >= 0) & (x < 1)], 1.0)

    def test_matches_c_search_oracle(self):
        w = Window(0, 2, 2)
        for seed in range(4):
            f = gen_step_function(seed, w, ("haar_series", "two_level")[seed % 2])
            want = oracles.maximal_over(w, lambda I: oracles.best_constant(f.values, w, I))
            assert np.allclose(sharp_maximal(f).values, want, atol=1e-14)

    def test_comparable_to_mean_oscillation(self):
        w = Window(1, 3, 2)
        f = gen_step_function(8, w)
        s, o = sharp_maximal(f).values, mean_oscillation_maximal(f).values
        assert np.all(s <= o + 1e-14) and np.all(o <= 2 * s + 1e-14)

    def test_delta_on_indicator(self):
        w = Window(1, 2, 2)
        g = ind(w, 0, 1)
        assert np.allclose(sharp_maximal_delta(g, 0.5).values, sharp_maximal(g).values ** 2,
                           rtol=1e-14)
        h = haar_function(I01, Window(0, 3, 0))
        want = oracles.maximal_over(h.window,
                                    lambda I: oracles.best_constant(np.abs(h.values) ** 0.5,
                                                                    h.window, I)) ** 2
        assert np.allclose(sharp_maximal_delta(h, 0.5).values, want, atol=1e-14)
        with pytest.raises(ValueError):
            sharp_maximal_delta(g, 1.0)


class TestMultilinear:
    def test_single_slot(self):
        w = Window(1, 2, 2)
        f = gen_step_function(2, w)
        assert np.array_equal(multilinear_maximal([f]).values, maximal(f).values)

    def test_indicator_examples(self):
        w = Window(2, 3, 0)
        f = ind(w, 0, 1)
        assert shells(w, multilinear_maximal([f, f]))[2] == [0.25]
        assert shells(w, multilinear_maximal_r([f, f], 2.0))[2] == [pytest.approx(0.5, abs=1e-15)]

    def test_bounds(self):
        w = Window(1, 3, 2)
        fs = [gen_step_function(s, w) for s in (1, 2)]
        M = multilinear_maximal(fs).values
        assert np.all(M <= maximal(fs[0]).values * maximal(fs[1]).values + 1e-14)
        assert np.array_equal(multilinear_maximal_r(fs, 1.0).values, M)
        assert np.all(M <= multilinear_maximal_r(fs, 1.5).values * (1 + 1e-12))

    def test_matches_oracle(self):
        w = Window(0, 2, 2)
        fs = [gen_step_function(s, w) for s in (5, 6)]
        want = oracles.maximal_over(
            w, lambda I: np.prod([oracles.avg(f, I, np.abs(f.values) ** 1.5) ** (1 / 1.5)
                                  for f in fs]))
        assert np.allclose(multilinear_maximal_r(fs, 1.5).values, want, atol=1e-14)
        with pytest.raises(ValueError):
            multilinear_maximal_r(fs, 0.0)

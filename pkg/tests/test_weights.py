import math

import numpy as np
import pytest

from multidyadic.grid import DyadicInterval, StepFunction, Window, haar_function
from multidyadic.harness.generators import gen_ap_weight, gen_step_function
from multidyadic.weights import (ExponentVector, Weight, WeightVector, a1_characteristic,
                                 ainf_estimate, ap_characteristic, bmo2_haar, bmo_norm,
                                 bmo_r_norm, multilinear_ap_characteristic, nu_weight,
                                 truncate_bmo, weight_measure)

import oracles

I01 = DyadicInterval(0, 0)
W2 = Window(2, 3, 0)


def two_valued(window=W2):
    x = window.left_endpoints()
    return Weight(window, np.where((x >= 0) & (x < 0.5), 2.0, 1.0))


def cells(window, left, right):
    x = window.left_endpoints()
    return (x >= left) & (x < right)


class TestWeight:
    def test_rejects_nonpositive(self):
        with pytest.raises(ValueError, match="positive"):
            Weight(Window(0, 1), [1.0, 0.0, 1.0, 1.0])

    def test_measure(self):
        w = Window(0, 3)
        assert weight_measure(Weight(w, np.ones(16)), cells(w, 0, 1)) == 1.0
        assert weight_measure(Weight(w, np.full(16, 2.0)), cells(w, 0, 0.5)) == 1.0
        assert weight_measure(two_valued(w), cells(w, 0, 1)) == 1.5

    def test_exponents(self):
        e = ExponentVector((2, 4))
        assert e.p == pytest.approx(4 / 3)
        assert e.conjugate(0) == 2 and ExponentVector((1, 2)).conjugate(0) == math.inf
        with pytest.raises(ValueError):
            ExponentVector((0.5,))


class TestAp:
    def test_fixture(self):
        value, where = ap_characteristic(two_valued(), 2.0, with_interval=True)
        assert value == pytest.approx(1.125, abs=1e-12)
        assert where == I01
        assert oracles.ap(two_valued(), 2.0) == pytest.approx(1.125, abs=1e-12)

    def test_unit_and_constant(self):
        for p in (1.25, 2, 8):
            assert ap_characteristic(Weight(W2, np.ones(W2.n_cells)), p) == 1.0
            assert ap_characteristic(Weight(W2, np.full(W2.n_cells, 3.0)), p) == pytest.approx(1.0)
        with pytest.raises(ValueError):
            ap_characteristic(two_valued(), 1.0)

    @pytest.mark.parametrize("p", [1.25, 1.5, 3.0])
    def test_matches_oracle(self, p):
        w = Window(1, 2, 0)
        g = gen_step_function(3, w).values
        wt = Weight(w, np.exp(g))
        assert ap_characteristic(wt, p) == pytest.approx(oracles.ap(wt, p), rel=1e-12)

    def test_monotone_and_a1(self):
        w = Window(1, 3, 0)
        wt = Weight(w, np.exp(1.5 * gen_step_function(9, w).values))
        chars = [ap_characteristic(wt, p) for p in (1.25, 1.5, 2, 4, 8)]
        assert all(b <= a * (1 + 1e-12) for a, b in zip(chars, chars[1:]))
        assert chars[0] <= a1_characteristic(wt) * (1 + 1e-12)

    def test_a1_fixture(self):
        assert a1_characteristic(two_valued()) == pytest.approx(1.5)
        assert a1_characteristic(Weight(W2, np.full(W2.n_cells, 5.0))) == 1.0

    def test_ainf(self):
        one = Weight(W2, np.ones(W2.n_cells))
        assert ainf_estimate(one)[0] == 1.0
        w = two_valued()
        grid = (1.5, 2.0, 4.0, 8.0)
        value, p = ainf_estimate(w, grid)
        assert value == pytest.approx(min(oracles.ap(w, q) for q in grid), rel=1e-12)
        assert ainf_estimate(w)[0] <= value
        with pytest.raises(ValueError):
            ainf_estimate(w, ())


class TestMultilinearAp:
    def test_unit(self):
        one = Weight(W2, np.ones(W2.n_cells))
        wv = WeightVector((one, one), ExponentVector((2, 2)))
        assert multilinear_ap_characteristic(wv) == 1.0
        assert np.all(nu_weight(wv).values == 1.0)

    def test_single_slot(self):
        w = two_valued()
        wv = WeightVector((w,), ExponentVector((3.0,)))
        assert multilinear_ap_characteristic(wv) == pytest.approx(ap_characteristic(w, 3.0) ** (1 / 3))

    def test_two_slots_oracle(self):
        w1 = two_valued()
        one = Weight(W2, np.ones(W2.n_cells))
        wv = WeightVector((w1, one), ExponentVector((2, 2)))
        # p = 1, p' = 2: <nu>_I * <w1**-1>_I**(1/2) * <1>_I**(1/2)
        nu = StepFunction(W2, np.sqrt(w1.values))
        want = max(oracles.avg(nu, I) * math.sqrt(oracles.avg(w1, I, 1 / w1.values))
                   for I in oracles.enumerate_intervals(W2))
        got = multilinear_ap_characteristic(wv)
        assert got == pytest.approx(want, rel=1e-12) and got >= 1

    def test_nu(self):
        w1 = Weight(W2, np.full(W2.n_cells, 4.0))
        one = Weight(W2, np.ones(W2.n_cells))
        assert np.allclose(nu_weight(WeightVector((w1, one), ExponentVector((2, 2)))).values, 2.0)


class TestBMO:
    def test_examples(self):
        w = Window(1, 3, 0)
        value, where = bmo_norm(haar_function(I01, w) * 1.0, with_interval=True)
        assert value == pytest.approx(1.0) and where == I01
        x = w.left_endpoints()
        half = StepFunction(w, ((x >= 0) & (x < 0.5)).astype(float))
        assert bmo_norm(half) == pytest.approx(oracles.bmo_r(half, 1))
        assert bmo_norm(half) >= 0.5
        assert bmo_norm(StepFunction.constant(w, 2.0)) == 0.0
        assert bmo2_haar(StepFunction.constant(w, 2.0)) == 0.0
        assert bmo2_haar(haar_function(I01, w)) == pytest.approx(1.0)

    @pytest.mark.parametrize("r", [1.0, 1.5, 2.0])
    def test_matches_oracle(self, r):
        w = Window(0, 2, 3)
        b = gen_step_function(4, w)
        assert bmo_r_norm(b, r) == pytest.approx(oracles.bmo_r(b, r), rel=1e-12)

    def test_bmo2_identity(self):
        w = Window(0, 2, 3)
        for seed in range(5):
            b = gen_step_function(seed, w, ("haar_series", "two_level")[seed % 2])
            assert bmo2_haar(b) == pytest.approx(oracles.bmo2(b), rel=1e-12)
            assert abs(bmo2_haar(b) - bmo_r_norm(b, 2.0)) <= 1e-10

    def test_truncate(self):
        w = Window(0, 3, 0)
        h = haar_function(I01, w)
        assert np.array_equal(truncate_bmo(h, 5.0).values, h.values)
        assert np.array_equal(truncate_bmo(h * 3.0, 1.0).values, h.values)
        b = gen_step_function(2, Window(1, 3, 4))
        for j in (0.05, 0.3, 1.0):
            assert bmo_norm(truncate_bmo(b, j)) <= 2.25 * bmo_norm(b)
        with pytest.raises(ValueError):
            truncate_bmo(b, 0.0)


class TestGenAPWeight:
    def test_budget_respected(self):
        w = Window(1, 4, 0)
        for seed in range(5):
            wt, char = gen_ap_weight(seed, w, 2.0, 2.0)
            assert char == ap_characteristic(wt, 2.0) and char <= 2.0

    def test_budget_one_gives_constant(self):
        wt, char = gen_ap_weight(1, Window(1, 4, 0), 2.0, 1.0)
        assert char == 1.0 and np.all(wt.values == wt.values[0])

    def test_infeasible(self):
        with pytest.raises(ValueError, match="budget infeasible"):
            gen_ap_weight(1, Window(1, 4, 0), 2.0, 0.5)

import numpy as np
import pytest

from multidyadic.grid import DyadicInterval, StepFunction, Window, haar_function
from multidyadic.harness.generators import gen_step_function, gen_symbol
from multidyadic.operators import (MultiIndex, SymbolSequence, commutator, haar_multiplier,
                                   multiply_slot, paraproduct, pi_b, slot_value)

import oracles

I01 = DyadicInterval(0, 0)
W = Window(0, 3, 2)


def ind(window, left, right):
    x = window.left_endpoints()
    return StepFunction(window, ((x >= left) & (x < right)).astype(float))


def rand(seed, window=W, profile="haar_series"):
    return gen_step_function(seed, window, profile)


class TestMultiIndex:
    def test_parse_and_counts(self):
        a = MultiIndex.parse("0101")
        assert (a.m, a.sigma, a.in_U(), str(a)) == (4, 2, True, "0101")
        assert not MultiIndex.parse("11").in_U()
        assert a.prepend_zero() == MultiIndex.parse("00101")

    @pytest.mark.parametrize("text", ["", "012", "a1"])
    def test_parse_rejects(self, text):
        with pytest.raises(ValueError):
            MultiIndex.parse(text)


class TestSlotValue:
    def test_examples(self):
        f = ind(W, 0, 0.5)
        assert slot_value(f, I01, 0) == -0.5
        assert slot_value(f, I01, 1) == 0.5
        assert slot_value(haar_function(I01, W), I01, 1) == 0.0
        with pytest.raises(ValueError):
            slot_value(f, I01, 2)


class TestParaproduct:
    def test_single_interval_example(self):
        h = haar_function(I01, W)
        out = paraproduct(MultiIndex.parse("01"), [h, ind(W, 0, 1)])
        assert np.allclose(out.values, h.values, atol=1e-14)

    def test_permutation(self):
        f, g = rand(1), rand(2)
        a = paraproduct(MultiIndex.parse("10"), [g, f]).values
        b = paraproduct(MultiIndex.parse("01"), [f, g]).values
        assert np.allclose(a, b, atol=1e-14)

    def test_zero_slot(self):
        out = paraproduct(MultiIndex.parse("010"), [rand(1), StepFunction.zeros(W), rand(3)])
        assert not out.values.any()

    def test_rejects_all_ones(self):
        with pytest.raises(ValueError, match="U_m"):
            paraproduct(MultiIndex.parse("11"), [rand(1), rand(2)])

    def test_rejects_wrong_arity(self):
        with pytest.raises(ValueError):
            paraproduct(MultiIndex.parse("01"), [rand(1)])

    @pytest.mark.parametrize("bits", ["0", "01", "00", "10", "001", "010", "000"])
    def test_matches_direct_sum(self, bits):
        w = Window(0, 2, 2)
        alpha = MultiIndex.parse(bits)
        fs = [rand(10 + j, w, ("haar_series", "two_level")[j % 2]) for j in range(alpha.m)]
        want = oracles.dyadic_sum(fs, alpha.bits, alpha.sigma)
        assert np.allclose(paraproduct(alpha, fs).values, want, atol=1e-12)

    def test_multilinear(self):
        alpha = MultiIndex.parse("01")
        f, g, h = rand(1), rand(2), rand(3)
        lhs = paraproduct(alpha, [f * 2.0 + h, g]).values
        rhs = 2 * paraproduct(alpha, [f, g]).values + paraproduct(alpha, [h, g]).values
        assert np.allclose(lhs, rhs, atol=1e-12)


class TestPiB:
    def test_classical_example(self):
        h = haar_function(I01, W)
        out = pi_b(h, MultiIndex.parse("1"), [ind(W, 0, 1)])
        assert np.allclose(out.values, h.values, atol=1e-14)

    def test_constant_symbol(self):
        # constant on the window means a jump at its edge, seen only by ancestors
        w = Window(0, 3, 0)
        out = pi_b(StepFunction.constant(w, 3.0), MultiIndex.parse("01"), [rand(1, w), rand(2, w)])
        assert np.allclose(out.values, 0, atol=1e-13)
        with_ancestors = pi_b(StepFunction.constant(W, 3.0), MultiIndex.parse("01"), [rand(1), rand(2)])
        assert np.abs(with_ancestors.values).max() > 0

    @pytest.mark.parametrize("bits", ["1", "0", "11", "01", "10", "00"])
    def test_agrees_with_paraproduct(self, bits):
        alpha = MultiIndex.parse(bits)
        b = rand(7)
        fs = [rand(20 + j) for j in range(alpha.m)]
        a = pi_b(b, alpha, fs).values
        p = paraproduct(alpha.prepend_zero(), [b, *fs]).values
        assert np.max(np.abs(a - p)) <= 1e-12

    def test_matches_direct_sum(self):
        w = Window(1, 2, 1)
        alpha = MultiIndex.parse("11")
        b, f, g = rand(1, w), rand(2, w), rand(3, w)
        want = oracles.dyadic_sum([f, g], alpha.bits, 1 + alpha.sigma, b=b)
        assert np.allclose(pi_b(b, alpha, [f, g]).values, want, atol=1e-12)


class TestHaarMultiplier:
    def test_reproduces_basis_element(self):
        h = haar_function(I01, W)
        out = haar_multiplier(SymbolSequence({}, 1.0), MultiIndex.parse("0"), [h])
        assert np.allclose(out.values, h.values, atol=1e-14)

    def test_zero_symbol(self):
        out = haar_multiplier(SymbolSequence({}, 0.0), MultiIndex.parse("01"), [rand(1), rand(2)])
        assert not out.values.any()

    def test_unimodular_preserves_energy(self):
        w = Window(0, 4, 0)
        f = rand(4, w)
        eps = gen_symbol(3, w, "random_signs")
        out = haar_multiplier(eps, MultiIndex.parse("0"), [f])
        proj = haar_multiplier(SymbolSequence({}, 1.0), MultiIndex.parse("0"), [f])
        assert np.sum(out.values ** 2) == pytest.approx(np.sum(proj.values ** 2), rel=1e-12)

    @pytest.mark.parametrize("bits", ["0", "01", "100"])
    def test_matches_direct_sum(self, bits):
        w = Window(0, 2, 2)
        alpha = MultiIndex.parse(bits)
        eps = gen_symbol(5, w, "random_bounded")
        fs = [rand(30 + j, w) for j in range(alpha.m)]
        want = oracles.dyadic_sum(fs, alpha.bits, alpha.sigma, eps=eps)
        assert np.allclose(haar_multiplier(eps, alpha, fs).values, want, atol=1e-12)

    def test_symbol_lookup(self):
        eps = SymbolSequence({I01: -2.0}, 0.5)
        assert (eps[I01], eps[DyadicInterval(1, 0)], eps.sup_norm) == (-2.0, 0.5, 2.0)


class TestCommutator:
    def test_multiply_slot(self):
        f, g = rand(1), rand(2)
        assert multiply_slot(StepFunction.constant(W, 1.0), 2, [f, g])[1].values.tolist() == g.values.tolist()
        assert not multiply_slot(StepFunction.zeros(W), 1, [f, g])[0].values.any()
        half = ind(W, 0, 0.5)
        assert multiply_slot(half, 1, [half])[0].values.tolist() == half.values.tolist()
        with pytest.raises(ValueError):
            multiply_slot(f, 3, [f, g])

    def test_constant_b(self):
        eps = gen_symbol(1, W)
        out = commutator(StepFunction.constant(W, 2.0), eps, MultiIndex.parse("01"), 1,
                         [rand(1), rand(2)])
        assert np.allclose(out.values, 0, atol=1e-12)

    def test_two_ways(self):
        b = ind(W, 0, 0.5)
        one = SymbolSequence({}, 1.0)
        alpha = MultiIndex.parse("0")
        out = commutator(b, one, alpha, 1, [b])
        direct = b.values * oracles.dyadic_sum([b], (0,), 1) - oracles.dyadic_sum([b * b], (0,), 1)
        assert np.allclose(out.values, direct, atol=1e-13)

    def test_zero_slot(self):
        out = commutator(rand(1), gen_symbol(1, W), MultiIndex.parse("01"), 2,
                         [rand(2), StepFunction.zeros(W)])
        assert not out.values.any()


def test_corrupt_is_nonlocal():
    alpha = MultiIndex.parse("01")
    f, g = rand(1), rand(2)
    clean = paraproduct(alpha, [f, g]).values
    bad = paraproduct(alpha, [f, g], corrupt=True).values
    assert np.max(np.abs(clean - bad)) > 1e-3

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from multidyadic.grid import StepFunction, Window, analyze, reconstruct
from multidyadic.maximal import maximal, multilinear_maximal, sharp_maximal
from multidyadic.norms import lp_norm, weak_lp_norm
from multidyadic.operators import MultiIndex, paraproduct
from multidyadic.weights import Weight, ap_characteristic, bmo2_haar, bmo_r_norm

W = Window(0, 3, 3)
finite = st.floats(-10, 10, allow_nan=False, allow_infinity=False)
cells = arrays(np.float64, W.n_cells, elements=finite)
positive = arrays(np.float64, W.n_cells, elements=st.floats(0.05, 20))


@settings(max_examples=60, deadline=None)
@given(cells)
def test_haar_round_trip(v):
    f = StepFunction(W, v)
    coeffs, avgs = analyze(f)
    assert np.allclose(reconstruct(coeffs, avgs, W).values, v, atol=1e-12)


@settings(max_examples=60, deadline=None)
@given(cells, cells, cells, finite)
def test_paraproduct_linear_in_first_slot(a, b, c, s):
    alpha = MultiIndex.parse("01")
    f, g, h = (StepFunction(W, x) for x in (a, b, c))
    lhs = paraproduct(alpha, [f * s + h, g]).values
    rhs = s * paraproduct(alpha, [f, g]).values + paraproduct(alpha, [h, g]).values
    assert np.allclose(lhs, rhs, atol=1e-9 * (1 + np.abs(rhs).max()))


@settings(max_examples=60, deadline=None)
@given(cells, cells)
def test_maximal_bounds(a, b):
    f, g = StepFunction(W, a), StepFunction(W, b)
    M = maximal(f).values
    assert np.all(np.abs(a) <= M + 1e-12)
    assert np.all(multilinear_maximal([f, g]).values <= M * maximal(g).values + 1e-9)
    assert np.all(sharp_maximal(f).values <= 2 * M + 1e-12)


@settings(max_examples=60, deadline=None)
@given(cells, positive, st.sampled_from([0.5, 1.0, 2.0, 3.5]))
def test_weak_below_strong(a, w, p):
    f = StepFunction(W, a)
    wt = Weight(W, w)
    assert weak_lp_norm(f, p, wt) <= lp_norm(f, p, wt) * (1 + 1e-12) + 1e-300


@settings(max_examples=60, deadline=None)
@given(positive)
def test_ap_at_least_one_and_monotone(w):
    wt = Weight(W, w)
    chars = [ap_characteristic(wt, p) for p in (1.25, 2.0, 8.0)]
    assert chars[-1] >= 1 - 1e-12
    assert chars[0] >= chars[1] * (1 - 1e-12) and chars[1] >= chars[2] * (1 - 1e-12)


@settings(max_examples=60, deadline=None)
@given(cells)
def test_bmo2_identity(v):
    b = StepFunction(W, v)
    assert abs(bmo2_haar(b) - bmo_r_norm(b, 2.0)) <= 1e-10 * (1 + np.abs(v).max())

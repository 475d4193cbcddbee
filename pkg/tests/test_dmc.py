import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.optimize import minimize_scalar

from photon_reader.dmc import (
    ConvergenceWarning,
    TransitionMatrix,
    bac_capacity,
    binary_entropy,
    blahut_arimoto,
    bsc_capacity,
    bsc_channel,
    erasure_capacity,
    erasure_superchannel,
    mutual_information,
    ook_channel,
    ook_mutual_information,
    ook_optimal_prior,
)

# 40-digit mpmath evaluations, frozen
H_INV_E = 0.9490299446401694949488478604429548742816
OOK_I_NS1_P04 = 0.4361493427573194746885486835846435067257
BSC_011 = 0.5000840418354720043595004058697243373636


def test_binary_entropy_values():
    assert binary_entropy(0.5) == 1.0
    assert binary_entropy(0.0) == 0.0
    assert binary_entropy(1.0) == 0.0
    assert binary_entropy(1 / math.e) == pytest.approx(H_INV_E, abs=1e-15)


@pytest.mark.parametrize("x", [-0.1, 1.0000001, float("nan")])
def test_binary_entropy_domain(x):
    with pytest.raises(ValueError):
        binary_entropy(x)


def test_transition_matrix_validation():
    with pytest.raises(ValueError):
        TransitionMatrix(np.array([[0.5, 0.6]]))
    with pytest.raises(ValueError):
        TransitionMatrix(np.array([[1.2, -0.2]]))
    with pytest.raises(ValueError):
        TransitionMatrix(np.zeros((0, 2)))
    ch = TransitionMatrix([[1.0]])
    assert (ch.rows, ch.cols) == (1, 1)


def test_mutual_information_simple_channels():
    assert mutual_information(TransitionMatrix(np.eye(2)), [0.5, 0.5]) == pytest.approx(1.0, abs=1e-15)
    same = TransitionMatrix(np.tile([0.2, 0.3, 0.5], (4, 1)))
    assert mutual_information(same, [0.1, 0.2, 0.3, 0.4]) == pytest.approx(0.0, abs=1e-15)


def test_mutual_information_ook_closed_form():
    generic = mutual_information(ook_channel(1.0), [0.6, 0.4])
    closed = ook_mutual_information(1.0, 0.4)
    assert generic == pytest.approx(OOK_I_NS1_P04, abs=1e-14)
    assert closed == pytest.approx(OOK_I_NS1_P04, abs=1e-14)


def test_mutual_information_dimension_mismatch():
    with pytest.raises(ValueError):
        mutual_information(TransitionMatrix(np.eye(2)), [1 / 3, 1 / 3, 1 / 3])


stochastic_rows = st.integers(2, 5).flatmap(
    lambda cols: st.lists(
        st.lists(st.floats(0.01, 1.0), min_size=cols, max_size=cols), min_size=2, max_size=5
    )
)


def _channel(rows):
    p = np.array(rows)
    return TransitionMatrix(p / p.sum(axis=1, keepdims=True))


@settings(max_examples=60, deadline=None)
@given(stochastic_rows, st.randoms(use_true_random=False))
def test_mutual_information_column_permutation_invariant(rows, rnd):
    ch = _channel(rows)
    px = np.random.default_rng(rnd.randint(0, 2**31)).dirichlet(np.ones(ch.rows))
    perm = list(range(ch.cols))
    rnd.shuffle(perm)
    permuted = TransitionMatrix(ch.p[:, perm])
    assert mutual_information(permuted, px) == pytest.approx(mutual_information(ch, px), abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(stochastic_rows, st.integers(0, 2**31 - 1))
def test_blahut_arimoto_is_an_upper_envelope(rows, seed):
    ch = _channel(rows)
    tol = 1e-10
    res = blahut_arimoto(ch, tol=tol)
    assert res.converged
    assert 0.0 <= res.capacity_bits <= math.log2(min(ch.rows, ch.cols)) + 1e-12
    rng = np.random.default_rng(seed)
    for px in rng.dirichlet(np.ones(ch.rows), size=20):
        assert res.capacity_bits >= mutual_information(ch, px) - tol
    # maximizer achieves the value it reports
    assert mutual_information(ch, res.maximizer) >= res.capacity_bits - tol


def test_blahut_arimoto_bsc():
    res = blahut_arimoto(bsc_channel(0.11))
    assert res.capacity_bits == pytest.approx(BSC_011, abs=1e-9)
    assert res.iterations >= 1


@pytest.mark.parametrize("eps", [0.0, 0.2, 0.5, 0.9])
def test_blahut_arimoto_erasure(eps):
    res = blahut_arimoto(erasure_superchannel(4, eps))
    assert res.capacity_bits == pytest.approx(2 * (1 - eps), abs=1e-9)
    np.testing.assert_allclose(res.maximizer, 0.25, atol=1e-6)


def test_blahut_arimoto_erasure_m8():
    assert blahut_arimoto(erasure_superchannel(8, 0.2)).capacity_bits == pytest.approx(3 * 0.8, abs=1e-9)


def test_blahut_arimoto_reports_nonconvergence():
    with pytest.warns(ConvergenceWarning):
        res = blahut_arimoto(ook_channel(0.01), tol=1e-14, max_iter=5)
    assert not res.converged
    assert res.iterations == 5
    assert res.gap_bits > 0


def test_blahut_arimoto_rejects_bad_tol():
    with pytest.raises(ValueError):
        blahut_arimoto(bsc_channel(0.1), tol=0)


@pytest.mark.parametrize("n_s", [0.01, 0.1, 1.0, 10.0])
def test_bac_capacity_matches_blahut_arimoto(n_s):
    closed = bac_capacity(n_s)
    ba = blahut_arimoto(ook_channel(n_s))
    assert closed.capacity_bits == pytest.approx(ba.capacity_bits, abs=1e-9)
    assert closed.on_fraction == pytest.approx(ba.maximizer[1], abs=1e-6)


def test_bac_capacity_grid_oracle():
    f = lambda p: -ook_mutual_information(1.0, p)  # noqa: E731
    grid = np.linspace(1e-4, 1 - 1e-4, 20001)
    k = int(np.argmin([f(p) for p in grid]))
    best = minimize_scalar(f, bracket=(grid[k - 1], grid[k], grid[k + 1]), method="golden", tol=1e-12)
    res = bac_capacity(1.0)
    assert res.capacity_bits == pytest.approx(-best.fun, abs=1e-12)
    assert res.on_fraction == pytest.approx(best.x, abs=1e-6)


def test_optimal_prior_limits():
    assert bac_capacity(1e-6).on_fraction == pytest.approx(1 / math.e, abs=1e-3)
    assert bac_capacity(10).on_fraction == pytest.approx(0.5, abs=5e-3)
    assert ook_optimal_prior(0) == pytest.approx(1 / math.e)


@pytest.mark.parametrize("n_s", [0.01, 1.0, 10.0])
def test_optimal_prior_is_stationary(n_s):
    p = ook_optimal_prior(n_s)
    h = 1e-6
    deriv = (ook_mutual_information(n_s, p + h) - ook_mutual_information(n_s, p - h)) / (2 * h)
    assert abs(deriv) < 1e-6


def test_bsc_capacity():
    assert bsc_capacity(0).capacity_bits == 1.0
    assert bsc_capacity(0.5).capacity_bits == 0.0
    assert bsc_capacity(0.11).capacity_bits == pytest.approx(BSC_011, abs=1e-15)
    with pytest.raises(ValueError):
        bsc_capacity(1.5)


def test_erasure_superchannel_structure():
    ch = erasure_superchannel(2, 0.0)
    np.testing.assert_array_equal(ch.p, [[1, 0, 0], [0, 1, 0]])
    ch = erasure_superchannel(4, math.exp(-4.0))
    np.testing.assert_allclose(ch.p.sum(axis=1), 1.0, atol=1e-12)
    off = ch.p[:, :4][~np.eye(4, dtype=bool)]
    assert np.all(off == 0)
    assert erasure_capacity(8, 0.2).capacity_bits == pytest.approx(2.4)
    for bad in [(3, 0.1), (1, 0.1), (4, 1.5)]:
        with pytest.raises(ValueError):
            erasure_superchannel(*bad)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import reference_min_sum, small_check_matrix, small_fault_set
from treedec import BpConfig, CheckMatrix, WeightVector, bp_decode, syndrome_of

REP = CheckMatrix.from_rows([[0, 1], [1, 2]], 3)
REP_W = WeightVector.from_priors([0.1, 0.1, 0.1])


def test_empty_syndrome_converges_immediately():
    res = bp_decode(REP, REP_W, frozenset())
    assert res.converged and res.iterations_run == 0 and res.estimate == frozenset()
    assert res.lpr.tolist() == pytest.approx(list(REP_W.w))


def test_repetition_chain_single_defect():
    res = bp_decode(REP, REP_W, frozenset({0}))
    assert res.converged
    assert res.estimate == frozenset({0})
    assert res.iterations_run == 2
    assert res.lpr[0] == pytest.approx(-math.log(9))


def test_steane_single_faults(steane):
    """Min-sum recovers the exact fault except on the fully symmetric center
    syndrome, where it converges to a heavier syndrome-consistent estimate."""
    uni = WeightVector.uniform(7)
    degenerate = 0
    for j in range(7):
        sigma = syndrome_of(steane.hx, {j})
        res = bp_decode(steane.hx, uni, sigma, cfg=BpConfig(t_end=12, l_buff=8))
        assert res.converged
        assert syndrome_of(steane.hx, res.estimate) == sigma
        if res.estimate != frozenset({j}):
            degenerate += 1
            assert len(steane.hx.cols[j]) == 3  # only the center qubit
    assert degenerate == 1


def test_decimated_faults_carry_no_lpr(steane):
    uni = WeightVector.uniform(7)
    sigma = syndrome_of(steane.hx, {0, 4})
    res = bp_decode(steane.hx, uni, sigma, decimation=frozenset({0, 2}))
    assert 0 not in res.estimate and 2 not in res.estimate
    assert np.isnan(res.lpr[0]) and np.isnan(res.lpr[2])
    assert np.isnan(res.lpr_buffered[0])
    assert not np.isnan(res.lpr[1])


def test_unsatisfiable_decimated_check():
    # check 0 loses its only fault; BP cannot satisfy the syndrome
    H = CheckMatrix.from_rows([[0], [0, 1]], 2)
    res = bp_decode(H, WeightVector.uniform(2), frozenset({0}), decimation=frozenset({0}))
    assert not res.converged
    assert res.iterations_run == BpConfig().t_end


def test_convergence_flag_matches_syndrome(steane):
    uni = WeightVector.uniform(7)
    for faults in ({0}, {0, 3}, {1, 4, 6}):
        sigma = syndrome_of(steane.hx, faults)
        res = bp_decode(steane.hx, uni, sigma)
        if res.converged:
            assert syndrome_of(steane.hx, res.estimate) == sigma


def test_messages_stay_finite(steane):
    uni = WeightVector.uniform(7)
    sigma = syndrome_of(steane.hx, {3})
    res = bp_decode(steane.hx, uni, sigma, cfg=BpConfig(t_end=30, l_buff=30))
    assert np.isfinite(res.lpr).all() and np.isfinite(res.lpr_buffered).all()


def test_determinism(cc5):
    w = WeightVector.from_priors([0.02] * cc5.n)
    sigma = syndrome_of(cc5.hx, {1, 8, 14})
    a = bp_decode(cc5.hx, w, sigma)
    b = bp_decode(cc5.hx, w, sigma)
    assert np.array_equal(a.lpr, b.lpr, equal_nan=True)
    assert a.estimate == b.estimate and a.iterations_run == b.iterations_run


def test_buffer_mean_and_sum_modes():
    sigma = frozenset({0, 1})
    mean = bp_decode(REP, REP_W, sigma, cfg=BpConfig(t_end=6, l_buff=3))
    total = bp_decode(REP, REP_W, sigma, cfg=BpConfig(t_end=6, l_buff=3, buffer_sum=True))
    window = min(3, mean.iterations_run)
    assert total.lpr_buffered == pytest.approx(mean.lpr_buffered * window)


def test_config_validation():
    with pytest.raises(ValueError):
        BpConfig(t_end=0)
    with pytest.raises(ValueError):
        BpConfig(t_end=4, l_buff=5)


@given(small_check_matrix(), st.data(), st.integers(1, 5))
@settings(max_examples=80, deadline=None)
def test_matches_reference_implementation(H, data, t_end):
    priors = [0.05 + 0.04 * (j % 5) for j in range(H.N)]
    w = WeightVector.from_priors(priors)
    true = data.draw(small_fault_set(H.N))
    decim = data.draw(small_fault_set(H.N)) - true
    sigma = syndrome_of(H, true)
    got = bp_decode(H, w, sigma, decimation=decim, cfg=BpConfig(t_end=t_end, l_buff=min(3, t_end)))
    ref_lpr, ref_buf, ref_est, ref_conv, ref_iters = reference_min_sum(
        H, w, sigma, decim, t_end=t_end, l_buff=min(3, t_end)
    )
    assert got.converged == ref_conv
    assert got.iterations_run == ref_iters
    assert got.estimate == frozenset(ref_est)
    np.testing.assert_allclose(got.lpr, np.array(ref_lpr), rtol=0, atol=1e-12)
    np.testing.assert_allclose(got.lpr_buffered, np.array(ref_buf), rtol=0, atol=1e-12)

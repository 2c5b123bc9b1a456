import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonekit import asymqcm
from clonekit.qmath import haar_state
from clonekit.uqcm import bh_output


@pytest.mark.parametrize("d", [2, 3, 4])
def test_parameter_invariants_from_both_sides(d):
    for b in np.linspace(0, 1, 11):
        p = asymqcm.AsymParams.from_b(d, float(b))
        q = asymqcm.AsymParams.from_vx(d, p.v, p.x)
        assert q.a == pytest.approx(p.a) and q.b == pytest.approx(p.b)


def test_invalid_parameters_rejected():
    with pytest.raises(ValueError):
        asymqcm.AsymParams.from_ab(2, 0.5, 0.5)
    with pytest.raises(ValueError):
        asymqcm.AsymParams.from_b(2, 1.5)


def test_symmetric_point_recovers_universal_fidelity():
    for d in (2, 3, 5):
        fa, fb = asymqcm.asym_fidelities(asymqcm.AsymParams.symmetric(d))
        assert fa == pytest.approx(fb)
        assert fa == pytest.approx((d + 3) / (2 * (d + 1)))


def test_extremes():
    fa, fb = asymqcm.asym_fidelities(asymqcm.AsymParams.from_b(2, 0.0))
    assert (fa, fb) == pytest.approx((1.0, 0.5))
    fa, fb = asymqcm.asym_fidelities(asymqcm.AsymParams.from_b(2, 1.0))
    assert (fa, fb) == pytest.approx((0.5, 1.0))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3]), st.floats(0, 1), st.integers(0, 2 ** 32 - 1))
def test_three_constructions_agree(d, b, seed):
    psi = haar_state(d, np.random.default_rng(seed))
    p = asymqcm.AsymParams.from_b(d, b)
    direct = asymqcm.asym_output_state(psi, p)
    assert asymqcm.same_up_to_phase(direct, asymqcm.cerf_clone(psi, p)) == pytest.approx(1, abs=1e-10)
    if d == 2:
        assert asymqcm.same_up_to_phase(direct, asymqcm.circuit_clone(psi, p)) == pytest.approx(1, abs=1e-10)
    fa, fb = asymqcm.clone_fidelities(direct, psi)
    assert (fa, fb) == pytest.approx(asymqcm.asym_fidelities(p), abs=1e-12)
    # the gap takes a square root of 1 - F, so roundoff enters at sqrt(eps)
    assert asymqcm.no_cloning_gap(fa, fb, d) == pytest.approx(0, abs=1e-7)


def test_circuit_is_a_permutation():
    U = asymqcm.circuit_unitary()
    assert np.allclose(U @ U.T, np.eye(8))
    assert asymqcm.circuit_map_qubit(1, 1, 0) == (0, 0, 1)


def test_weyl_operators_form_swap():
    d = 3
    total = sum(np.kron(asymqcm.weyl_operator(d, m, n), asymqcm.weyl_operator(d, m, n).conj().T)
                for m in range(d) for n in range(d))
    swap = np.zeros((d * d, d * d))
    for i in range(d):
        for j in range(d):
            swap[j * d + i, i * d + j] = 1
    assert np.allclose(total, d * swap)


def test_suboptimal_point_has_positive_gap():
    assert asymqcm.no_cloning_gap(0.8, 0.8) > 0


def test_qubit_gap_is_the_qubit_inequality():
    fa, fb = 0.9, 0.7
    expected = math.sqrt((1 - fa) * (1 - fb)) - (0.5 - (1 - fa) - (1 - fb))
    assert asymqcm.no_cloning_gap(fa, fb) == pytest.approx(expected)


@pytest.mark.parametrize("T", [1.0, 0.9, 0.75, 0.6, 0.5])
def test_filip_projector_saturates_trade_off(T, rng):
    psi = haar_state(2, rng)
    out = asymqcm.filip_clone(psi, T)
    fa, fb = asymqcm.clone_fidelities(out, psi)
    assert asymqcm.no_cloning_gap(fa, fb) == pytest.approx(0, abs=1e-10)
    assert fa >= fb - 1e-12


def test_filip_at_full_transmission_is_symmetric(rng):
    psi = haar_state(2, rng)
    assert asymqcm.same_up_to_phase(asymqcm.filip_clone(psi, 1.0), bh_output(psi)) == pytest.approx(1)


def test_filip_range():
    with pytest.raises(ValueError):
        asymqcm.filip_projector(0.3)

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonekit.qmath import (
    KET0, KET1, PAULIS, PHI_PLUS, PLUS_X, PSI_MINUS, DensityMatrix, DimensionError,
    QuantumChannel, StateVector, apply_channel, basis_state, bloch_vector, fidelity_pure,
    from_bloch, haar_state, haar_unitary, max_entangled, maximally_mixed, orthogonal_qubit,
    partial_trace, qubit, random_channel, reduced_state, tensor, trace_distance, vn_entropy,
)

angles = st.floats(0, math.pi)
phases = st.floats(0, 2 * math.pi)


def test_state_vector_rejects_unnormalized():
    with pytest.raises(ValueError):
        StateVector((2,), [1, 1])


def test_state_vector_dimension_mismatch():
    with pytest.raises(DimensionError):
        StateVector((2, 2), [1, 0, 0])


def test_density_matrix_validation():
    with pytest.raises(ValueError):
        DensityMatrix((2,), [[1, 1], [0, 0]])
    with pytest.raises(ValueError):
        DensityMatrix((2,), np.eye(2))
    with pytest.raises(ValueError):
        DensityMatrix((2,), [[1.5, 0], [0, -0.5]])


def test_arrays_are_read_only():
    with pytest.raises(ValueError):
        KET0.amplitudes[0] = 2


def test_partial_trace_of_bell_state_is_mixed():
    red = partial_trace(PHI_PLUS.projector(), [0])
    assert np.allclose(red.matrix, np.eye(2) / 2, atol=1e-12)


def test_partial_trace_of_product_recovers_factors(rng):
    a, b, c = (haar_state(d, rng) for d in (2, 3, 2))
    rho = tensor(a, b, c).projector()
    for k, s in enumerate((a, b, c)):
        assert np.allclose(partial_trace(rho, [k]).matrix, s.projector().matrix, atol=1e-12)
    ac = partial_trace(rho, [0, 2])
    assert np.allclose(ac.matrix, tensor(a, c).projector().matrix, atol=1e-12)


def test_reduced_state_matches_partial_trace(rng):
    psi = StateVector.normalized((2, 3, 2), rng.normal(size=12) + 1j * rng.normal(size=12))
    for keep in ([0], [1], [2], [0, 2], [1, 2]):
        assert np.allclose(reduced_state(psi, keep).matrix,
                           partial_trace(psi.projector(), keep).matrix, atol=1e-12)


def test_partial_trace_rejects_empty_keep():
    with pytest.raises(ValueError):
        partial_trace(PHI_PLUS.projector(), [])


@given(angles, phases)
def test_bloch_round_trip(theta, phi):
    psi = qubit(theta, phi)
    m = bloch_vector(psi.projector())
    expected = [math.sin(theta) * math.cos(phi), math.sin(theta) * math.sin(phi), math.cos(theta)]
    assert np.allclose(m, expected, atol=1e-12)
    assert np.allclose(from_bloch(m).matrix, psi.projector().matrix, atol=1e-12)


@given(angles, phases)
def test_orthogonal_qubit(theta, phi):
    psi = qubit(theta, phi)
    perp = orthogonal_qubit(psi)
    assert abs(psi.overlap(perp)) < 1e-12
    assert np.allclose(bloch_vector(perp.projector()), -bloch_vector(psi.projector()), atol=1e-12)


def test_entropies():
    assert vn_entropy(KET0.projector()) == 0
    assert vn_entropy(maximally_mixed((2, 2))) == pytest.approx(2, abs=1e-12)
    assert vn_entropy(partial_trace(PSI_MINUS.projector(), [1])) == pytest.approx(1, abs=1e-12)


def test_trace_distance():
    assert trace_distance(KET0.projector().matrix, KET1.projector().matrix) == pytest.approx(1)
    assert trace_distance(KET0.projector().matrix, PLUS_X.projector().matrix) == pytest.approx(1 / math.sqrt(2))


def test_channel_rejects_non_trace_preserving():
    with pytest.raises(ValueError):
        QuantumChannel((2,), (2,), (np.eye(2) * 0.9,))


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 2 ** 32 - 1))
def test_random_channel_outputs_states(seed):
    rng = np.random.default_rng(seed)
    ch = random_channel((2,), (3,), rng=rng)
    out = apply_channel(ch, haar_state(2, rng).projector())
    assert out.dims == (3,)


def test_unitary_channel_preserves_purity(rng):
    U = haar_unitary(3, rng)
    psi = haar_state(3, rng)
    out = QuantumChannel.unitary(U, (3,))(psi.projector())
    assert fidelity_pure(out, StateVector((3,), U @ psi.amplitudes)) == pytest.approx(1, abs=1e-12)


def test_max_entangled_and_basis_state():
    phi = max_entangled(3)
    assert vn_entropy(reduced_state(phi, [0])) == pytest.approx(math.log2(3))
    assert basis_state((2, 3), (1, 2)).amplitudes[5] == 1


def test_paulis_anticommute():
    for i, a in enumerate(PAULIS):
        for j, b in enumerate(PAULIS):
            if i != j:
                assert np.allclose(a @ b + b @ a, 0)

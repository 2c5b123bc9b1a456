import math

import numpy as np
import pytest

from clonekit import qkd


def test_binary_entropy():
    assert qkd.binary_entropy(0) == 0
    assert qkd.binary_entropy(0.5) == pytest.approx(1)
    assert qkd.binary_entropy(0.11) == pytest.approx(qkd.binary_entropy(0.89))


def test_helstrom_and_holevo_extremes():
    a = np.diag([1.0, 0.0]).astype(complex)
    b = np.diag([0.0, 1.0]).astype(complex)
    assert qkd.helstrom_success(a, b) == pytest.approx(1)
    assert qkd.helstrom_success(a, a) == pytest.approx(0.5)
    assert qkd.holevo_chi(a, b) == pytest.approx(1)
    assert qkd.holevo_chi(a, a) == pytest.approx(0)


@pytest.mark.parametrize("eta", np.linspace(0.0, math.pi / 2, 13))
@pytest.mark.parametrize("ancilla", [False, True])
def test_state_level_matches_closed_form(eta, ancilla):
    got = (qkd.bb84_with_ancilla if ancilla else qkd.bb84_no_ancilla)(eta)
    ref = qkd.closed_form_outcome(eta, ancilla)
    for k in ("F_AB", "F_AE", "I_AB", "I_AE", "I_BE", "P_BE", "chi_AE"):
        assert getattr(got, k) == pytest.approx(getattr(ref, k), abs=1e-10), k
    if ancilla:
        assert got.chi_BE == pytest.approx(ref.chi_BE, abs=1e-10)
        assert got.I_AE == pytest.approx(got.I_BE, abs=1e-12)


def test_disturbance():
    out = qkd.bb84_with_ancilla(0.7)
    assert out.disturbance == pytest.approx(qkd.disturbance_of(0.7))


def test_relabelled_states_and_overlap():
    for eta in (0.1, 0.6, 1.4):
        for got, ref in zip(qkd.gamma_tilde(eta), qkd.gamma_tilde_form(eta)):
            assert np.allclose(got, ref, atol=1e-10)
        u = qkd.bell_relabel()
        assert np.allclose(u.conj().T @ u, np.eye(u.shape[0]))
        assert qkd.chi_overlap(eta) == pytest.approx(abs(math.cos(eta)))


def test_critical_disturbances():
    assert qkd.critical_disturbance("incoherent") == pytest.approx(0.1464, abs=1e-4)
    d = qkd.critical_disturbance("collective")
    assert d == pytest.approx(0.110, abs=1e-3)
    assert d == pytest.approx(qkd.shor_preskill_threshold(), abs=1e-7)
    assert qkd.SIX_STATE_DC > d


def test_incoherent_threshold_is_symmetric_point():
    assert qkd.critical_disturbance() == pytest.approx(qkd.disturbance_of(math.pi / 4), abs=1e-7)


def test_key_rate_modes():
    out = qkd.closed_form_outcome(0.3, ancilla=False)
    with pytest.raises(ValueError):
        qkd.key_rate(out, "collective")
    with pytest.raises(ValueError):
        qkd.key_rate(out, "bogus")
    assert qkd.key_rate(qkd.closed_form_outcome(0.0, True)) == pytest.approx(1)


def test_eta_range():
    with pytest.raises(ValueError):
        qkd.bb84_with_ancilla(2.0)

from fractions import Fraction

import pytest

from clonekit import stimem
from clonekit.uqcm import fidelity_formula


def test_emission_ratios():
    assert stimem.emission_pmf(2, 2).weights == (1, 3, 6)
    m = stimem.emission_pmf(1, 3)
    assert sum(m.pmf) == 1
    assert m.mean_l == Fraction(3 * 2, 3)


def test_emission_model_rejects_wrong_weights():
    with pytest.raises(ValueError):
        stimem.EmissionModel(1, 2, (1, 1, 1))


@pytest.mark.parametrize("N,k", [(0, 3), (1, 2), (2, 4), (3, 3)])
def test_fock_oracle_matches_weights(N, k):
    w = stimem.emission_pmf(N, k).weights
    o = [stimem.fock_oracle(N, k, l) for l in range(k + 1)]
    assert [Fraction(x, w[0]) for x in w] == [x / o[0] for x in o]


def test_fock_budget():
    with pytest.raises(MemoryError):
        stimem.fock_oracle(10, 5, 1)


def test_stimulated_fidelity_is_optimal():
    for N in range(1, 8):
        for M in range(N + 1, 12):
            assert stimem.stim_fidelity(N, M, exact=True) == fidelity_formula(N, M, 2, exact=True)


def test_classical_amplifier():
    assert stimem.classical_amp_fidelity(1, 1.94, 0.8) == pytest.approx(0.82, abs=0.01)
    with pytest.raises(ValueError):
        stimem.classical_amp_fidelity(2, 1, 0.5)


def test_timebin():
    for d in range(2, 10):
        assert stimem.timebin_fidelity(d, exact=True) == fidelity_formula(1, 2, d, exact=True)


def test_pdc():
    r = stimem.pdc_first_order_check()
    assert r
    assert r.fidelity == Fraction(5, 6)
    assert r.overlap == pytest.approx(1)

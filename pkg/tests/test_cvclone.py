import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from clonekit import cvclone as cv

coords = st.floats(-5, 5)


def test_ensemble_validation():
    with pytest.raises(ValueError):
        cv.GaussianEnsemble(1, np.zeros(2), np.diag([0.1, 0.1]))
    with pytest.raises(ValueError):
        cv.GaussianEnsemble(1, np.zeros(2), np.array([[1.0, 0.2], [0.0, 1.0]]))
    s = cv.squeezed(0, 0, 1.0)
    assert np.prod(s.variances(0)) == pytest.approx(0.25)


def test_transform_validation():
    with pytest.raises(ValueError):
        cv.QuadratureTransform(np.diag([2.0, 2.0]))
    with pytest.raises(ValueError):
        cv.amplifier(0.5)


@pytest.mark.parametrize("n", [1, 2, 3, 5])
def test_dft_and_beam_splitter_are_symplectic(n):
    assert cv.symplectic_defect(cv.dft(n).matrix) < 1e-12
    F = cv.dft_matrix(n)
    assert np.allclose(F.conj().T @ F, np.eye(n))
    assert cv.symplectic_defect(cv.beam_splitter(0.3).matrix) < 1e-12


def test_bogoliubov_matches_complex_action():
    rng = np.random.default_rng(5)
    from scipy.stats import unitary_group
    U = unitary_group.rvs(3, random_state=rng)
    T = cv.bogoliubov(U).matrix
    a = rng.normal(size=3) + 1j * rng.normal(size=3)
    b = U @ a
    xp = np.ravel(np.column_stack([a.real, a.imag]))
    assert np.allclose(T @ xp, np.ravel(np.column_stack([b.real, b.imag])))


def test_amplifier_on_vacuum():
    out = cv.vacuum(2).apply(cv.amplifier(2.0))
    # phase-insensitive gain G: each output variance (2G - 1)/2
    assert out.variances(0) == pytest.approx((1.5, 1.5))
    assert out.variances(1) == pytest.approx((1.5, 1.5))


def test_one_to_two_explicit_transform():
    # modes (input a, blank b, ancilla z); gain-2 amplifier a' = sqrt2 a + z^dag,
    # z' = a^dag + sqrt2 z, then clones (a' +- b)/sqrt2
    h = 1 / math.sqrt(2)
    r2 = math.sqrt(2)
    oracle = np.array([
        [1, 0, h, 0, h, 0],
        [0, 1, 0, h, 0, -h],
        [1, 0, -h, 0, h, 0],
        [0, 1, 0, -h, 0, -h],
        [1, 0, 0, 0, r2, 0],
        [0, -1, 0, 0, 0, r2],
    ])
    assert cv.symplectic_defect(oracle) < 1e-12
    run = cv.clone_network(1, 2, cv.coherent(0.4, -1.1))
    assert np.allclose(run.transform.matrix, oracle, atol=1e-12)


@settings(max_examples=25, deadline=None)
@given(coords, coords, st.sampled_from([(1, 2), (1, 3), (2, 3), (2, 5), (3, 4)]))
def test_network_reaches_bound(x, p, nm):
    N, M = nm
    inp = cv.coherent(x, p)
    run = cv.clone_network(N, M, cv.copies(inp, N))
    for k in range(M):
        assert run.clone(k).quadratures(0) == pytest.approx((x, p), abs=1e-10)
        assert run.added_noise(k) == pytest.approx((1 / N - 1 / M,) * 2, abs=1e-10)
        assert cv.gaussian_overlap(run.clone(k), inp) == pytest.approx(cv.sgc_bound(N, M)[1], abs=1e-10)
    assert run.anticlone().quadratures(0) == pytest.approx((math.sqrt(M - N) * x, -math.sqrt(M - N) * p), abs=1e-10)


def test_two_to_three_fidelity():
    assert cv.sgc_bound(2, 3)[1] == pytest.approx(6 / 7)
    assert cv.sgc_bound(1, cv.INFINITY)[1] == pytest.approx(0.5)


def test_arthurs_kelly():
    run = cv.clone_network(1, 2, cv.coherent(0.0, 0.0))
    measured, added = cv.arthurs_kelly_products(run.output)
    assert measured == pytest.approx((1, 1))
    assert added == pytest.approx((0.25, 0.25))
    assert cv.arthurs_kelly_check(run.output)


def test_squeezed_inputs():
    r = 0.8
    inp = cv.squeezed(0.2, 0.3, r)
    matched = cv.squeezed_clone(1, 2, inp, r, matched=True)
    for k in range(2):
        assert cv.gaussian_overlap(matched.clone(k), inp) == pytest.approx(2 / 3, abs=1e-10)
    plain = cv.squeezed_clone(1, 2, inp, r, matched=False)
    assert cv.gaussian_overlap(plain.clone(0), inp) < 2 / 3 - 1e-3


def test_network_input_checks():
    with pytest.raises(ValueError):
        cv.clone_network(2, 3, cv.coherent(0, 0).direct_sum(cv.coherent(1, 0)))
    with pytest.raises(ValueError):
        cv.clone_network(2, 2, cv.copies(cv.coherent(0, 0), 2))


def test_finite_distribution_branches():
    F, G = cv.finite_dist_fidelity(cv.FINITE_DIST_THRESHOLD)
    lo = cv.finite_dist_fidelity(cv.FINITE_DIST_THRESHOLD - 1e-9)[0]
    assert F == pytest.approx(lo, abs=1e-6)
    assert cv.finite_dist_fidelity(1e6)[0] == pytest.approx(2 / 3, abs=1e-5)
    assert cv.finite_dist_fidelity(0)[0] == pytest.approx(1)
    assert cv.finite_dist_fidelity(1e6)[1] == pytest.approx(2, abs=1e-5)

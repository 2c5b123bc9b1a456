"""Acceptance checks, each comparing an implementation against an independent route."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable

import numpy as np

from . import asymqcm, cvclone, estim, pcqcm, qkd, stimem, uqcm
from .qmath import StateVector, fidelity_pure, haar_state, orthogonal_qubit, random_channel
from .symspace import SymmetricSubspace


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str

    def line(self) -> str:
        return f"[{'PASS' if self.passed else 'FAIL'}] {self.name}: {self.detail}"


# --- universal cloning oracle --------------------------------------------

def _symmetrize(t: np.ndarray, m: int) -> np.ndarray:
    """S_m on the first m tensor axes: S_m = (1/m)(1 + sum_{k<m} P_(k m)) S_{m-1}."""
    if m == 1:
        return t
    t = _symmetrize(t, m - 1)
    out = t.copy()
    for k in range(m - 1):
        out += np.swapaxes(t, k, m - 1)
    return out / m


def werner_fidelity_oracle(psi: StateVector, N: int, M: int) -> float:
    """Clone fidelity of S (psi^N (x) 1) S computed in the full d^M space.

    Blank basis strings in the same occupation class give the same
    symmetrized vector, so one representative per class is used with its
    multiplicity as weight.
    """
    d = psi.dims[0]
    blanks = SymmetricSubspace(d, M - N) if M > N else None
    reps, mult = [()], [1]
    if blanks is not None:
        reps, mult = [], []
        for occ in blanks.basis:
            reps.append(tuple(a for a, n in enumerate(occ) for _ in range(n)))
            mult.append(math.factorial(M - N) // math.prod(math.factorial(n) for n in occ))
    head = psi.amplitudes
    for _ in range(N - 1):
        head = np.multiply.outer(head, psi.amplitudes)
    cols = []
    for r in reps:
        tail = np.zeros((d,) * (M - N)) if M > N else np.ones(())
        tail[r] = 1.0
        cols.append(np.multiply.outer(head, tail))
    batch = np.stack(cols, axis=-1)
    sym = _symmetrize(batch, M)
    w = np.asarray(mult, dtype=float)
    nb = len(reps)
    norm2 = (np.abs(sym.reshape(-1, nb)) ** 2).sum(axis=0)
    proj = np.tensordot(psi.amplitudes.conj(), sym, axes=(0, 0))
    num = (np.abs(proj.reshape(-1, nb)) ** 2).sum(axis=0)
    return float((w * num).sum() / (w * norm2).sum())


def werner_grid(max_dim: int = uqcm.MAX_WERNER_DIM) -> list[tuple[int, int, int]]:
    grid = []
    d = 2
    while d ** 2 <= max_dim:
        M = 2
        while d ** M <= max_dim:
            grid.extend((N, M, d) for N in range(1, M))
            M += 1
        d += 1
    return grid


def check_universal(seed: int = 0) -> CheckResult:
    rng = np.random.default_rng(seed)
    worst = 0.0
    grid = werner_grid()
    for N, M, d in grid:
        psi = haar_state(d, rng)
        rep = uqcm.werner_clone(psi, N, M)
        formula = uqcm.fidelity_formula(N, M, d)
        oracle = werner_fidelity_oracle(psi, N, M)
        worst = max(worst, abs(oracle - formula), max(abs(f - formula) for f in rep.per_clone_fidelity))
    spots = {(1, 2, 2): Fraction(5, 6), (2, 3, 2): Fraction(11, 12), (1, 2, 3): Fraction(3, 4)}
    spots_ok = all(uqcm.fidelity_formula(*k, exact=True) == v for k, v in spots.items())
    spots_ok &= all(abs(werner_fidelity_oracle(haar_state(k[2], rng), k[0], k[1]) - float(v)) < 1e-9
                    for k, v in spots.items())
    return CheckResult("universal cloning", worst < 1e-9 and spots_ok,
                       f"{len(grid)} (N,M,d) cases, max deviation {worst:.2e}, spot values {spots_ok}")


def check_buzek_hillery(seed: int = 1) -> CheckResult:
    rng = np.random.default_rng(seed)
    dev = anti = marg = 0.0
    for _ in range(100):
        psi = haar_state(2, rng)
        A, B, Mc = uqcm.buzek_hillery(psi)
        dev = max(dev, abs(fidelity_pure(A, psi) - 5 / 6), abs(fidelity_pure(B, psi) - 5 / 6))
        anti = max(anti, abs(fidelity_pure(Mc, orthogonal_qubit(psi)) - 2 / 3))
        w = uqcm.werner_clone(psi, 1, 2).clone_states
        marg = max(marg, np.max(np.abs(A.matrix - w[0].matrix)), np.max(np.abs(B.matrix - w[1].matrix)))
    ok = dev < 1e-9 and anti <= 1e-10 and marg <= 1e-10
    return CheckResult("Buzek-Hillery machine", ok,
                       f"clone dev {dev:.1e}, anticlone dev {anti:.1e}, Werner marginal dev {marg:.1e}")


def check_asymmetric(seed: int = 2) -> CheckResult:
    rng = np.random.default_rng(seed)
    gap = 0.0
    agree = 1.0
    for d in (2, 3):
        for b in np.linspace(0, 1, 20):
            p = asymqcm.AsymParams.from_b(d, float(b))
            psi = haar_state(d, rng)
            direct = asymqcm.asym_output_state(psi, p)
            fa, fb = asymqcm.clone_fidelities(direct, psi)
            gap = max(gap, abs(asymqcm.no_cloning_gap(fa, fb, d)))
            agree = min(agree, asymqcm.same_up_to_phase(direct, asymqcm.cerf_clone(psi, p)))
            if d == 2:
                agree = min(agree, asymqcm.same_up_to_phase(direct, asymqcm.circuit_clone(psi, p)))
    ok = gap < 1e-9 and agree >= 1 - 1e-10
    return CheckResult("asymmetric cloning", ok, f"max inequality gap {gap:.1e}, min overlap {agree:.12f}")


def check_phase_covariant() -> CheckResult:
    target = (1 + 1 / math.sqrt(2)) / 2
    fids = []
    for phi in 2 * np.pi * np.arange(50) / 50:
        ket = pcqcm.EquatorState(phi).ket
        for clones in (pcqcm.ng_clone(phi, math.pi / 4), pcqcm.pc_ancilla_clone(phi, math.pi / 4)[:2]):
            fids.extend(fidelity_pure(c, ket) for c in clones)
    fids = np.array(fids)
    dev, spread = float(np.max(np.abs(fids - target))), float(np.ptp(fids))
    margin = math.inf
    for eta in np.linspace(0, math.pi / 2, 41):
        fa, fb = pcqcm.equator_fidelities(eta)
        b = math.sqrt(max(0.0, 2 * (1 - fa)))
        _, fb_univ = asymqcm.asym_fidelities(asymqcm.AsymParams.from_b(2, min(b, 1.0)))
        margin = min(margin, fb - fb_univ)
    ok = dev <= 1e-12 and spread <= 1e-12 and margin >= -1e-12
    return CheckResult("phase-covariant cloning", ok,
                       f"dev {dev:.1e}, phi spread {spread:.1e}, min advantage over universal {margin:.2e}")


def check_estimation() -> CheckResult:
    exact = all(
        uqcm.shrinking_eta(N, M, 2, exact=True) == estim.eta_star(N, exact=True) / estim.eta_star(M, exact=True)
        for N in range(1, 20) for M in range(N + 1, 21)
    )
    cascade = all(estim.multiplicativity_check(N, M, L)
                  for N in range(1, 9) for M in range(N, 11) for L in list(range(M, 13)) + [estim.INFINITY])
    return CheckResult("state estimation", exact and cascade,
                       f"exact ratio identity {exact}, cascade inequality {cascade}")


def check_qkd() -> CheckResult:
    d_inc = qkd.critical_disturbance("incoherent")
    d_col = qkd.critical_disturbance("collective")
    sym = worst = 0.0
    for eta in np.linspace(0, math.pi / 2, 50):
        for anc in (False, True):
            got = (qkd.bb84_with_ancilla if anc else qkd.bb84_no_ancilla)(eta)
            ref = qkd.closed_form_outcome(eta, anc)
            for k in ("F_AB", "F_AE", "I_AB", "I_AE", "I_BE", "chi_AE", "chi_BE"):
                a, b = getattr(got, k), getattr(ref, k)
                if b is not None:
                    worst = max(worst, abs(a - b))
            if anc:
                sym = max(sym, abs(got.I_AE - got.I_BE))
    ok = (abs(d_inc - 0.1464) <= 1e-4 and abs(d_col - 0.1100) <= 1e-3
          and abs(1 - 2 * qkd.binary_entropy(d_col)) < 1e-6 and sym < 1e-12 and worst < 1e-9)
    return CheckResult("BB84 eavesdropping", ok,
                       f"D_incoh {d_inc:.6f}, D_coll {d_col:.6f}, |I_AE-I_BE| {sym:.1e}, "
                       f"state vs formula {worst:.1e}")


def check_cv() -> CheckResult:
    x0, p0 = 1.0, -0.5
    run = cvclone.clone_network(1, 2, cvclone.coherent(x0, p0))
    var12 = max(abs(v - 1) for k in range(2) for v in run.output.variances(k))
    anti = np.max(np.abs(run.anticlone().mean - [x0, -p0]))
    defect = max(cvclone.symplectic_defect(s.matrix) for s in run.stages)
    noise = fid = 0.0
    for N, M in [(1, 3), (2, 3), (2, 4), (3, 5)]:
        inp = cvclone.coherent(0.3, 0.7)
        r = cvclone.clone_network(N, M, cvclone.copies(inp, N))
        defect = max(defect, *(cvclone.symplectic_defect(s.matrix) for s in r.stages))
        for k in range(M):
            noise = max(noise, *(abs(a - (1 / N - 1 / M)) for a in r.added_noise(k)))
            fid = max(fid, abs(cvclone.gaussian_overlap(r.clone(k), inp) - cvclone.sgc_bound(N, M)[1]))
    measured, added = cvclone.arthurs_kelly_products(run.output)
    ak = max(abs(m - 1) for m in measured) < 1e-10 and max(abs(a - 0.25) for a in added) < 1e-10
    ok = var12 < 1e-10 and anti < 1e-10 and noise < 1e-10 and fid < 1e-10 and defect < 1e-10 and ak
    return CheckResult("Gaussian cloning network", ok,
                       f"1->2 variance dev {var12:.1e}, anticlone dev {anti:.1e}, noise dev {noise:.1e}, "
                       f"fidelity dev {fid:.1e}, symplectic defect {defect:.1e}, Arthurs-Kelly equality {ak}")


def check_stimulated() -> CheckResult:
    oracle = True
    for N in range(0, 12):
        for k in range(1, 13 - N):
            w = stimem.emission_pmf(N, k).weights
            o = [stimem.fock_oracle(N, k, l) for l in range(k + 1)]
            oracle &= all(Fraction(w[l], w[0]) == o[l] / o[0] for l in range(k + 1))
    gm = all(stimem.stim_fidelity(N, M, exact=True) == uqcm.fidelity_formula(N, M, 2, exact=True)
             for N in range(1, 30) for M in range(N + 1, 31))
    amp = stimem.classical_amp_fidelity(1, 1.94, 0.8)
    tb = all(stimem.timebin_fidelity(d, exact=True) == uqcm.fidelity_formula(1, 2, d, exact=True)
             for d in range(2, 40))
    pdc = stimem.pdc_first_order_check()
    ok = oracle and gm and abs(amp - 0.82) <= 0.01 and tb and bool(pdc)
    return CheckResult("stimulated emission", ok,
                       f"Fock oracle {oracle}, optimal fidelity {gm}, classical amp {amp:.4f}, "
                       f"time-bin {tb}, PDC {bool(pdc)}")


def check_finite_distribution() -> CheckResult:
    s = cvclone.FINITE_DIST_THRESHOLD
    upper, lower = cvclone._finite_dist_branches(s)
    far = cvclone.finite_dist_fidelity(1e4)[0]
    zero = cvclone.finite_dist_fidelity(0.0)[0]
    ok = abs(upper - lower) < 1e-9 and abs(far - 2 / 3) < 1e-3 and abs(zero - 1) < 1e-12
    return CheckResult("finite-distribution CV cloning", ok,
                       f"branch gap {abs(upper - lower):.1e}, F(1e4) {far:.6f}, F(0) {zero:.6f}")


def library_channels() -> dict[str, object]:
    chans = {
        "buzek-hillery": uqcm.bh_channel(),
        "werner 1->2": uqcm.werner_channel(2, 2),
        "measure-prepare": uqcm.measure_prepare_channel(),
        "werner map (state route)": lambda psi: uqcm.werner_clone(psi, 1, 2).output_state,
    }
    for b in (0.0, 0.3, 0.7, 1.0):
        chans[f"asymmetric b={b}"] = asymqcm.asym_channel(asymqcm.AsymParams.from_b(2, b))
    for eta in (0.0, 0.4, math.pi / 4, 1.2):
        chans[f"phase-covariant eta={eta:.3f}"] = pcqcm.ng_channel(eta)
        chans[f"phase-covariant ancilla eta={eta:.3f}"] = pcqcm.pc_channel(eta)
    rng = np.random.default_rng(3)
    for k in range(5):
        chans[f"random channel {k}"] = random_channel((2,), (2, 2), rng=rng)
    return chans


def check_no_signaling() -> CheckResult:
    failing = [name for name, ch in library_channels().items() if not uqcm.no_signaling_check(ch)]
    rho_x, rho_z = uqcm.signaling_states(uqcm.perfect_cloner)
    v_x, v_z = rho_x[1, 1].real, rho_z[1, 1].real
    perfect_fails = not uqcm.no_signaling_check(uqcm.perfect_cloner)
    ok = not failing and perfect_fails and abs(v_x - 0.25) < 1e-12 and abs(v_z) < 1e-12
    return CheckResult("no-signaling", ok,
                       f"channels failing: {failing or 'none'}; perfect cloner <01|rho|01> "
                       f"x: {v_x:.4f} z: {v_z:.4f}")


CHECKS: tuple[Callable[[], CheckResult], ...] = (
    check_universal, check_buzek_hillery, check_asymmetric, check_phase_covariant,
    check_estimation, check_qkd, check_cv, check_stimulated, check_finite_distribution,
    check_no_signaling,
)


def run_all() -> list[CheckResult]:
    return [c() for c in CHECKS]

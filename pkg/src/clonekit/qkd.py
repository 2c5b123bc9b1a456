"""Incoherent and collective eavesdropping on BB84 with phase-covariant cloners.

Alice sends |+x> or |-x> (bit 0 or 1) with equal probability and Bob
measures sigma_x.  Eve's cloner acts on the flying qubit; every quantity
below is computed from explicit output states and, separately, from the
closed forms in ``closed_form_outcome``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import brentq

from .pcqcm import ng_unitary, pc_ancilla_output
from .qmath import (
    MINUS_X, PHI_MINUS, PHI_PLUS, PLUS_X, PSI_MINUS, PSI_PLUS, DensityMatrix, StateVector,
    partial_trace, vn_entropy,
)

ROOT_TOL = 1e-8
ROOT_BRACKET = (1e-6, 0.5 - 1e-6)

# Six-state protocol, incoherent attack: reference value only, not derived here.
SIX_STATE_DC = 0.157

_X_BASIS = (PLUS_X.amplitudes, MINUS_X.amplitudes)


def binary_entropy(p: float) -> float:
    if not -1e-15 <= p <= 1 + 1e-15:
        raise ValueError("probability must lie in [0, 1]")
    if p <= 0 or p >= 1:
        return 0.0
    return float(-p * math.log2(p) - (1 - p) * math.log2(1 - p))


@dataclass(frozen=True)
class AttackOutcome:
    eta: float
    F_AB: float
    F_AE: float
    I_AB: float
    I_AE: float
    I_BE: float
    chi_AE: float | None = None
    chi_BE: float | None = None
    P_BE: float | None = None

    def __post_init__(self):
        for name in ("I_AB", "I_AE", "I_BE", "chi_AE", "chi_BE"):
            v = getattr(self, name)
            if v is not None and not -1e-9 <= v <= 1 + 1e-9:
                raise ValueError(f"{name}={v} outside [0, 1]")
        for name in ("F_AB", "F_AE"):
            if not 0.5 - 1e-9 <= getattr(self, name) <= 1 + 1e-9:
                raise ValueError(f"{name} outside [1/2, 1]")

    @property
    def disturbance(self) -> float:
        return 1 - self.F_AB


def _check_eta(eta: float):
    if not -1e-12 <= eta <= math.pi / 2 + 1e-12:
        raise ValueError("eta must lie in [0, pi/2]")


def helstrom_success(rho0: np.ndarray, rho1: np.ndarray, p0: float = 0.5) -> float:
    """Optimal probability of telling rho0 from rho1 with priors p0, 1 - p0."""
    gap = p0 * rho0 - (1 - p0) * rho1
    return float(0.5 * (1 + np.abs(np.linalg.eigvalsh(gap)).sum()))


def holevo_chi(rho0: np.ndarray, rho1: np.ndarray) -> float:
    """S(avg) - S(rho0)/2 - S(rho1)/2 for an equiprobable binary ensemble."""
    dims = (rho0.shape[0],)
    ent = lambda m: vn_entropy(DensityMatrix(dims, 0.5 * (m + m.conj().T), check=False))
    return float(ent(0.5 * (rho0 + rho1)) - 0.5 * ent(rho0) - 0.5 * ent(rho1))


def _bob_conditioned(states: tuple[StateVector, StateVector]) -> tuple[np.ndarray, ...]:
    """Eve's normalized state given Bob's sigma_x outcome, averaged over Alice."""
    out = []
    for b in _X_BASIS:
        acc = 0
        for st in states:
            t = st.amplitudes.reshape(2, -1)
            e = b.conj() @ t
            acc = acc + 0.5 * np.outer(e, e.conj())
        out.append(acc / np.trace(acc).real)
    return tuple(out)


def _bob_fidelity(states) -> float:
    # probability Bob's sigma_x outcome equals Alice's bit
    return float(np.mean([
        np.linalg.norm(_X_BASIS[a].conj() @ st.amplitudes.reshape(2, -1)) ** 2
        for a, st in enumerate(states)
    ]))


def _eve_states(states) -> tuple[np.ndarray, np.ndarray]:
    n = len(states[0].dims)
    return tuple(partial_trace(st.projector(), range(1, n)).matrix for st in states)


def gamma_no_ancilla(eta: float) -> tuple[StateVector, StateVector]:
    """|Gamma> on (B, E) for Alice sending |+x> and |-x>."""
    _check_eta(eta)
    U = ng_unitary(eta)
    return tuple(StateVector((2, 2), U @ np.kron(x, [1, 0])) for x in _X_BASIS)


def gamma_with_ancilla(eta: float) -> tuple[StateVector, StateVector]:
    """|Gamma+->> on (B, E1, E2) for Alice sending |+x> and |-x>."""
    _check_eta(eta)
    return pc_ancilla_output(0.0, eta), pc_ancilla_output(math.pi, eta)


def gamma_explicit(eta: float) -> tuple[np.ndarray, np.ndarray]:
    """Amplitudes written out term by term, as an independent check of the cloner."""
    c, s = math.cos(eta), math.sin(eta)
    out = []
    for sign in (1, -1):
        v = np.zeros(8)
        v[0b000], v[0b011], v[0b101] = 1, c, s
        v[0b100], v[0b010], v[0b111] = sign * c, sign * s, sign
        out.append(v / 2)
    return tuple(out)


def bell_relabel() -> np.ndarray:
    """Phi+ -> 00, Psi+ -> 10, Phi- -> 11, Psi- -> 01 on Eve's two qubits."""
    targets = {0b00: PHI_PLUS, 0b10: PSI_PLUS, 0b11: PHI_MINUS, 0b01: PSI_MINUS}
    R = np.zeros((4, 4), dtype=complex)
    for idx, bell in targets.items():
        R[idx] += bell.amplitudes.conj()
    return R


def gamma_tilde(eta: float) -> tuple[np.ndarray, np.ndarray]:
    R = np.kron(np.eye(2), bell_relabel())
    return tuple(R @ g.amplitudes for g in gamma_with_ancilla(eta))


def gamma_tilde_form(eta: float) -> tuple[np.ndarray, np.ndarray]:
    """sqrt(F)|+-x>|chi+->|0> -+ sqrt(D)|-+x>|chi-+>|1>."""
    F = (1 + math.cos(eta)) / 2
    D = 1 - F
    chi = {1: np.array([math.sqrt(F), math.sqrt(D)]), -1: np.array([math.sqrt(F), -math.sqrt(D)])}
    x = {1: PLUS_X.amplitudes, -1: MINUS_X.amplitudes}
    e0, e1 = np.array([1, 0]), np.array([0, 1])
    return tuple(
        math.sqrt(F) * np.kron(np.kron(x[s], chi[s]), e0)
        - s * math.sqrt(D) * np.kron(np.kron(x[-s], chi[-s]), e1)
        for s in (1, -1)
    )


def chi_overlap(eta: float) -> float:
    """|<chi+|chi->| = F - D."""
    F = (1 + math.cos(eta)) / 2
    return abs(F - (1 - F))


def bb84_no_ancilla(eta: float) -> AttackOutcome:
    states = gamma_no_ancilla(eta)
    F_AB = _bob_fidelity(states)
    e0, e1 = _eve_states(states)
    F_AE = helstrom_success(e0, e1)
    # Bob and Eve both measure sigma_x on the state for |+x>
    g = states[0].amplitudes
    P_BE = sum(abs(np.kron(b, b).conj() @ g) ** 2 for b in _X_BASIS)
    b0, b1 = _bob_conditioned(states)
    return AttackOutcome(
        eta=eta, F_AB=F_AB, F_AE=F_AE,
        I_AB=1 - binary_entropy(F_AB), I_AE=1 - binary_entropy(F_AE),
        I_BE=1 - binary_entropy(P_BE),
        chi_AE=holevo_chi(e0, e1), chi_BE=holevo_chi(b0, b1), P_BE=float(P_BE),
    )


def bb84_with_ancilla(eta: float) -> AttackOutcome:
    states = gamma_with_ancilla(eta)
    for st, ref in zip(states, gamma_explicit(eta)):
        if abs(abs(np.vdot(ref, st.amplitudes)) - 1) > 1e-10:
            raise ArithmeticError("cloner output disagrees with the written-out attack state")
    for got, ref in zip(gamma_tilde(eta), gamma_tilde_form(eta)):
        if np.max(np.abs(got - ref)) > 1e-10:
            raise ArithmeticError("relabelled state is not of the expected form")
    F_AB = _bob_fidelity(states)
    e0, e1 = _eve_states(states)
    b0, b1 = _bob_conditioned(states)
    F_AE = helstrom_success(e0, e1)
    P_BE = helstrom_success(b0, b1)
    return AttackOutcome(
        eta=eta, F_AB=F_AB, F_AE=F_AE,
        I_AB=1 - binary_entropy(F_AB), I_AE=1 - binary_entropy(F_AE),
        I_BE=1 - binary_entropy(P_BE),
        chi_AE=holevo_chi(e0, e1), chi_BE=holevo_chi(b0, b1), P_BE=P_BE,
    )


def closed_form_outcome(eta: float, ancilla: bool) -> AttackOutcome:
    c, s = math.cos(eta), math.sin(eta)
    F_AB, F_AE = (1 + c) / 2, (1 + s) / 2
    D = 1 - F_AB
    if ancilla:
        P_BE = F_AE
        chi = binary_entropy(D)
        chi_ae = chi_be = chi
    else:
        P_BE = (1 + 0.5 * math.sin(2 * eta)) / 2
        # Eve's states have Bloch vectors (+-s, 0, c^2)
        r = math.hypot(s, c * c)
        chi_ae = binary_entropy((1 + c * c) / 2) - binary_entropy((1 + r) / 2)
        chi_be = None
    return AttackOutcome(
        eta=eta, F_AB=F_AB, F_AE=F_AE,
        I_AB=1 - binary_entropy(F_AB), I_AE=1 - binary_entropy(F_AE),
        I_BE=1 - binary_entropy(P_BE), chi_AE=chi_ae, chi_BE=chi_be, P_BE=P_BE,
    )


def key_rate(outcome: AttackOutcome, mode: str = "incoherent") -> float:
    """Csiszar-Korner rate (incoherent) or Devetak-Winter rate (collective)."""
    if mode == "incoherent":
        return outcome.I_AB - min(outcome.I_AE, outcome.I_BE)
    if mode == "collective":
        if outcome.chi_AE is None or outcome.chi_BE is None:
            raise ValueError("collective rate needs both Holevo quantities")
        return outcome.I_AB - min(outcome.chi_AE, outcome.chi_BE)
    raise ValueError(f"unknown mode {mode!r}")


def disturbance_of(eta: float) -> float:
    return (1 - math.cos(eta)) / 2


def critical_disturbance(mode: str = "incoherent") -> float:
    """Error rate at which the ancilla-machine attack drives the key rate to zero."""
    if mode not in ("incoherent", "collective"):
        raise ValueError(f"unknown mode {mode!r}")
    f = lambda eta: key_rate(bb84_with_ancilla(eta), mode)
    eta = brentq(f, 1e-6, math.pi / 2 - 1e-6, xtol=ROOT_TOL)
    return disturbance_of(eta)


def shor_preskill_threshold() -> float:
    """Root of 1 - 2 H(D) on (0, 1/2)."""
    return brentq(lambda D: 1 - 2 * binary_entropy(D), *ROOT_BRACKET, xtol=ROOT_TOL)

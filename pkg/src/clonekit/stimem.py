"""Cloning by stimulated emission: photon statistics and optical checks."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

import numpy as np
import sympy

from .qmath import KET0, StateVector, reduced_state
from .symspace import SymmetricSubspace
from .uqcm import bh_output, fidelity_formula

FOCK_BUDGET = 12


def _stim_weight(N: int, l: int) -> int:
    """(N+l)! / (N! l!)."""
    return math.comb(N + l, l)


@dataclass(frozen=True)
class EmissionModel:
    """Relative weights of l extra photons in the input mode out of k emitted."""

    N: int
    k: int
    weights: tuple[int, ...]

    def __post_init__(self):
        if self.N < 0 or self.k < 1:
            raise ValueError("need N >= 0 and k >= 1")
        if len(self.weights) != self.k + 1:
            raise ValueError("one weight per l = 0..k")
        base = self.weights[0]
        for l, w in enumerate(self.weights):
            if Fraction(w, base) != _stim_weight(self.N, l):
                raise ValueError(f"weight ratio at l={l} is not (N+l)!/(N! l!)")

    @cached_property
    def total(self) -> int:
        t = sum(self.weights)
        # closed-form sum (N+k+1)! / ((N+1)! k!) relative to the l = 0 weight
        if Fraction(t, self.weights[0]) != math.comb(self.N + self.k + 1, self.k):
            raise ArithmeticError("weight sum disagrees with the closed form")
        return t

    @cached_property
    def pmf(self) -> tuple[Fraction, ...]:
        return tuple(Fraction(w, self.total) for w in self.weights)

    @cached_property
    def mean_l(self) -> Fraction:
        return sum(l * p for l, p in enumerate(self.pmf))


def emission_pmf(N: int, k: int) -> EmissionModel:
    model = EmissionModel(N, k, tuple(_stim_weight(N, l) for l in range(k + 1)))
    if model.mean_l != Fraction(k * (N + 1), N + 2):
        raise ArithmeticError("mean stimulated count disagrees with k(N+1)/(N+2)")
    return model


def stim_fidelity(N: int, M: int, exact: bool = False):
    """Probability that a randomly picked output photon is in the input mode."""
    if not 1 <= N < M:
        raise ValueError("need M > N >= 1")
    F = (N + emission_pmf(N, M - N).mean_l) / M
    return F if exact else float(F)


def _create(state: dict, mode: int) -> dict:
    out = {}
    for occ, amp in state.items():
        n = occ[mode]
        new = occ[:mode] + (n + 1,) + occ[mode + 1:]
        out[new] = out.get(new, 0) + sympy.sqrt(n + 1) * amp
    return out


def fock_oracle(N: int, k: int, l: int) -> Fraction:
    """C(k, l) |<N+l, k-l| aV^dag^l aH^dag^(k-l) |N, 0>|^2 in exact arithmetic.

    Modes are (V, H); creation operators act on a sparse Fock vector with
    symbolic sqrt amplitudes.
    """
    if N < 0 or k < 0 or not 0 <= l <= k:
        raise ValueError("need N, k >= 0 and 0 <= l <= k")
    if N + k > FOCK_BUDGET:
        raise MemoryError(f"N + k = {N + k} exceeds the Fock budget {FOCK_BUDGET}")
    state = {(N, 0): sympy.Integer(1)}
    for _ in range(k - l):
        state = _create(state, 1)
    for _ in range(l):
        state = _create(state, 0)
    amp = state.get((N + l, k - l), sympy.Integer(0))
    # amplitudes are real products of square roots, so amp**2 is an integer
    sq = sympy.Rational(amp ** 2)
    return Fraction(int(sq.p), int(sq.q)) * math.comb(k, l)


def classical_amp_fidelity(mu_in: float, mu_out: float, Q: float) -> float:
    """Fidelity of a classical amplifier with mean photon numbers in/out and quality Q."""
    if not 0 < mu_in <= mu_out:
        raise ValueError("need mu_out >= mu_in > 0")
    if Q > 1:
        raise ValueError("Q must be <= 1")
    return (Q * mu_out * mu_in + mu_out + mu_in) / (Q * mu_out * mu_in + 2 * mu_out)


def timebin_fidelity(d: int, exact: bool = False):
    """Two photons in the prepared bin weigh twice one photon in any other bin."""
    if d < 2:
        raise ValueError("d must be >= 2")
    F = (2 * Fraction(1) + (d - 1) * Fraction(1, 2)) / (2 + (d - 1))
    return F if exact else float(F)


@dataclass(frozen=True)
class PdcCheck:
    passed: bool
    fidelity: Fraction
    state_fidelity: float
    overlap: float
    anticlone_fidelity: float

    def __bool__(self) -> bool:
        return self.passed


def pdc_state() -> StateVector:
    """First-order down-converted state mapped to qubits (signal 1, signal 2, idler).

    Signal occupations (n_psi, n_perp) go to the symmetric two-qubit state
    with those occupations; the idler photon in psi or perp goes to |0> or |1>.
    """
    sym = SymmetricSubspace(2, 2)
    idler = {(1, 0): np.array([1.0, 0.0]), (0, 1): np.array([0.0, 1.0])}
    terms = [
        (math.sqrt(2 / 3), (2, 0), (0, 1)),
        (-math.sqrt(1 / 3), (1, 1), (1, 0)),
    ]
    v = sum(c * np.kron(sym.basis_vector(s), idler[i]) for c, s, i in terms)
    return StateVector((2, 2, 2), v)


def pdc_first_order_check(tol: float = 1e-10) -> PdcCheck:
    psi = pdc_state()
    overlap = abs(psi.overlap(bh_output(KET0)))
    F_state = float(reduced_state(psi, [0]).matrix[0, 0].real)
    anti = float(reduced_state(psi, [2]).matrix[1, 1].real)
    F_count = Fraction(1) * Fraction(2, 3) + Fraction(1, 2) * Fraction(1, 3)
    passed = (abs(overlap - 1) < tol and abs(F_state - float(F_count)) < tol
              and abs(anti - 2 / 3) < tol and F_count == fidelity_formula(1, 2, 2, exact=True))
    return PdcCheck(passed, F_count, F_state, overlap, anti)

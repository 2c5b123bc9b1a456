"""Link between universal cloning and optimal state estimation on qubits."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .qmath import StateVector, bloch_vector
from .uqcm import INFINITY, _is_inf, measure_prepare_state, shrinking_eta

EXACT_TOL = 1e-12


@dataclass(frozen=True)
class ShrinkRecord:
    N: int
    M: float
    eta: float

    def __post_init__(self):
        if not 0 <= self.eta <= 1 + EXACT_TOL:
            raise ValueError("shrinking factor must lie in [0, 1]")
        if self.M == self.N and abs(self.eta - 1) > EXACT_TOL:
            raise ValueError("eta(N, N) must be 1")

    @classmethod
    def of(cls, N: int, M, d: int = 2) -> "ShrinkRecord":
        return cls(N, M, shrinking_eta(N, M, d))


def eta_star(N, exact: bool = False):
    """Shrinking factor N/(N+2) of optimal estimation from N qubit copies."""
    if _is_inf(N):
        return Fraction(1) if exact else 1.0
    if N < 1:
        raise ValueError("N must be >= 1")
    e = Fraction(N, N + 2)
    return e if exact else float(e)


def cascade_bound(N: int, M, d: int = 2) -> tuple[float, float, bool]:
    """(eta*(N)/eta*(M), eta(N, M), saturated) for qubits.

    Cloning N -> M and then estimating from M clones cannot beat estimating
    from N originals, so eta(N, M) eta*(M) <= eta*(N).
    """
    if d != 2:
        raise ValueError("the estimation bound is implemented for qubits")
    if M < N:
        raise ValueError("M must be >= N")
    bound = eta_star(N, exact=True) / eta_star(M, exact=True)
    eta = shrinking_eta(N, M, 2, exact=True)
    return float(bound), float(eta), abs(float(bound - eta)) < EXACT_TOL


def _eta_any(N, M):
    return eta_star(N, exact=True) if _is_inf(M) else shrinking_eta(N, M, 2, exact=True)


def multiplicativity_check(N: int, M, L) -> bool:
    """eta(N, M) eta(M, L) <= eta(N, L), with L = INFINITY meaning estimation."""
    if not N <= M <= L:
        raise ValueError("need N <= M <= L")
    if _is_inf(M):
        return True
    lhs = _eta_any(N, M) * _eta_any(M, L)
    return float(lhs - _eta_any(N, L)) <= EXACT_TOL


def estimation_fidelity(N: int) -> float:
    return (1 + eta_star(N)) / 2


def measured_shrinking(psi: StateVector, samples: int | None = None, rng=None) -> float:
    """Bloch-vector length ratio of the one-copy measure-and-prepare output."""
    m_in = bloch_vector(psi.projector())
    m_out = bloch_vector(measure_prepare_state(psi, samples=samples, rng=rng))
    return float(m_out @ m_in / (m_in @ m_in))


__all__ = [
    "INFINITY", "ShrinkRecord", "eta_star", "cascade_bound", "multiplicativity_check",
    "estimation_fidelity", "measured_shrinking",
]

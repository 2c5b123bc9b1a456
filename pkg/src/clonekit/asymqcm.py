"""Asymmetric universal 1 -> 1+1 cloning: circuit and operator formalisms."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmath import (
    PSI_MINUS, DimensionError, QuantumChannel, StateVector, fidelity_pure, max_entangled, reduced_state,
)
from .uqcm import bh_output

PARAM_TOL = 1e-12


@dataclass(frozen=True)
class AsymParams:
    """Parameters of the optimal asymmetric machine in both formalisms.

    ``a``, ``b`` weight the "all information in A" and "all information
    in B" programs; ``v``, ``x`` are the operator-form coefficients, with
    a = v - x and b = d x.
    """

    d: int
    a: float
    b: float
    v: float
    x: float

    def __post_init__(self):
        d, a, b, v, x = self.d, self.a, self.b, self.v, self.x
        if d < 2:
            raise ValueError("d must be >= 2")
        checks = {
            "a^2 + b^2 + 2ab/d = 1": a * a + b * b + 2 * a * b / d - 1,
            "v^2 + (d^2-1) x^2 = 1": v * v + (d * d - 1) * x * x - 1,
            "a = v - x": a - (v - x),
            "b = d x": b - d * x,
        }
        for name, err in checks.items():
            if abs(err) > PARAM_TOL:
                raise ValueError(f"invalid asymmetric parameters: {name} violated by {err:.3g}")

    @classmethod
    def from_ab(cls, d: int, a: float, b: float) -> "AsymParams":
        return cls(d, a, b, a + b / d, b / d)

    @classmethod
    def from_vx(cls, d: int, v: float, x: float) -> "AsymParams":
        return cls(d, v - x, d * x, v, x)

    @classmethod
    def from_b(cls, d: int, b: float) -> "AsymParams":
        """Solve the normalization for a >= 0 given 0 <= b <= 1."""
        if not 0 <= b <= 1:
            raise ValueError("b must lie in [0, 1]")
        a = -b / d + math.sqrt(max(0.0, b * b / d ** 2 - b * b + 1))
        return cls.from_ab(d, a, b)

    @classmethod
    def symmetric(cls, d: int) -> "AsymParams":
        b = math.sqrt(d / (2 * (d + 1)))
        return cls.from_ab(d, b, b)


def _plus(d: int) -> np.ndarray:
    return np.ones(d) / math.sqrt(d)


def asym_output_state(psi: StateVector, p: AsymParams) -> StateVector:
    """a |psi>_A |Phi+>_BM + b |psi>_B |Phi+>_AM, qudit order A, B, M."""
    d = p.d
    if psi.dims != (d,):
        raise DimensionError(f"expected a qudit of dimension {d}")
    phi = max_entangled(d).amplitudes.reshape(d, d)
    s = psi.amplitudes
    t_a = np.einsum("i,jk->ijk", s, phi)          # psi_A Phi_BM
    t_b = np.einsum("j,ik->ijk", s, phi)          # psi_B Phi_AM
    out = (p.a * t_a + p.b * t_b).ravel()
    return StateVector((d, d, d), out)


def asym_channel(p: AsymParams) -> QuantumChannel:
    """Input qudit -> clones (A, B), with the machine qudit M traced out."""
    d = p.d
    cols = [asym_output_state(StateVector((d,), np.eye(d)[k]), p).amplitudes for k in range(d)]
    return QuantumChannel.from_isometry(np.stack(cols, axis=1), (d,), (d, d), (d,))


def circuit_map_qubit(sigma: int, omega: int, xi: int) -> tuple[int, int, int]:
    """Basis action of the qubit information distributor (sums mod 2)."""
    return ((sigma + omega + xi) % 2, (sigma + omega) % 2, (sigma + xi) % 2)


def circuit_unitary() -> np.ndarray:
    U = np.zeros((8, 8))
    for s in range(2):
        for o in range(2):
            for x in range(2):
                out = circuit_map_qubit(s, o, x)
                U[out[0] * 4 + out[1] * 2 + out[2], s * 4 + o * 2 + x] = 1
    return U


def circuit_program(p: AsymParams) -> np.ndarray:
    """a |Phi+>_BM + b |0>_B |+>_M."""
    if p.d != 2:
        raise ValueError("the gate-level circuit is implemented for qubits only")
    return p.a * max_entangled(2).amplitudes + p.b * np.kron([1, 0], _plus(2))


def circuit_clone(psi: StateVector, p: AsymParams) -> StateVector:
    inp = np.kron(psi.amplitudes, circuit_program(p))
    return StateVector((2, 2, 2), circuit_unitary() @ inp)


def weyl_operator(d: int, m: int, n: int) -> np.ndarray:
    """U_{m,n} = sum_k exp(2 pi i k n / d) |k+m><k|."""
    U = np.zeros((d, d), dtype=complex)
    for k in range(d):
        U[(k + m) % d, k] = np.exp(2j * np.pi * k * n / d)
    return U


def cerf_operator(d: int, v: float, x: float) -> np.ndarray:
    """v 1 + x sum_{(m,n) != (0,0)} U_mn (x) U_mn^dag (x) 1 on qudits A, B, M.

    Only the restriction to inputs |psi>_A |Phi+>_BM is meaningful.  The
    adjoint on B makes sum_{all m,n} U (x) U^dag = d SWAP, which for d = 2
    is 1 + sum_k sigma_k (x) sigma_k.
    """
    if abs(v * v + (d * d - 1) * x * x - 1) > PARAM_TOL:
        raise ValueError("need v^2 + (d^2-1) x^2 = 1")
    eye = np.eye(d)
    V = v * np.eye(d ** 3, dtype=complex)
    for m in range(d):
        for n in range(d):
            if (m, n) == (0, 0):
                continue
            U = weyl_operator(d, m, n)
            V += x * np.kron(np.kron(U, U.conj().T), eye)
    return V


def cerf_clone(psi: StateVector, p: AsymParams) -> StateVector:
    d = p.d
    inp = np.kron(psi.amplitudes, max_entangled(d).amplitudes)
    return StateVector((d, d, d), cerf_operator(d, p.v, p.x) @ inp)


def asym_fidelities(p: AsymParams) -> tuple[float, float]:
    """Closed-form clone fidelities (F_A, F_B)."""
    d = p.d
    return 1 - (d - 1) * p.b ** 2 / d, 1 - (d - 1) * p.a ** 2 / d


def clone_fidelities(state: StateVector, psi: StateVector) -> tuple[float, float]:
    """Brute-force fidelities of the A and B marginals of a three-qudit output."""
    return (fidelity_pure(reduced_state(state, [0]), psi),
            fidelity_pure(reduced_state(state, [1]), psi))


def no_cloning_gap(f_a: float, f_b: float, d: int = 2) -> float:
    """Slack in the no-cloning inequality; zero on the optimal trade-off curve.

    For qubits this is sqrt((1-F_A)(1-F_B)) - [1/2 - (1-F_A) - (1-F_B)].
    For qudits the right-hand side becomes (d-1)/2 - (d/2)[(1-F_A) + (1-F_B)],
    which is the normalization a^2 + b^2 + 2ab/d = 1 rewritten in fidelities.
    """
    da, db = 1 - f_a, 1 - f_b
    return math.sqrt(max(0.0, da * db)) - ((d - 1) / 2 - d / 2 * (da + db))


def filip_projector(T: float) -> np.ndarray:
    """(2T - 1) 1 + 2 (1 - T) |Psi-><Psi-|."""
    if not 0.5 <= T <= 1:
        raise ValueError("transmittivity must lie in [1/2, 1]")
    s = PSI_MINUS.amplitudes
    return (2 * T - 1) * np.eye(4) + 2 * (1 - T) * np.outer(s, s.conj())


def filip_clone(psi: StateVector, T: float) -> StateVector:
    """Symmetric 1 -> 2 output with the projector applied to clone B and anticlone."""
    out = bh_output(psi).amplitudes
    P = np.kron(np.eye(2), filip_projector(T))
    return StateVector.normalized((2, 2, 2), P @ out)


def same_up_to_phase(u: StateVector, w: StateVector) -> float:
    """|<u|w>|; equals 1 when the vectors differ only by a global phase."""
    return abs(u.overlap(w))

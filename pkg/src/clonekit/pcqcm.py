"""Phase-covariant cloning of equatorial qubits and two-state cloning."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .qmath import (
    PAULIS, SIGMA_X, SIGMA_Y, SIGMA_Z, DensityMatrix, QuantumChannel, StateVector,
    max_entangled, reduced_state,
)

EQUATOR_TOL = 1e-10


@dataclass(frozen=True)
class EquatorState:
    phi: float

    def __post_init__(self):
        object.__setattr__(self, "phi", float(self.phi) % (2 * math.pi))

    @property
    def ket(self) -> StateVector:
        return StateVector((2,), np.array([1, np.exp(1j * self.phi)]) / math.sqrt(2))


def _equator(phi) -> StateVector:
    return phi.ket if isinstance(phi, EquatorState) else EquatorState(phi).ket


def _check_eta(eta: float):
    if not -1e-12 <= eta <= math.pi / 2 + 1e-12:
        raise ValueError("eta must lie in [0, pi/2]")


def equator_fidelities(eta: float) -> tuple[float, float]:
    """Closed-form (F_A, F_B) = ((1 + cos eta)/2, (1 + sin eta)/2)."""
    return (1 + math.cos(eta)) / 2, (1 + math.sin(eta)) / 2


def ng_unitary(eta: float) -> np.ndarray:
    """Two-qubit unitary |00> -> |00>, |10> -> cos|10> + sin|01>, completed."""
    c, s = math.cos(eta), math.sin(eta)
    U = np.zeros((4, 4))
    U[0, 0] = 1                     # |00> -> |00>
    U[2, 2], U[1, 2] = c, s         # |10> -> c|10> + s|01>
    U[1, 1], U[2, 1] = c, -s        # |01> -> c|01> - s|10>
    U[3, 3] = 1
    return U


def ng_clone(phi, eta: float) -> tuple[DensityMatrix, DensityMatrix]:
    """Phase-covariant cloning without ancilla; returns (rho_A, rho_B)."""
    _check_eta(eta)
    inp = np.kron(_equator(phi).amplitudes, [1, 0])
    out = StateVector((2, 2), ng_unitary(eta) @ inp)
    return reduced_state(out, [0]), reduced_state(out, [1])


# basis inputs on which the ancilla-assisted unitary is specified
_PC_DOMAIN = (0b000, 0b100, 0b011, 0b111)


def pc_unitary(eta: float) -> np.ndarray:
    """Three-qubit unitary of the ancilla-assisted machine (qubits A, B, M).

    Only |000>, |100>, |011>, |111> are prescribed; the other four basis
    states are sent to the orthogonal complement by a rotation of the same
    angle, which never influences inputs of the form |psi>|Phi+>.
    """
    c, s = math.cos(eta), math.sin(eta)
    U = np.zeros((8, 8))
    U[0b000, 0b000] = 1
    U[0b100, 0b100], U[0b010, 0b100] = c, s
    U[0b011, 0b011], U[0b101, 0b011] = c, s
    U[0b111, 0b111] = 1
    # completion
    U[0b001, 0b001] = 1
    U[0b110, 0b110] = 1
    U[0b010, 0b010], U[0b100, 0b010] = c, -s
    U[0b101, 0b101], U[0b011, 0b101] = c, -s
    return U


def _pc_input(psi: StateVector) -> np.ndarray:
    inp = np.kron(psi.amplitudes, max_entangled(2).amplitudes)
    outside = np.delete(inp, _PC_DOMAIN)
    if np.max(np.abs(outside), initial=0.0) > 1e-12:
        raise ValueError("input leaves the span on which the machine is defined")
    return inp


def pc_ancilla_output(phi, eta: float) -> StateVector:
    _check_eta(eta)
    return StateVector((2, 2, 2), pc_unitary(eta) @ _pc_input(_equator(phi)))


def pc_ancilla_clone(phi, eta: float) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """(rho_A, rho_B, rho_BM) for |psi(phi)>_A |Phi+>_BM under the machine."""
    out = pc_ancilla_output(phi, eta)
    return reduced_state(out, [0]), reduced_state(out, [1]), reduced_state(out, [1, 2])


def cerf_pc_operator(eta: float) -> np.ndarray:
    """F 1 + (1-F) Z Z 1 + sqrt(F(1-F)) (X X + Y Y) 1 with F = (1 + cos eta)/2."""
    F = (1 + math.cos(eta)) / 2
    I2 = np.eye(2)
    zz = np.kron(np.kron(SIGMA_Z, SIGMA_Z), I2)
    xy = np.kron(np.kron(SIGMA_X, SIGMA_X), I2) + np.kron(np.kron(SIGMA_Y, SIGMA_Y), I2)
    return F * np.eye(8) + (1 - F) * zz + math.sqrt(F * (1 - F)) * xy


def _permuted_isometry(V: np.ndarray, order) -> np.ndarray:
    n = len(order)
    t = V.reshape((2,) * n + (V.shape[1],))
    return t.transpose(list(order) + [n]).reshape(V.shape)


def ng_marginal_channel(eta: float, clone: str = "A") -> QuantumChannel:
    V = ng_unitary(eta) @ np.kron(np.eye(2), [[1], [0]])
    if clone == "B":
        V = _permuted_isometry(V, [1, 0])
    return QuantumChannel.from_isometry(V, (2,), (2,), (2,))


def pc_marginal_channel(eta: float, clone: str = "A") -> QuantumChannel:
    V = pc_unitary(eta) @ np.kron(np.eye(2), max_entangled(2).amplitudes[:, None])
    if clone == "B":
        V = _permuted_isometry(V, [1, 0, 2])
    return QuantumChannel.from_isometry(V, (2,), (2,), (2, 2))


def _apply_linear(ch: QuantumChannel, op: np.ndarray) -> np.ndarray:
    return sum(k @ op @ k.conj().T for k in ch.kraus)


def equator_shrinking(ch: QuantumChannel) -> tuple[float, float, bool]:
    """(eta_x, eta_y, unital) read off from the action on sigma_x, sigma_y and 1."""
    if ch.input_dims != (2,) or ch.output_dims != (2,):
        raise ValueError("expected a single-qubit channel")
    t_id = _apply_linear(ch, np.eye(2))
    eta_x = 0.5 * np.trace(SIGMA_X @ _apply_linear(ch, SIGMA_X)).real
    eta_y = 0.5 * np.trace(SIGMA_Y @ _apply_linear(ch, SIGMA_Y)).real
    unital = np.max(np.abs(t_id - np.eye(2))) <= EQUATOR_TOL
    return float(eta_x), float(eta_y), bool(unital)


def bb84_equator_equivalence(ch: QuantumChannel, n_phi: int = 24) -> bool:
    """True when ch acts as a uniform shrinking of the whole equator.

    Requires T(1) = 1 and T(sigma_x) = eta sigma_x, T(sigma_y) = eta sigma_y,
    then confirms T(psi(phi)) = eta psi(phi) + (1 - eta) 1/2 on a phi grid.
    """
    eta_x, eta_y, unital = equator_shrinking(ch)
    if not unital or abs(eta_x - eta_y) > EQUATOR_TOL:
        return False
    eta = eta_x
    for sx, op in zip((SIGMA_X, SIGMA_Y), PAULIS[:2]):
        if np.max(np.abs(_apply_linear(ch, op) - eta * sx)) > EQUATOR_TOL:
            return False
    for phi in 2 * np.pi * np.arange(n_phi) / n_phi:
        proj = _equator(phi).projector().matrix
        target = eta * proj + (1 - eta) * np.eye(2) / 2
        if np.max(np.abs(_apply_linear(ch, proj) - target)) > EQUATOR_TOL:
            return False
    return True


def two_state_fidelity(s: float) -> float:
    """Optimal symmetric 1 -> 2 fidelity for two pure qubit states with |<a|b>| = s."""
    if not 0 <= s <= 1:
        raise ValueError("overlap must lie in [0, 1]")
    if s < 1e-3:
        # the closed form cancels catastrophically near s = 0
        return 1 - s ** 2 / 4 + s ** 3 / 2 + 3 * s ** 4 / 16
    r = math.sqrt(1 - 2 * s + 9 * s * s)
    inner = -1 + 2 * s + 3 * s * s + (1 - s) * r
    return 0.5 + math.sqrt(2) / (32 * s) * (1 + s) * (3 - 3 * s + r) * math.sqrt(max(inner, 0.0))


def ng_channel(eta: float) -> QuantumChannel:
    """Qubit -> (A, B) map of the machine without ancilla."""
    V = ng_unitary(eta) @ np.kron(np.eye(2), [[1], [0]])
    return QuantumChannel.from_isometry(V, (2,), (2, 2), ())


def pc_channel(eta: float) -> QuantumChannel:
    """Qubit -> (A, B) map of the ancilla-assisted machine, ancilla traced out."""
    V = pc_unitary(eta) @ np.kron(np.eye(2), max_entangled(2).amplitudes[:, None])
    return QuantumChannel.from_isometry(V, (2,), (2, 2), (2,))

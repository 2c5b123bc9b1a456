"""Universal symmetric cloning machines and trivial baselines."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Callable, Union

import numpy as np

from .qmath import (
    KET0, KET1, MINUS_X, PLUS_X, PSI_PLUS, DensityMatrix, DimensionError,
    QuantumChannel, StateVector, apply_channel, fidelity_pure, reduced_state,
)
from .symspace import SymmetricSubspace, embed_copies, sym_dim, sym_projector

INFINITY = math.inf
"""Sentinel for M = infinity; formulas evaluate the analytic limit."""

MAX_WERNER_DIM = 4096
NO_SIGNALING_TOL = 1e-10


def _is_inf(m) -> bool:
    return isinstance(m, float) and math.isinf(m)


def fidelity_formula(N: int, M, d: int, exact: bool = False):
    """Optimal single-copy fidelity of universal symmetric N -> M cloning."""
    if d < 2 or N < 1 or M < N:
        raise ValueError(f"need d >= 2 and M >= N >= 1, got N={N}, M={M}, d={d}")
    if _is_inf(M):
        f = Fraction(N + 1, N + d)
    else:
        f = Fraction(N, M) + Fraction((M - N) * (N + 1), M * (N + d))
    return f if exact else float(f)


def shrinking_eta(N: int, M, d: int, exact: bool = False):
    """Shrinking factor (N/M)(M+d)/(N+d); N/(N+d) for M = INFINITY."""
    if d < 2 or N < 1 or M < N:
        raise ValueError(f"need d >= 2 and M >= N >= 1, got N={N}, M={M}, d={d}")
    if _is_inf(M):
        eta = Fraction(N, N + d)
    else:
        eta = Fraction(N * (M + d), M * (N + d))
    return eta if exact else float(eta)


def trivial_amplify_fidelity(N: int, M: int, d: int) -> float:
    """Forward the originals, add maximally mixed blanks, shuffle."""
    if M < N:
        raise ValueError("M must be >= N")
    return N / M + (M - N) / (d * M)


@dataclass(frozen=True)
class CloneReport:
    per_clone_fidelity: tuple[float, ...]
    shrinking_factor: float
    clone_states: tuple[DensityMatrix, ...]
    global_fidelity: float
    subspace: SymmetricSubspace
    sym_state: np.ndarray

    @cached_property
    def output_state(self) -> DensityMatrix:
        """Joint state of the M clones in the full d^M space."""
        cls = self.subspace.classes
        w = self.subspace.weights
        full = self.sym_state[np.ix_(cls, cls)] * np.outer(w, w)
        dims = (self.subspace.d,) * self.subspace.n
        return DensityMatrix(dims, full, check=full.shape[0] <= 1024)


def _clone_marginal(sub: SymmetricSubspace, rho_sym: np.ndarray, k: int) -> np.ndarray:
    d, n = sub.d, sub.n
    cls = np.moveaxis(sub.classes.reshape((d,) * n), k, 0).reshape(d, -1)
    w = np.moveaxis(sub.weights.reshape((d,) * n), k, 0).reshape(d, -1)
    block = rho_sym[cls[:, None, :], cls[None, :, :]]
    return np.einsum("abr,ar,br->ab", block, w, w)


def werner_clone(psi: StateVector, N: int, M: int) -> CloneReport:
    """Apply (d[N]/d[M]) S_M (psi^N (x) 1_{M-N}) S_M and analyse the clones.

    The output is supported on the symmetric subspace, so it is held in
    occupation-number coordinates; ``CloneReport.output_state`` expands it
    on demand.
    """
    if len(psi.dims) != 1:
        raise DimensionError("werner_clone expects a single-qudit input")
    d = psi.dims[0]
    if not M > N >= 1:
        raise ValueError(f"need M > N >= 1, got N={N}, M={M}")
    if d ** M > MAX_WERNER_DIM:
        raise MemoryError(f"d^M = {d ** M} exceeds the budget of {MAX_WERNER_DIM}")

    sub = SymmetricSubspace(d, M)
    psi_n = embed_copies(psi, N).amplitudes
    J = d ** (M - N)
    # V[:, j] = B^T (psi^N (x) e_j)
    cls = sub.classes.reshape(d ** N, J)
    w = sub.weights.reshape(d ** N, J)
    V = np.zeros((sub.dim, J), dtype=complex)
    np.add.at(V, (cls, np.broadcast_to(np.arange(J), cls.shape)), w * psi_n[:, None])
    norm = Fraction(sym_dim(d, N), sym_dim(d, M))
    rho_sym = float(norm) * (V @ V.conj().T)
    tr = np.trace(rho_sym).real
    if abs(tr - 1.0) > 1e-10:
        raise ArithmeticError(f"Werner map is not trace preserving here (trace {tr})")

    clones = []
    fids = []
    for k in range(M):
        rho1 = DensityMatrix((d,), _clone_marginal(sub, rho_sym, k))
        clones.append(rho1)
        fids.append(fidelity_pure(rho1, psi))
    eta = (d * fids[0] - 1) / (d - 1)
    u = sub.to_sym(embed_copies(psi, M).amplitudes)
    f_all = float(np.vdot(u, rho_sym @ u).real)
    return CloneReport(tuple(fids), eta, tuple(clones), f_all, sub, rho_sym)


# --- Buzek-Hillery -------------------------------------------------------

def _bh_images() -> tuple[np.ndarray, np.ndarray]:
    # images of |0> and -|1>; qubit order A, B, M (ancilla)
    psi_plus = PSI_PLUS.amplitudes
    img0 = np.sqrt(2 / 3) * np.kron(np.kron(KET0.amplitudes, KET0.amplitudes), KET1.amplitudes) \
        - np.sqrt(1 / 3) * np.kron(psi_plus, KET0.amplitudes)
    img1m = np.sqrt(2 / 3) * np.kron(np.kron(KET1.amplitudes, KET1.amplitudes), KET0.amplitudes) \
        - np.sqrt(1 / 3) * np.kron(psi_plus, KET1.amplitudes)
    return img0, img1m


def bh_isometry() -> np.ndarray:
    """8 x 2 isometry of the B-H machine: qubit -> clones A, B and ancilla M."""
    img0, img1m = _bh_images()
    return np.stack([img0, -img1m], axis=1)


def bh_output(psi: StateVector) -> StateVector:
    if psi.dims != (2,):
        raise DimensionError("the Buzek-Hillery machine clones qubits")
    return StateVector((2, 2, 2), bh_isometry() @ psi.amplitudes)


def buzek_hillery(psi: StateVector) -> tuple[DensityMatrix, DensityMatrix, DensityMatrix]:
    """(clone A, clone B, anticlone M)."""
    out = bh_output(psi)
    return reduced_state(out, [0]), reduced_state(out, [1]), reduced_state(out, [2])


def bh_channel() -> QuantumChannel:
    """The B-H machine as a qubit -> two-qubit channel (ancilla traced out)."""
    return QuantumChannel.from_isometry(bh_isometry(), (2,), (2, 2), (2,))


def werner_channel(d: int, M: int) -> QuantumChannel:
    """The 1 -> M Werner map as a channel, Kraus operators sqrt(d/d[M]) S_M (1 (x) |j>)."""
    S = sym_projector(d, M)
    c = math.sqrt(d / sym_dim(d, M))
    J = d ** (M - 1)
    kraus = []
    for j in range(J):
        e = np.zeros((J, 1))
        e[j] = 1
        kraus.append(c * S @ np.kron(np.eye(d), e))
    return QuantumChannel((d,), (d,) * M, tuple(kraus))


# --- measure-and-prepare baseline ---------------------------------------

def sphere_quadrature(n_theta: int = 8, n_phi: int = 16) -> tuple[np.ndarray, np.ndarray]:
    """Unit vectors and weights (summing to 1) for averaging over S^2.

    Gauss-Legendre in cos(theta) times a uniform grid in phi; exact for
    polynomials of low degree in the components.
    """
    x, wx = np.polynomial.legendre.leggauss(n_theta)
    phi = 2 * np.pi * np.arange(n_phi) / n_phi
    ct, ph = np.meshgrid(x, phi, indexing="ij")
    st = np.sqrt(1 - ct ** 2)
    dirs = np.stack([st * np.cos(ph), st * np.sin(ph), ct], axis=-1).reshape(-1, 3)
    weights = np.repeat(wx / 2, n_phi) / n_phi
    return dirs, weights


def random_directions(samples: int, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    v = rng.normal(size=(samples, 3))
    return v / np.linalg.norm(v, axis=1, keepdims=True)


def _direction_kets(b: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    theta = np.arccos(np.clip(b[..., 2], -1, 1))
    phi = np.arctan2(b[..., 1], b[..., 0])
    up = np.stack([np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)], axis=-1)
    down = np.stack([-np.exp(-1j * phi) * np.sin(theta / 2), np.cos(theta / 2)], axis=-1)
    return up, down


def measure_clone_fidelities(psi: StateVector, directions: np.ndarray) -> np.ndarray:
    """P+ F+ + P- F- for each measurement direction b."""
    up, down = _direction_kets(np.asarray(directions))
    p_up = np.abs(up.conj() @ psi.amplitudes) ** 2
    p_down = np.abs(down.conj() @ psi.amplitudes) ** 2
    # each copy of |+-b> has fidelity |<psi|+-b>|^2 = P+-
    return p_up * p_up + p_down * p_down


def trivial_measure_clone(psi: StateVector, samples: int | None = None, rng=None) -> float:
    """Average fidelity of measuring in a random basis and re-preparing twice.

    Uses sphere quadrature unless ``samples`` asks for Monte Carlo.
    """
    if psi.dims != (2,):
        raise DimensionError("measure-and-prepare cloning is defined for qubits")
    if samples is None:
        dirs, weights = sphere_quadrature()
        return float(weights @ measure_clone_fidelities(psi, dirs))
    return float(np.mean(measure_clone_fidelities(psi, random_directions(samples, rng))))


def measure_prepare_state(psi: StateVector, samples: int | None = None, rng=None) -> DensityMatrix:
    """Average state of each output copy of the measure-and-prepare cloner."""
    if samples is None:
        dirs, weights = sphere_quadrature()
    else:
        dirs = random_directions(samples, rng)
        weights = np.full(len(dirs), 1 / len(dirs))
    up, down = _direction_kets(dirs)
    p_up = np.abs(up.conj() @ psi.amplitudes) ** 2
    p_down = np.abs(down.conj() @ psi.amplitudes) ** 2
    rho = np.einsum("s,si,sj->ij", weights * p_up, up, up.conj()) \
        + np.einsum("s,si,sj->ij", weights * p_down, down, down.conj())
    rho = 0.5 * (rho + rho.conj().T)
    return DensityMatrix((2,), rho / np.trace(rho).real)


def measure_prepare_channel(n_theta: int = 8, n_phi: int = 16) -> QuantumChannel:
    """Measure along a quadrature direction, output two copies of the result."""
    dirs, weights = sphere_quadrature(n_theta, n_phi)
    up, down = _direction_kets(dirs)
    kraus = []
    for w, kets in zip(weights, zip(up, down)):
        for k in kets:
            kraus.append(math.sqrt(w) * np.outer(np.kron(k, k), k.conj()))
    return QuantumChannel((2,), (2, 2), tuple(kraus))


# --- no-signaling --------------------------------------------------------

ClonerLike = Union[QuantumChannel, Callable[[StateVector], DensityMatrix]]


def signaling_states(ch: ClonerLike) -> tuple[np.ndarray, np.ndarray]:
    """(rho_x, rho_z): equal mixtures of the outputs for the x and z eigenstates."""
    if isinstance(ch, QuantumChannel):
        if ch.input_dims != (2,) or ch.output_dims != (2, 2):
            raise DimensionError("no-signaling check needs a qubit -> two-qubit map")

        def run(s):
            return apply_channel(ch, s.projector()).matrix
    else:
        def run(s):
            return ch(s).matrix
    rho_x = 0.5 * (run(PLUS_X) + run(MINUS_X))
    rho_z = 0.5 * (run(KET0) + run(KET1))
    return rho_x, rho_z


def no_signaling_check(ch: ClonerLike) -> bool:
    rho_x, rho_z = signaling_states(ch)
    return bool(np.max(np.abs(rho_x - rho_z)) <= NO_SIGNALING_TOL)


_PERFECT_INPUTS = {"+x": PLUS_X, "-x": MINUS_X, "+z": KET0, "-z": KET1}


def perfect_cloner_outputs() -> dict[str, DensityMatrix]:
    """psi -> psi (x) psi on the four states of the signaling gedankenexperiment.

    No CPTP map does this; it is a lookup table, not a channel.
    """
    out = {}
    for label, s in _PERFECT_INPUTS.items():
        v = np.kron(s.amplitudes, s.amplitudes)
        out[label] = StateVector((2, 2), v).projector()
    return out


def perfect_cloner(psi: StateVector) -> DensityMatrix:
    table = perfect_cloner_outputs()
    for label, s in _PERFECT_INPUTS.items():
        if abs(abs(s.overlap(psi)) - 1) < 1e-12:
            return table[label]
    raise KeyError("the hypothetical perfect cloner is only tabulated on +-x, +-z")

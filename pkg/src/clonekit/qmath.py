"""Dense linear algebra and quantum primitives.

Everything here works on plain numpy arrays wrapped in small immutable
containers.  Subsystems are ordered big-endian: the first factor of a
tensor product is the most significant index.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce
from typing import Iterable, Sequence

import numpy as np
from scipy.stats import unitary_group

NORM_TOL = 1e-12
HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
PSD_TOL = 1e-10
CPTP_TOL = 1e-10

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
PAULIS = (SIGMA_X, SIGMA_Y, SIGMA_Z)


class DimensionError(ValueError):
    """Raised when subsystem dimensions do not line up."""


def check_dims(dims: Iterable[int]) -> tuple[int, ...]:
    dims = tuple(int(d) for d in dims)
    if not dims:
        raise DimensionError("at least one subsystem is required")
    if any(d < 2 for d in dims):
        raise DimensionError(f"every subsystem needs dimension >= 2, got {dims}")
    return dims


def total_dim(dims: Sequence[int]) -> int:
    return int(np.prod(dims, dtype=np.int64))


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class StateVector:
    """Normalized pure state over a tensor product of qudits."""

    dims: tuple[int, ...]
    amplitudes: np.ndarray

    def __post_init__(self):
        dims = check_dims(self.dims)
        amps = _readonly(np.ravel(self.amplitudes))
        if amps.size != total_dim(dims):
            raise DimensionError(
                f"{amps.size} amplitudes do not match dims {dims}")
        norm = np.vdot(amps, amps).real
        if abs(norm - 1.0) > NORM_TOL:
            raise ValueError(f"state is not normalized (|psi|^2 = {norm!r})")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def normalized(cls, dims, amplitudes) -> "StateVector":
        amps = np.asarray(amplitudes, dtype=complex).ravel()
        return cls(dims, amps / np.linalg.norm(amps))

    @property
    def dim(self) -> int:
        return self.amplitudes.size

    def projector(self) -> "DensityMatrix":
        return DensityMatrix(self.dims, np.outer(self.amplitudes, self.amplitudes.conj()))

    def overlap(self, other: "StateVector") -> complex:
        """Inner product <self|other>."""
        if self.dims != other.dims:
            raise DimensionError(f"{self.dims} vs {other.dims}")
        return complex(np.vdot(self.amplitudes, other.amplitudes))


@dataclass(frozen=True, eq=False)
class DensityMatrix:
    """Hermitian, positive, unit-trace operator.

    Pass ``check=False`` only for matrices whose validity is guaranteed by
    construction and whose eigen-decomposition would be too expensive.
    """

    dims: tuple[int, ...]
    matrix: np.ndarray
    check: bool = field(default=True, repr=False)

    def __post_init__(self):
        dims = check_dims(self.dims)
        mat = _readonly(self.matrix)
        n = total_dim(dims)
        if mat.shape != (n, n):
            raise DimensionError(f"matrix shape {mat.shape} does not match dims {dims}")
        if self.check:
            herm = np.max(np.abs(mat - mat.conj().T))
            if herm > HERMITIAN_TOL:
                raise ValueError(f"matrix is not Hermitian (max deviation {herm:.3g})")
            tr = np.trace(mat)
            if abs(tr - 1.0) > TRACE_TOL:
                raise ValueError(f"trace is {tr!r}, expected 1")
            lam = np.linalg.eigvalsh(mat)
            if lam[0] < -PSD_TOL:
                raise ValueError(f"matrix has negative eigenvalue {lam[0]:.3g}")
        object.__setattr__(self, "dims", dims)
        object.__setattr__(self, "matrix", mat)

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def expect(self, op: np.ndarray) -> float:
        return float(np.trace(self.matrix @ op).real)


def maximally_mixed(dims: Sequence[int]) -> DensityMatrix:
    n = total_dim(check_dims(dims))
    return DensityMatrix(dims, np.eye(n) / n)


@dataclass(frozen=True, eq=False)
class QuantumChannel:
    """CPTP map stored as Kraus operators of shape (out_dim, in_dim)."""

    input_dims: tuple[int, ...]
    output_dims: tuple[int, ...]
    kraus: tuple[np.ndarray, ...]

    def __post_init__(self):
        din = check_dims(self.input_dims)
        dout = check_dims(self.output_dims)
        ks = tuple(_readonly(k) for k in self.kraus)
        if not ks:
            raise ValueError("a channel needs at least one Kraus operator")
        shape = (total_dim(dout), total_dim(din))
        for k in ks:
            if k.shape != shape:
                raise DimensionError(f"Kraus operator shape {k.shape}, expected {shape}")
        gram = sum(k.conj().T @ k for k in ks)
        err = np.max(np.abs(gram - np.eye(shape[1])))
        if err > CPTP_TOL:
            raise ValueError(f"Kraus operators are not trace preserving (error {err:.3g})")
        object.__setattr__(self, "input_dims", din)
        object.__setattr__(self, "output_dims", dout)
        object.__setattr__(self, "kraus", ks)

    @classmethod
    def from_isometry(cls, isometry, input_dims, output_dims, env_dims) -> "QuantumChannel":
        """Channel rho -> Tr_env(V rho V^dag), V mapping input to output (x) env.

        The environment factors are the trailing ones of V's output.
        """
        V = np.asarray(isometry, dtype=complex)
        dout = total_dim(output_dims)
        denv = total_dim(env_dims)
        V3 = V.reshape(dout, denv, V.shape[1])
        return cls(input_dims, output_dims, tuple(V3[:, e, :] for e in range(denv)))

    @classmethod
    def unitary(cls, U, dims) -> "QuantumChannel":
        return cls(dims, dims, (np.asarray(U, dtype=complex),))

    def __call__(self, rho: DensityMatrix) -> DensityMatrix:
        return apply_channel(self, rho)


def _data(x):
    if isinstance(x, StateVector):
        return x.amplitudes
    return x.matrix


def tensor(a, b, *rest):
    """Kronecker product of states of the same kind."""
    if rest:
        return reduce(tensor, rest, tensor(a, b))
    if type(a) is not type(b):
        raise TypeError("tensor() needs two states of the same kind")
    dims = a.dims + b.dims
    data = np.kron(_data(a), _data(b))
    if isinstance(a, StateVector):
        return StateVector(dims, data)
    return DensityMatrix(dims, data, check=a.check and b.check)


def partial_trace(rho: DensityMatrix, keep: Iterable[int]) -> DensityMatrix:
    """Reduced state on the subsystems listed in ``keep`` (order preserved)."""
    keep = sorted(set(int(k) for k in keep))
    n = len(rho.dims)
    if not keep:
        raise ValueError("keep set must not be empty")
    if keep[0] < 0 or keep[-1] >= n:
        raise DimensionError(f"keep indices {keep} out of range for {n} subsystems")
    traced = [i for i in range(n) if i not in keep]
    t = rho.matrix.reshape(rho.dims + rho.dims)
    letters = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ"
    if 2 * n > len(letters):
        raise DimensionError("too many subsystems for partial_trace")
    row = list(letters[:n])
    col = list(letters[n:2 * n])
    for i in traced:
        col[i] = row[i]
    out = "".join(row[i] for i in keep) + "".join(col[i] for i in keep)
    red = np.einsum("".join(row) + "".join(col) + "->" + out, t)
    kd = tuple(rho.dims[i] for i in keep)
    m = total_dim(kd)
    return DensityMatrix(kd, red.reshape(m, m), check=rho.check)


def reduced_state(psi: StateVector, keep: Iterable[int]) -> DensityMatrix:
    """Reduced density matrix of a pure state, without forming |psi><psi|."""
    keep = sorted(set(int(k) for k in keep))
    n = len(psi.dims)
    if not keep:
        raise ValueError("keep set must not be empty")
    traced = [i for i in range(n) if i not in keep]
    t = psi.amplitudes.reshape(psi.dims).transpose(keep + traced)
    kd = tuple(psi.dims[i] for i in keep)
    m = total_dim(kd)
    t = t.reshape(m, -1)
    return DensityMatrix(kd, t @ t.conj().T)


def fidelity_pure(rho: DensityMatrix, psi: StateVector) -> float:
    """<psi|rho|psi>."""
    if rho.dims != psi.dims:
        raise DimensionError(f"{rho.dims} vs {psi.dims}")
    f = np.vdot(psi.amplitudes, rho.matrix @ psi.amplitudes)
    return float(f.real)


def apply_channel(ch: QuantumChannel, rho: DensityMatrix) -> DensityMatrix:
    if rho.dims != ch.input_dims:
        raise DimensionError(f"channel expects {ch.input_dims}, got {rho.dims}")
    out = sum(k @ rho.matrix @ k.conj().T for k in ch.kraus)
    return DensityMatrix(ch.output_dims, out)


def vn_entropy(rho: DensityMatrix) -> float:
    """Von Neumann entropy in bits, with 0 log 0 = 0."""
    lam = np.linalg.eigvalsh(rho.matrix)
    lam = lam[lam > 1e-15]
    return float(max(0.0, -np.sum(lam * np.log2(lam))))


def trace_distance(a: np.ndarray, b: np.ndarray) -> float:
    return 0.5 * float(np.sum(np.abs(np.linalg.eigvalsh(a - b))))


# --- qubit helpers -------------------------------------------------------

def bloch_vector(rho: DensityMatrix) -> np.ndarray:
    if rho.dims != (2,):
        raise DimensionError("Bloch vectors are defined for a single qubit")
    return np.array([rho.expect(s) for s in PAULIS])


def from_bloch(m) -> DensityMatrix:
    m = np.asarray(m, dtype=float)
    mat = 0.5 * (np.eye(2) + sum(c * s for c, s in zip(m, PAULIS)))
    return DensityMatrix((2,), mat)


def qubit(theta: float, phi: float) -> StateVector:
    """cos(theta/2)|0> + e^{i phi} sin(theta/2)|1>."""
    return StateVector((2,), [np.cos(theta / 2), np.exp(1j * phi) * np.sin(theta / 2)])


def orthogonal_qubit(psi: StateVector) -> StateVector:
    """psi_perp = conj(alpha)|1> - conj(beta)|0> (the universal-NOT image)."""
    if psi.dims != (2,):
        raise DimensionError("orthogonal_qubit needs a qubit")
    a, b = psi.amplitudes
    return StateVector((2,), [-np.conj(b), np.conj(a)])


def basis_state(dims: Sequence[int], index) -> StateVector:
    """Computational basis vector; ``index`` is flat or a tuple of digits."""
    dims = check_dims(dims)
    if not np.isscalar(index):
        index = int(np.ravel_multi_index(tuple(index), dims))
    v = np.zeros(total_dim(dims), dtype=complex)
    v[index] = 1.0
    return StateVector(dims, v)


KET0 = basis_state((2,), 0)
KET1 = basis_state((2,), 1)
PLUS_X = StateVector((2,), np.array([1, 1]) / np.sqrt(2))
MINUS_X = StateVector((2,), np.array([1, -1]) / np.sqrt(2))
PLUS_Y = StateVector((2,), np.array([1, 1j]) / np.sqrt(2))
MINUS_Y = StateVector((2,), np.array([1, -1j]) / np.sqrt(2))
PHI_PLUS = StateVector((2, 2), np.array([1, 0, 0, 1]) / np.sqrt(2))
PHI_MINUS = StateVector((2, 2), np.array([1, 0, 0, -1]) / np.sqrt(2))
PSI_PLUS = StateVector((2, 2), np.array([0, 1, 1, 0]) / np.sqrt(2))
PSI_MINUS = StateVector((2, 2), np.array([0, 1, -1, 0]) / np.sqrt(2))


def max_entangled(d: int) -> StateVector:
    """sum_k |kk> / sqrt(d)."""
    return StateVector((d, d), np.eye(d).ravel() / np.sqrt(d))


# --- random objects ------------------------------------------------------

def haar_state(d: int, rng=None) -> StateVector:
    rng = np.random.default_rng(rng)
    v = rng.normal(size=d) + 1j * rng.normal(size=d)
    return StateVector.normalized((d,), v)


def haar_unitary(d: int, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    return unitary_group.rvs(d, random_state=rng)


def random_channel(input_dims, output_dims, n_kraus: int = 3, rng=None) -> QuantumChannel:
    """Random CPTP map obtained from a Haar-random isometry."""
    din = total_dim(input_dims)
    dout = total_dim(output_dims)
    U = haar_unitary(dout * n_kraus, rng)
    if din > dout * n_kraus:
        raise DimensionError("not enough Kraus operators for an isometry")
    V = U[:, :din]
    return QuantumChannel.from_isometry(V, input_dims, output_dims, (n_kraus,))

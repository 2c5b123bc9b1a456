"""Gaussian cloning of coherent states in the Heisenberg picture.

Quadratures are interleaved (x_0, p_0, x_1, p_1, ...) with hbar = 1, so the
vacuum has variance 1/2 per quadrature and a = (x + i p)/sqrt(2).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .uqcm import INFINITY, _is_inf

SYMPLECTIC_TOL = 1e-10
SYMMETRY_TOL = 1e-12
UNCERTAINTY_TOL = 1e-10
VACUUM_VAR = 0.5


def symplectic_form(n_modes: int) -> np.ndarray:
    return np.kron(np.eye(n_modes), np.array([[0.0, 1.0], [-1.0, 0.0]]))


def _readonly(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GaussianEnsemble:
    """First and second moments of an n-mode Gaussian state."""

    n_modes: int
    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        n = self.n_modes
        mean, cov = _readonly(self.mean), _readonly(self.cov)
        if mean.shape != (2 * n,) or cov.shape != (2 * n, 2 * n):
            raise ValueError(f"moments do not match {n} modes")
        if np.max(np.abs(cov - cov.T), initial=0.0) > SYMMETRY_TOL:
            raise ValueError("covariance matrix is not symmetric")
        lam = np.linalg.eigvalsh(cov + 0.5j * symplectic_form(n))
        if lam.min() < -UNCERTAINTY_TOL:
            raise ValueError(f"covariance violates the uncertainty principle ({lam.min():.3g})")
        object.__setattr__(self, "mean", mean)
        object.__setattr__(self, "cov", cov)

    def mode(self, *modes: int) -> "GaussianEnsemble":
        idx = np.array([[2 * m, 2 * m + 1] for m in modes]).ravel()
        return GaussianEnsemble(len(modes), self.mean[idx], self.cov[np.ix_(idx, idx)])

    def variances(self, m: int) -> tuple[float, float]:
        return float(self.cov[2 * m, 2 * m]), float(self.cov[2 * m + 1, 2 * m + 1])

    def quadratures(self, m: int) -> tuple[float, float]:
        return float(self.mean[2 * m]), float(self.mean[2 * m + 1])

    def direct_sum(self, other: "GaussianEnsemble") -> "GaussianEnsemble":
        n = self.n_modes + other.n_modes
        cov = np.zeros((2 * n, 2 * n))
        k = 2 * self.n_modes
        cov[:k, :k], cov[k:, k:] = self.cov, other.cov
        return GaussianEnsemble(n, np.concatenate([self.mean, other.mean]), cov)

    def apply(self, T: "QuadratureTransform") -> "GaussianEnsemble":
        if T.n_modes != self.n_modes:
            raise ValueError("transform and ensemble disagree on mode count")
        S = T.matrix
        cov = S @ self.cov @ S.T
        return GaussianEnsemble(self.n_modes, S @ self.mean, 0.5 * (cov + cov.T))


def vacuum(n_modes: int = 1) -> GaussianEnsemble:
    return GaussianEnsemble(n_modes, np.zeros(2 * n_modes), VACUUM_VAR * np.eye(2 * n_modes))


def coherent(x: float, p: float) -> GaussianEnsemble:
    return GaussianEnsemble(1, [x, p], VACUUM_VAR * np.eye(2))


def squeezed(x: float, p: float, r: float) -> GaussianEnsemble:
    """Minimum-uncertainty state with x squeezed by kappa = exp(r)."""
    k = math.exp(r)
    return GaussianEnsemble(1, [x, p], np.diag([VACUUM_VAR / k ** 2, VACUUM_VAR * k ** 2]))


def copies(state: GaussianEnsemble, n: int) -> GaussianEnsemble:
    out = state
    for _ in range(n - 1):
        out = out.direct_sum(state)
    return out


@dataclass(frozen=True)
class QuadratureTransform:
    """Real linear map on quadratures; must preserve the commutators."""

    matrix: np.ndarray
    n_modes: int = field(init=False)

    def __post_init__(self):
        S = _readonly(self.matrix)
        if S.ndim != 2 or S.shape[0] != S.shape[1] or S.shape[0] % 2:
            raise ValueError("transform must be a square 2n x 2n matrix")
        n = S.shape[0] // 2
        err = symplectic_defect(S)
        if err > SYMPLECTIC_TOL:
            raise ValueError(f"transform is not symplectic (defect {err:.3g})")
        object.__setattr__(self, "matrix", S)
        object.__setattr__(self, "n_modes", n)

    def __matmul__(self, other: "QuadratureTransform") -> "QuadratureTransform":
        return QuadratureTransform(self.matrix @ other.matrix)

    def inverse(self) -> "QuadratureTransform":
        # S^{-1} = -Omega S^T Omega for symplectic S
        O = symplectic_form(self.n_modes)
        return QuadratureTransform(-O @ self.matrix.T @ O)

    def embed(self, n_total: int, modes: Sequence[int]) -> "QuadratureTransform":
        """Act on ``modes`` of an n_total-mode system, identity elsewhere."""
        if len(modes) != self.n_modes or len(set(modes)) != len(modes):
            raise ValueError("need one distinct target mode per transform mode")
        idx = np.array([[2 * m, 2 * m + 1] for m in modes]).ravel()
        S = np.eye(2 * n_total)
        S[np.ix_(idx, idx)] = self.matrix
        return QuadratureTransform(S)


def symplectic_defect(S: np.ndarray) -> float:
    O = symplectic_form(S.shape[0] // 2)
    return float(np.max(np.abs(S @ O @ S.T - O)))


def bogoliubov(U: np.ndarray, W: np.ndarray | None = None) -> QuadratureTransform:
    """Lift a' = U a + W a^dag to quadratures.

    With A = U + W and B = U - W, each (j, k) block is
    [[Re A, -Im B], [Im A, Re B]].
    """
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    W = np.zeros_like(U) if W is None else np.atleast_2d(np.asarray(W, dtype=complex))
    A, B = U + W, U - W
    n = U.shape[0]
    S = np.zeros((2 * n, 2 * n))
    S[0::2, 0::2], S[0::2, 1::2] = A.real, -B.imag
    S[1::2, 0::2], S[1::2, 1::2] = A.imag, B.real
    return QuadratureTransform(S)


def amplifier(G: float) -> QuadratureTransform:
    """Phase-insensitive amplifier on (signal, ancilla z)."""
    if G < 1:
        raise ValueError("gain must be >= 1")
    g, h = math.sqrt(G), math.sqrt(G - 1)
    return bogoliubov(np.diag([g, g]), np.array([[0, h], [h, 0]]))


def beam_splitter(T: float) -> QuadratureTransform:
    """Phase-free splitter: a0' = sqrt(T) a0 + sqrt(1-T) a1, a1' = sqrt(1-T) a0 - sqrt(T) a1."""
    if not 0 <= T <= 1:
        raise ValueError("transmittivity must lie in [0, 1]")
    t, r = math.sqrt(T), math.sqrt(1 - T)
    return bogoliubov(np.array([[t, r], [r, -t]]))


def dft_matrix(n: int) -> np.ndarray:
    j = np.arange(n)
    return np.exp(2j * np.pi * np.outer(j, j) / n) / math.sqrt(n)


def dft(n: int) -> QuadratureTransform:
    if n < 1:
        raise ValueError("need at least one mode")
    return bogoliubov(dft_matrix(n))


def phase_rotation(theta: float, n_modes: int = 1) -> QuadratureTransform:
    return bogoliubov(np.exp(1j * theta) * np.eye(n_modes))


def squeezed_variant(r: float, n_modes: int = 1) -> QuadratureTransform:
    """x -> x / kappa, p -> kappa p with kappa = exp(r), on every mode."""
    if not math.isfinite(r):
        raise ValueError("squeezing must be finite")
    k = math.exp(r)
    return QuadratureTransform(np.kron(np.eye(n_modes), np.diag([1 / k, k])))


def sgc_bound(N: int, M) -> tuple[float, float]:
    """Minimal added variance 1/N - 1/M and the resulting coherent-state fidelity."""
    if N < 1 or M < N:
        raise ValueError("need M >= N >= 1")
    if _is_inf(M):
        return 1 / N, N / (N + 1)
    return 1 / N - 1 / M, M * N / (M * N + M - N)


def gaussian_overlap(a: GaussianEnsemble, b: GaussianEnsemble) -> float:
    """Tr(rho_a rho_b) for single-mode Gaussians; the fidelity when b is pure."""
    if a.n_modes != 1 or b.n_modes != 1:
        raise ValueError("overlap formula implemented for single modes")
    V = a.cov + b.cov
    d = a.mean - b.mean
    return float(math.exp(-0.5 * d @ np.linalg.solve(V, d)) / math.sqrt(np.linalg.det(V)))


@dataclass(frozen=True)
class NetworkRun:
    """Output of an N -> M cloning network.

    Modes 0..M-1 carry the clones and mode M the anticlone.  ``stages`` are
    the embedded transforms in application order.
    """

    N: int
    M: int
    output: GaussianEnsemble
    stages: tuple[QuadratureTransform, ...]

    @property
    def transform(self) -> QuadratureTransform:
        T = self.stages[0]
        for s in self.stages[1:]:
            T = s @ T
        return T

    @property
    def anticlone_mode(self) -> int:
        return self.M

    def clone(self, k: int) -> GaussianEnsemble:
        if not 0 <= k < self.M:
            raise IndexError(k)
        return self.output.mode(k)

    def anticlone(self) -> GaussianEnsemble:
        return self.output.mode(self.M)

    def added_noise(self, k: int, input_var: tuple[float, float] = (VACUUM_VAR, VACUUM_VAR)):
        vx, vp = self.output.variances(k)
        return vx - input_var[0], vp - input_var[1]


def _check_copies(ens: GaussianEnsemble, N: int):
    if ens.n_modes != N:
        raise ValueError(f"expected {N} input modes, got {ens.n_modes}")
    first = ens.mode(0)
    for k in range(1, N):
        m = ens.mode(k)
        if np.max(np.abs(m.mean - first.mean)) > SYMMETRY_TOL or \
                np.max(np.abs(m.cov - first.cov)) > SYMMETRY_TOL:
            raise ValueError("input copies are not identical")
    off = ens.cov.copy()
    for k in range(N):
        off[2 * k:2 * k + 2, 2 * k:2 * k + 2] = 0
    if np.max(np.abs(off), initial=0.0) > SYMMETRY_TOL:
        raise ValueError("input copies are correlated")


def network_stages(N: int, M: int) -> tuple[QuadratureTransform, ...]:
    """DFT_N on the inputs, amplifier of gain M/N on (mode 0, z), DFT_M on the clones."""
    if not 1 <= N < M:
        raise ValueError("need M > N >= 1")
    total = M + 1
    z = M
    return (
        dft(N).embed(total, range(N)),
        amplifier(M / N).embed(total, [0, z]),
        dft(M).embed(total, range(M)),
    )


def clone_network(N: int, M: int, ens: GaussianEnsemble,
                  blank: GaussianEnsemble | None = None) -> NetworkRun:
    """Run N identical copies through the N -> M network.

    Blank modes and the amplifier ancilla start in ``blank`` (vacuum by default).
    """
    if M <= N:
        raise ValueError("need M > N")
    _check_copies(ens, N)
    blank = vacuum() if blank is None else blank
    state = ens.direct_sum(copies(blank, M - N + 1))
    stages = network_stages(N, M)
    for s in stages:
        state = state.apply(s)
    return NetworkRun(N, M, state, stages)


def squeezed_clone(N: int, M: int, ens: GaussianEnsemble, r: float, matched: bool = True) -> NetworkRun:
    """Clone squeezed inputs, either with matched squeezed ancillae or plain vacuum.

    Matching conjugates the network by the rescaling, which is equivalent to
    feeding blanks and ancilla squeezed by the same r.
    """
    if not matched:
        return clone_network(N, M, ens)
    S = squeezed_variant(r)
    unsq = S.inverse()
    inner = ens
    for k in range(N):
        inner = inner.apply(unsq.embed(N, [k]))
    run = clone_network(N, M, inner)
    out = run.output
    for k in range(M + 1):
        out = out.apply(S.embed(M + 1, [k]))
    stages = (tuple(unsq.embed(M + 1, [k]) for k in range(M + 1))
              + run.stages + tuple(S.embed(M + 1, [k]) for k in range(M + 1)))
    return NetworkRun(N, M, out, stages)


def arthurs_kelly_products(ens: GaussianEnsemble, modes=(0, 1), input_var: float = VACUUM_VAR):
    """Measured-variance and added-noise products for x on one clone and p on the other."""
    i, j = modes
    xi, pi = ens.variances(i)
    xj, pj = ens.variances(j)
    measured = (xi * pj, xj * pi)
    added = ((xi - input_var) * (pj - input_var), (xj - input_var) * (pi - input_var))
    return measured, added


def arthurs_kelly_check(ens: GaussianEnsemble, modes=(0, 1), input_var: float = VACUUM_VAR,
                        tol: float = SYMPLECTIC_TOL) -> bool:
    measured, added = arthurs_kelly_products(ens, modes, input_var)
    return all(m >= 1 - tol for m in measured) and all(a >= 0.25 - tol for a in added)


FINITE_DIST_THRESHOLD = 0.5 + 1 / math.sqrt(2)


def _finite_dist_branches(sigma2: float) -> tuple[float, float]:
    upper = (4 * sigma2 + 2) / (6 * sigma2 + 1)
    lower = 1 / ((3 - 2 * math.sqrt(2)) * sigma2 + 1)
    return upper, lower


def finite_dist_fidelity(Sigma2: float) -> tuple[float, float]:
    """Single-clone fidelity and gain for coherent states drawn with spread Sigma2."""
    if Sigma2 < 0:
        raise ValueError("Sigma2 must be >= 0")
    upper, lower = _finite_dist_branches(Sigma2)
    F = upper if Sigma2 >= FINITE_DIST_THRESHOLD else lower
    G = 8 * Sigma2 ** 2 / (2 * Sigma2 + 1) ** 2
    return F, G


__all__ = [
    "INFINITY", "GaussianEnsemble", "QuadratureTransform", "NetworkRun", "symplectic_form",
    "symplectic_defect", "vacuum", "coherent", "squeezed", "copies", "bogoliubov", "amplifier",
    "beam_splitter", "dft", "dft_matrix", "phase_rotation", "squeezed_variant", "sgc_bound",
    "gaussian_overlap", "network_stages", "clone_network", "squeezed_clone",
    "arthurs_kelly_products", "arthurs_kelly_check", "finite_dist_fidelity",
    "FINITE_DIST_THRESHOLD",
]

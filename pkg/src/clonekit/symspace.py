"""Bosonic (symmetric) subspace of n qudits."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .qmath import StateVector, check_dims

# Limits for the explicit permutation-sum projector.
MAX_PROJECTOR_DIM = 4096
MAX_PERMUTATIONS = math.factorial(8)


class BudgetError(MemoryError):
    """Raised when a dense construction would exceed the desk-scale budget."""


def sym_dim(d: int, n: int) -> int:
    """Dimension C(d+n-1, n) of the symmetric subspace."""
    if d < 2 or n < 0:
        raise ValueError(f"need d >= 2 and n >= 0, got d={d}, n={n}")
    return math.comb(d + n - 1, n)


def occupations(d: int, n: int) -> list[tuple[int, ...]]:
    """Occupation vectors of length d summing to n, lexicographically sorted."""
    out = []
    for bars in itertools.combinations(range(n + d - 1), d - 1):
        prev = -1
        occ = []
        for b in bars:
            occ.append(b - prev - 1)
            prev = b
        occ.append(n + d - 2 - prev)
        out.append(tuple(occ))
    return sorted(out)


def permutation_operator(d: int, perm) -> np.ndarray:
    """Matrix permuting the tensor factors of (C^d)^{(x)n}.

    Factor ``k`` of the input ends up at position ``perm[k]``.
    """
    n = len(perm)
    idx = np.arange(d ** n).reshape((d,) * n)
    inv = np.argsort(perm)
    moved = idx.transpose(inv).ravel()
    P = np.zeros((d ** n, d ** n))
    P[np.arange(d ** n), moved] = 1.0
    return P


def sym_projector(d: int, n: int) -> np.ndarray:
    """Average of all n! permutation operators on (C^d)^{(x)n}."""
    dim = d ** n
    if dim > MAX_PROJECTOR_DIM or math.factorial(n) > MAX_PERMUTATIONS:
        raise BudgetError(f"projector for d={d}, n={n} exceeds the dense budget")
    if n == 0:
        return np.ones((1, 1))
    idx = np.arange(dim).reshape((d,) * n)
    S = np.zeros((dim, dim))
    rows = np.arange(dim)
    for perm in itertools.permutations(range(n)):
        np.add.at(S, (rows, idx.transpose(perm).ravel()), 1.0)
    return S / math.factorial(n)


def embed_copies(psi: StateVector, n: int) -> StateVector:
    """psi^{(x)n}."""
    if len(psi.dims) != 1:
        raise ValueError("embed_copies expects a single-qudit state")
    v = np.ones(1, dtype=complex)
    for _ in range(n):
        v = np.kron(v, psi.amplitudes)
    return StateVector(psi.dims * n, v)


@dataclass(frozen=True)
class SymmetricSubspace:
    """Occupation-number basis of the symmetric subspace of n qudits.

    Every computational basis string belongs to exactly one occupation
    class, so the isometry B from the symmetric subspace into the full
    space has a single nonzero per row.  ``classes`` stores that class
    per flat index and ``weights`` the entry 1/sqrt(class size).
    """

    d: int
    n: int
    basis: tuple[tuple[int, ...], ...] = field(init=False)
    index_map: dict = field(init=False, repr=False)

    def __post_init__(self):
        check_dims([self.d])
        if self.n < 1:
            raise ValueError("n must be >= 1")
        basis = tuple(occupations(self.d, self.n))
        object.__setattr__(self, "basis", basis)
        object.__setattr__(self, "index_map", {occ: i for i, occ in enumerate(basis)})

    @property
    def dim(self) -> int:
        return len(self.basis)

    @property
    def full_dim(self) -> int:
        return self.d ** self.n

    @cached_property
    def classes(self) -> np.ndarray:
        digits = np.indices((self.d,) * self.n).reshape(self.n, -1)
        counts = np.stack([(digits == a).sum(axis=0) for a in range(self.d)], axis=1)
        # np.unique sorts rows lexicographically, matching self.basis
        uniq, cls = np.unique(counts, axis=0, return_inverse=True)
        assert [tuple(r) for r in uniq] == list(self.basis)
        cls = cls.ravel()
        cls.setflags(write=False)
        return cls

    @cached_property
    def class_sizes(self) -> np.ndarray:
        return np.array([math.factorial(self.n) // math.prod(math.factorial(k) for k in occ)
                         for occ in self.basis])

    @cached_property
    def weights(self) -> np.ndarray:
        w = 1.0 / np.sqrt(self.class_sizes[self.classes])
        w.setflags(write=False)
        return w

    def isometry(self) -> np.ndarray:
        """Dense full_dim x dim matrix whose columns are the symmetric basis."""
        B = np.zeros((self.full_dim, self.dim))
        B[np.arange(self.full_dim), self.classes] = self.weights
        return B

    def projector(self) -> np.ndarray:
        B = self.isometry()
        return B @ B.T

    def to_sym(self, vecs: np.ndarray) -> np.ndarray:
        """B^T applied to full-space vector(s) along axis 0."""
        vecs = np.asarray(vecs)
        shape = (self.dim,) + vecs.shape[1:]
        out = np.zeros(shape, dtype=np.result_type(vecs, float))
        np.add.at(out, self.classes, self.weights.reshape((-1,) + (1,) * (vecs.ndim - 1)) * vecs)
        return out

    def from_sym(self, coords: np.ndarray) -> np.ndarray:
        """B applied to symmetric-subspace coordinates along axis 0."""
        coords = np.asarray(coords)
        return self.weights.reshape((-1,) + (1,) * (coords.ndim - 1)) * coords[self.classes]

    def basis_vector(self, occ) -> np.ndarray:
        """Normalized symmetric state with the given occupation numbers."""
        e = np.zeros(self.dim)
        e[self.index_map[tuple(occ)]] = 1.0
        return self.from_sym(e)

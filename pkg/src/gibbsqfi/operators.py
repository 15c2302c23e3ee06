"""Dense Hermitian operators, eigensystems and Gibbs states.

Operators are plain ``numpy`` arrays of shape ``(D, D)``.  Units are
hbar = k_B = 1 throughout, so inverse temperatures and energies are
dimensionless.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np
from scipy.special import logsumexp

from .errors import DimensionError, NotHermitianError, RankDeficientError, SizeGuardError

HERMITIAN_ATOL = 1e-12
DEGENERACY_RTOL = 1e-9
MAX_DENSE_DIM = 2**14
MIN_POPULATION = 1e-300

SIGMA_X = np.array([[0, 1], [1, 0]], dtype=complex)
SIGMA_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
SIGMA_Z = np.array([[1, 0], [0, -1]], dtype=complex)
IDENTITY_2 = np.eye(2, dtype=complex)


def as_hermitian(A, atol: float = HERMITIAN_ATOL) -> np.ndarray:
    """Validate ``A`` as a square Hermitian matrix and return a complex copy.

    The returned matrix is exactly Hermitian (symmetrized), so rounding noise
    below ``atol`` is removed.
    """
    A = np.array(A, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1] or A.shape[0] < 1:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    asym = np.abs(A - A.conj().T)
    worst = float(asym.max())
    if worst > atol:
        i, j = np.unravel_index(np.argmax(asym), asym.shape)
        raise NotHermitianError(
            f"matrix is not Hermitian: |A[{i},{j}] - conj(A[{j},{i}])| = {worst:.3e} > {atol:g}"
        )
    return (A + A.conj().T) / 2


def random_hermitian(D: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    """GUE-like random Hermitian matrix."""
    X = rng.normal(size=(D, D)) + 1j * rng.normal(size=(D, D))
    return scale * (X + X.conj().T) / 2


def _check_same_dim(*ops):
    dims = {op.shape[0] for op in ops}
    if len(dims) != 1:
        raise DimensionError(f"dimension mismatch: {sorted(dims)}")


@dataclass(frozen=True)
class EigenSystem:
    """Ascending eigenvalues with eigenvectors stored as columns."""

    energies: np.ndarray
    vectors: np.ndarray

    @property
    def dim(self) -> int:
        return len(self.energies)

    def reconstruct(self) -> np.ndarray:
        return (self.vectors * self.energies) @ self.vectors.conj().T

    def to_basis(self, A: np.ndarray) -> np.ndarray:
        """Matrix elements of ``A`` in this eigenbasis."""
        return self.vectors.conj().T @ A @ self.vectors

    def from_basis(self, A: np.ndarray) -> np.ndarray:
        return self.vectors @ A @ self.vectors.conj().T


def _fix_phases(V: np.ndarray) -> np.ndarray:
    # largest-magnitude component of each column made real positive
    k = np.argmax(np.abs(V), axis=0)
    lead = V[k, np.arange(V.shape[1])]
    return V * (np.abs(lead) / lead)


def eigendecompose(H) -> EigenSystem:
    H = as_hermitian(H)
    w, V = np.linalg.eigh(H)
    return EigenSystem(energies=w, vectors=_fix_phases(V))


@dataclass(frozen=True)
class DegeneracyPartition:
    """Groups of indices whose values agree within ``tolerance * scale``."""

    groups: tuple
    tolerance: float
    labels: np.ndarray

    @property
    def size(self) -> int:
        return len(self.labels)

    def same_group(self) -> np.ndarray:
        """Boolean ``(D, D)`` mask, True where i and j share a group."""
        return self.labels[:, None] == self.labels[None, :]


def degeneracy_partition(values, tolerance: float = DEGENERACY_RTOL) -> DegeneracyPartition:
    """Partition sorted ``values`` into clusters of (numerically) equal entries.

    Adjacent values are merged when their gap is at most
    ``tolerance * max(1, spread)``.
    """
    values = np.asarray(values, dtype=float)
    if values.ndim != 1 or len(values) == 0:
        raise DimensionError("values must be a non-empty 1D array")
    order = np.argsort(values, kind="stable")
    v = values[order]
    scale = max(1.0, float(v[-1] - v[0]))
    breaks = np.diff(v) > tolerance * scale
    sorted_labels = np.concatenate([[0], np.cumsum(breaks)])
    labels = np.empty(len(v), dtype=int)
    labels[order] = sorted_labels
    groups = tuple(np.flatnonzero(labels == g) for g in range(sorted_labels[-1] + 1))
    return DegeneracyPartition(groups=groups, tolerance=tolerance, labels=labels)


@dataclass(frozen=True)
class GibbsState:
    """Thermal state exp(-beta H)/Z stored in the eigenbasis of H."""

    beta: float
    eigen: EigenSystem
    populations: np.ndarray
    log_populations: np.ndarray

    @property
    def dim(self) -> int:
        return self.eigen.dim

    @property
    def energies(self) -> np.ndarray:
        return self.eigen.energies

    @cached_property
    def partition(self) -> DegeneracyPartition:
        """Energy degeneracy partition (equal energies <=> equal populations)."""
        return degeneracy_partition(self.eigen.energies)

    @cached_property
    def matrix(self) -> np.ndarray:
        V = self.eigen.vectors
        return (V * self.populations) @ V.conj().T

    def expectation(self, A) -> float:
        At = self.eigen.to_basis(np.asarray(A))
        return float(np.real(self.populations @ np.diag(At)))

    def check_full_rank(self):
        if self.populations.min() < MIN_POPULATION:
            raise RankDeficientError(
                f"state is rank deficient: smallest population {self.populations.min():.3e}"
            )

    @classmethod
    def from_density(cls, rho) -> "GibbsState":
        """Wrap a full-rank density matrix as the Gibbs state of -ln(rho) at beta = 1."""
        rho = as_hermitian(rho)
        p, V = np.linalg.eigh(rho)
        if p.min() < MIN_POPULATION:
            raise RankDeficientError(f"density matrix is rank deficient (min eigenvalue {p.min():.3e})")
        p, V = p[::-1], V[:, ::-1]
        p = p / p.sum()
        logp = np.log(p)
        eigen = EigenSystem(energies=-logp, vectors=_fix_phases(V))
        return cls(beta=1.0, eigen=eigen, populations=p, log_populations=logp)


def gibbs_state(H, beta: float) -> GibbsState:
    """Gibbs state of ``H`` at inverse temperature ``beta``.

    Boltzmann weights are taken relative to the ground energy so large
    ``beta`` neither overflows nor loses the ground population.
    """
    if not beta >= 0:
        raise ValueError(f"beta must be nonnegative, got {beta}")
    eig = H if isinstance(H, EigenSystem) else eigendecompose(H)
    logw = -beta * (eig.energies - eig.energies[0])
    logp = logw - logsumexp(logw)
    return GibbsState(beta=float(beta), eigen=eig, populations=np.exp(logp), log_populations=logp)


def spectral_seminorm(A) -> float:
    """Spread ``lambda_max - lambda_min`` of the spectrum of ``A``."""
    w = np.linalg.eigvalsh(as_hermitian(A))
    return float(w[-1] - w[0])


def _state_basis(rho):
    if isinstance(rho, GibbsState):
        return rho.populations, rho.eigen
    rho = as_hermitian(rho)
    p, V = np.linalg.eigh(rho)
    return np.clip(p, 0.0, None), EigenSystem(p, V)


def variance(rho, A) -> float:
    """Var_rho[A] = Tr[rho A^2] - Tr[rho A]^2.

    ``rho`` may be a :class:`GibbsState` or any density matrix.  The sum is
    evaluated with ``A`` centred on its mean so every term is nonnegative.
    """
    A = as_hermitian(A)
    p, basis = _state_basis(rho)
    if len(p) != A.shape[0]:
        raise DimensionError(f"state has dimension {len(p)}, operator {A.shape[0]}")
    At = basis.to_basis(A)
    mean = float(np.real(p @ np.diag(At)))
    At[np.diag_indices_from(At)] -= mean
    return float(p @ np.sum(np.abs(At) ** 2, axis=1))


def embed(op, site: int, n_sites: int, dim: int | None = None) -> np.ndarray:
    """Tensor ``op`` into site ``site`` of an ``n_sites`` register."""
    op = np.asarray(op, dtype=complex)
    d = op.shape[0] if dim is None else dim
    left = np.eye(d**site, dtype=complex)
    right = np.eye(d ** (n_sites - site - 1), dtype=complex)
    return np.kron(np.kron(left, op), right)


def local_sum(h, N: int, site_dims: Sequence[int] | None = None) -> np.ndarray:
    """Sum of ``h`` acting on each of ``N`` identical sites."""
    h = as_hermitian(h)
    d = h.shape[0]
    if site_dims is not None:
        site_dims = list(site_dims)
        if len(site_dims) != N or any(s != d for s in site_dims):
            raise DimensionError(f"site_dims {site_dims} incompatible with {N} sites of dimension {d}")
    if N < 1:
        raise ValueError("N must be positive")
    if d**N > MAX_DENSE_DIM:
        raise SizeGuardError(f"total dimension {d}^{N} exceeds {MAX_DENSE_DIM}")
    total = np.zeros((d**N, d**N), dtype=complex)
    for k in range(N):
        total += embed(h, k, N)
    return total


def dephase(A, basis: EigenSystem, part: DegeneracyPartition) -> np.ndarray:
    """Block-diagonal part sum_E P_E A P_E of ``A`` in ``basis``."""
    A = as_hermitian(A)
    if part.size != basis.dim or A.shape[0] != basis.dim:
        raise DimensionError(
            f"partition size {part.size}, basis dim {basis.dim} and operator dim {A.shape[0]} differ"
        )
    At = basis.to_basis(A)
    return basis.from_basis(np.where(part.same_group(), At, 0.0))

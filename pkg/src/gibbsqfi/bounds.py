"""Upper bounds on the QFI and Hamiltonians that saturate them."""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional

import numpy as np

from .errors import DegeneracyError
from .operators import DEGENERACY_RTOL, as_hermitian, eigendecompose, spectral_seminorm


class BoundKind(str, Enum):
    FINITE_T = "finite_T"
    LOCAL_FINITE_T = "local_finite_T"
    GAPPED = "gapped"
    DYNAMICAL = "dynamical"
    CONSTRAINED_VARIANCE = "constrained_variance"
    CLASSICAL_DECAY = "classical_decay"


@dataclass(frozen=True)
class BoundReport:
    kind: BoundKind
    bound: float
    achieved: Optional[float] = None

    @property
    def margin(self) -> Optional[float]:
        if self.achieved is None:
            return None
        return self.bound - self.achieved

    @property
    def holds(self) -> bool:
        return self.achieved is None or self.margin >= -1e-9 * max(1.0, self.bound)


def finite_T_bound(Hprime, beta: float) -> float:
    """beta^2 ||H'||^2 / 4, valid for every control Hamiltonian."""
    if beta < 0:
        raise ValueError("beta must be nonnegative")
    return beta**2 * spectral_seminorm(Hprime) ** 2 / 4


def local_bound(h_seminorm: float, N: int, beta: float) -> float:
    """Finite-temperature bound for a sum of N local terms of seminorm ``h_seminorm``."""
    if h_seminorm < 0 or N < 0 or beta < 0:
        raise ValueError("inputs must be nonnegative")
    return beta**2 * h_seminorm**2 * N**2 / 4


def gapped_bound(Hprime, Delta: float) -> float:
    """||H'||^2 / Delta^2 for ground states with gap Delta."""
    if not Delta > 0:
        raise ValueError(f"gap must be positive, got {Delta}")
    return spectral_seminorm(Hprime) ** 2 / Delta**2


def dynamical_bound(Hprime, t: float) -> float:
    if t < 0:
        raise ValueError("t must be nonnegative")
    return t**2 * spectral_seminorm(Hprime) ** 2


def constrained_variance_bound(p0: float, seminorm: float) -> float:
    """Largest variance when one eigenstate of the observable has weight p0 >= 1/2."""
    if not 0.5 <= p0 <= 1:
        raise ValueError(f"p0 must lie in [1/2, 1], got {p0}")
    return p0 * (1 - p0) * seminorm**2


def classical_decay_bound(D: int, beta: float, Delta: float, seminorm: float) -> float:
    """Bound on the diagonal (commuting) QFI of a gapped Gibbs state.

    beta^2 (D - 1) exp(-beta Delta) ||H'||^2.
    """
    if not Delta > 0:
        raise ValueError(f"gap must be positive, got {Delta}")
    return beta**2 * (D - 1) * np.exp(-beta * Delta) * seminorm**2


def _extremal_vectors(Hprime):
    eig = eigendecompose(Hprime)
    lam = eig.energies
    tol = DEGENERACY_RTOL * max(1.0, float(lam[-1] - lam[0]))
    if len(lam) < 2 or lam[1] - lam[0] <= tol or lam[-1] - lam[-2] <= tol:
        raise DegeneracyError("extremal eigenvalues of Hprime must be nondegenerate")
    return eig


def commuting_saturator(Hprime, epsilon: float, eta: float) -> np.ndarray:
    """Control whose Gibbs state approaches (|max><max| + |min><min|)/2 of ``Hprime``.

    Energy ``epsilon`` on the two extremal eigenvectors of ``Hprime`` and
    ``eta`` on the rest; the approach is exponential in beta (eta - epsilon).
    """
    Hprime = as_hermitian(Hprime)
    if not eta > epsilon:
        raise ValueError("eta must exceed epsilon")
    eig = _extremal_vectors(Hprime)
    levels = np.full(eig.dim, float(eta))
    levels[[0, -1]] = epsilon
    return eig.from_basis(np.diag(levels).astype(complex))


def gapped_saturator(Hprime, Delta: float, rest_energy: float | None = None) -> np.ndarray:
    """Gapped Hamiltonian whose ground state maximizes the low-temperature QFI.

    Ground state (|max> + |min>)/sqrt(2) at 0, first excited state
    (|max> - |min>)/sqrt(2) at ``Delta``, remaining eigenvectors of
    ``Hprime`` at ``rest_energy`` (default ``2 * Delta``).
    """
    Hprime = as_hermitian(Hprime)
    if not Delta > 0:
        raise ValueError(f"gap must be positive, got {Delta}")
    rest_energy = 2 * Delta if rest_energy is None else rest_energy
    if rest_energy < Delta:
        raise ValueError("rest_energy must be at least Delta")
    eig = _extremal_vectors(Hprime)
    V = eig.vectors
    plus = (V[:, -1] + V[:, 0]) / np.sqrt(2)
    minus = (V[:, -1] - V[:, 0]) / np.sqrt(2)
    rest = V[:, 1:-1]
    H = Delta * np.outer(minus, minus.conj()) + rest_energy * rest @ rest.conj().T
    return (H + H.conj().T) / 2

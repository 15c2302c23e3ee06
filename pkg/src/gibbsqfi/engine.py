"""Quantum Fisher information of thermal and ground states.

Every function takes the Hamiltonian ``H`` at the evaluation point together
with its parameter derivative ``Hprime``; the parameter itself never
appears.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_continuous_lyapunov

from .errors import DegeneracyError, DimensionError, QFIError, SingularMeasurementError
from .operators import (
    DEGENERACY_RTOL,
    EigenSystem,
    GibbsState,
    as_hermitian,
    degeneracy_partition,
    eigendecompose,
    gibbs_state,
)
from .superop import SuperopKind, coefficients

MEASUREMENT_ZERO = 1e-14


@dataclass(frozen=True)
class QFIBreakdown:
    """Total QFI split into classical (diagonal) and coherent parts."""

    total: float
    diag: float
    offdiag: float


@dataclass(frozen=True)
class SLDOperator:
    """Symmetric logarithmic derivative, stored in the eigenbasis of rho."""

    matrix: np.ndarray
    basis: EigenSystem

    def computational(self) -> np.ndarray:
        return self.basis.from_basis(self.matrix)

    def eigenbasis(self) -> EigenSystem:
        """Eigenbasis of the SLD in computational coordinates."""
        w, U = np.linalg.eigh(self.matrix)
        return EigenSystem(energies=w, vectors=self.basis.vectors @ U)


def _prepare(H, Hprime, beta):
    """Gibbs state and validated H'.  ``H`` may be a precomputed EigenSystem."""
    if not isinstance(H, EigenSystem):
        H = as_hermitian(H)
    Hprime = as_hermitian(Hprime)
    D = H.dim if isinstance(H, EigenSystem) else H.shape[0]
    if D != Hprime.shape[0]:
        raise DimensionError(f"H is {D}-dimensional but Hprime is {Hprime.shape[0]}-dimensional")
    if not np.isfinite(beta):
        raise ValueError("beta must be finite; use low_T_qfi for ground states")
    return gibbs_state(H, beta), Hprime


def _centred(state: GibbsState, Hprime) -> np.ndarray:
    At = state.eigen.to_basis(Hprime)
    At[np.diag_indices_from(At)] -= np.real(state.populations @ np.diag(At))
    return At


def rho_dot(H, Hprime, beta: float, basis: str = "computational") -> np.ndarray:
    """Derivative of the Gibbs state along ``Hprime``.

    d rho = -beta J_L[H'] + beta rho Tr[rho H'], evaluated as
    -beta J_L[H' - <H'>] which is the same operator.  With
    ``basis="eigen"`` the matrix is returned in the eigenbasis of rho,
    which keeps entries between tiny populations accurate.
    """
    state, Hprime = _prepare(H, Hprime, beta)
    Rt = _rho_dot_eigen(state, Hprime)
    return _in_basis(state, Rt, basis)


def _in_basis(state: GibbsState, Mt: np.ndarray, basis: str) -> np.ndarray:
    if basis == "eigen":
        return Mt
    if basis == "computational":
        return state.eigen.from_basis(Mt)
    raise ValueError(f"basis must be 'computational' or 'eigen', got {basis!r}")


def _rho_dot_eigen(state: GibbsState, Hprime) -> np.ndarray:
    if state.beta == 0:
        return np.zeros((state.dim, state.dim), dtype=complex)
    return -state.beta * coefficients(SuperopKind.LOG, state) * _centred(state, Hprime)


def rho_dot_finite_difference(H, Hprime, beta: float, eps: float = 1e-5) -> np.ndarray:
    """Central differences of rho(H + t Hprime) with one Richardson step."""
    H, Hprime = as_hermitian(H), as_hermitian(Hprime)

    def central(h):
        plus = gibbs_state(H + h * Hprime, beta).matrix
        minus = gibbs_state(H - h * Hprime, beta).matrix
        return (plus - minus) / (2 * h)

    return (4 * central(eps / 2) - central(eps)) / 3


def qfi_thermal(H, Hprime, beta: float) -> QFIBreakdown:
    """Thermal QFI as beta^2 times the generalized variance of ``Hprime``."""
    state, Hprime = _prepare(H, Hprime, beta)
    # on pairs inside one energy level the composite coefficient is p_i, so
    # those terms add up to the variance of the dephased H'
    terms = coefficients(SuperopKind.COMPOSITE, state) * np.abs(_centred(state, Hprime)) ** 2
    same = state.partition.same_group()
    b2 = state.beta**2
    diag = b2 * float(np.sum(terms[same]))
    offdiag = b2 * float(np.sum(terms[~same]))
    return QFIBreakdown(total=diag + offdiag, diag=diag, offdiag=offdiag)


def qfi_from_rho_dot(rho: GibbsState, rho_dot, basis: str = "computational") -> float:
    """Tr[rho_dot J_B^{-1}[rho_dot]] evaluated in the eigenbasis of ``rho``.

    ``basis`` says how ``rho_dot`` is expressed.  In the computational
    basis, rounding of order eps * ||rho_dot|| is divided by p_i + p_j, so
    states with populations below about eps^2 need ``basis="eigen"``.
    """
    Rt = np.asarray(rho_dot, dtype=complex)
    if basis == "computational":
        Rt = rho.eigen.to_basis(Rt)
    elif basis != "eigen":
        raise ValueError(f"basis must be 'computational' or 'eigen', got {basis!r}")
    return float(np.sum(coefficients(SuperopKind.BURES_INVERSE, rho) * np.abs(Rt) ** 2))


def qfi_lyapunov(rho, rho_dot) -> float:
    """QFI from the SLD equation rho L + L rho = 2 rho_dot solved as a Lyapunov problem.

    Works on plain matrices and does not use any eigenbasis coefficients.
    """
    rho = np.asarray(rho, dtype=complex)
    rho_dot = np.asarray(rho_dot, dtype=complex)
    L = solve_continuous_lyapunov(rho, 2 * rho_dot)
    return float(np.real(np.trace(rho_dot @ L)))


def sld(rho: GibbsState, rho_dot, basis: str = "computational") -> SLDOperator:
    """L = J_B^{-1}[rho_dot], the exact solution of rho L + L rho = 2 rho_dot."""
    rho.check_full_rank()
    Rt = np.asarray(rho_dot, dtype=complex)
    if basis == "computational":
        Rt = rho.eigen.to_basis(Rt)
    elif basis != "eigen":
        raise ValueError(f"basis must be 'computational' or 'eigen', got {basis!r}")
    L = coefficients(SuperopKind.BURES_INVERSE, rho) * Rt
    return SLDOperator(matrix=(L + L.conj().T) / 2, basis=rho.eigen)


def measurement_fisher(H, Hprime, beta: float, basis) -> float:
    """Classical Fisher information of a projective measurement in ``basis``.

    ``basis`` is an :class:`EigenSystem` or a unitary whose columns are the
    measurement vectors.  Outcome probabilities are computed from the
    eigenbasis of rho as sums of nonnegative terms.
    """
    state, Hprime = _prepare(H, Hprime, beta)
    W = basis.vectors if isinstance(basis, EigenSystem) else np.asarray(basis, dtype=complex)
    if W.shape != (state.dim, state.dim):
        raise DimensionError(f"basis has shape {W.shape}, expected {(state.dim, state.dim)}")
    U = state.eigen.vectors.conj().T @ W
    q = state.populations @ np.abs(U) ** 2
    q_dot = np.real(np.einsum("ik,ij,jk->k", U.conj(), _rho_dot_eigen(state, Hprime), U))
    negligible = (q < MEASUREMENT_ZERO) & (np.abs(q_dot) < MEASUREMENT_ZERO)
    if np.any((q <= 0) & ~negligible):
        k = int(np.flatnonzero((q <= 0) & ~negligible)[0])
        raise SingularMeasurementError(f"outcome {k} has zero probability but nonzero derivative {q_dot[k]:.3e}")
    keep = ~negligible
    return float(np.sum(q_dot[keep] ** 2 / q[keep]))


def mean_value_fisher(H, Hprime, beta: float) -> float:
    """Effective Fisher information of estimating from the mean of ``Hprime``."""
    state, Hprime = _prepare(H, Hprime, beta)
    At = _centred(state, Hprime)
    var = float(state.populations @ np.sum(np.abs(At) ** 2, axis=1))
    if var <= MEASUREMENT_ZERO:
        raise QFIError(f"Hprime has (numerically) zero variance {var:.3e} in this state")
    response = float(np.sum(coefficients(SuperopKind.LOG, state) * np.abs(At) ** 2))
    return state.beta**2 * response**2 / var


def low_T_qfi(H, Hprime) -> float:
    """Ground-state limit sum_{i>0} 4 |H'_{0i}|^2 / (E_i - E_0)^2."""
    H, Hprime = as_hermitian(H), as_hermitian(Hprime)
    if H.shape != Hprime.shape:
        raise DimensionError("H and Hprime dimensions differ")
    eig = eigendecompose(H)
    E = eig.energies
    if len(E) < 2:
        return 0.0
    scale = max(1.0, float(E[-1] - E[0]))
    if E[1] - E[0] <= DEGENERACY_RTOL * scale:
        raise DegeneracyError(f"ground state is degenerate (gap {E[1] - E[0]:.3e})")
    At = eig.to_basis(Hprime)
    return float(np.sum(4 * np.abs(At[0, 1:]) ** 2 / (E[1:] - E[0]) ** 2))


def high_T_qfi(H, Hprime, beta: float, order: int = 3) -> float:
    """Small-beta expansion of the thermal QFI to order ``beta**order`` (2 or 3)."""
    H, Hprime = as_hermitian(H), as_hermitian(Hprime)
    if order not in (2, 3):
        raise ValueError("order must be 2 or 3")
    D = H.shape[0]
    w = np.linalg.eigvalsh(H)
    if beta * (w[-1] - w[0]) >= 0.5:
        warnings.warn(f"beta * spectral range = {beta * (w[-1] - w[0]):.3g} is not small", stacklevel=2)
    eye = np.eye(D)
    Ht = H - np.trace(H).real / D * eye
    Hpt = Hprime - np.trace(Hprime).real / D * eye
    Hpt2 = Hpt @ Hpt
    value = beta**2 * np.trace(Hpt2).real / D
    if order == 3:
        value -= beta**3 * np.trace(Ht @ Hpt2).real / D
    return float(value)


def dynamical_qfi(H, Hprime, t: float, psi) -> float:
    """QFI of exp(-i H t)|psi> with respect to a shift of H along ``Hprime``.

    ``psi`` is the initial state.  Returns 4 Var[G] with
    G_jk = H'_jk (1 - exp(-i w_jk t)) / (i w_jk) in the eigenbasis of H.
    """
    H, Hprime = as_hermitian(H), as_hermitian(Hprime)
    psi = np.asarray(psi, dtype=complex).ravel()
    if psi.shape[0] != H.shape[0]:
        raise DimensionError("state vector dimension does not match H")
    if abs(np.linalg.norm(psi) - 1) > 1e-10:
        raise ValueError(f"psi is not normalized (norm {np.linalg.norm(psi):.12g})")
    eig = eigendecompose(H)
    E = eig.energies
    omega = E[:, None] - E[None, :]
    same = degeneracy_partition(E).same_group()
    with np.errstate(divide="ignore", invalid="ignore"):
        kernel = np.where(same, t, -np.expm1(-1j * omega * t) / (1j * omega))
    G = kernel * eig.to_basis(Hprime)
    # this kernel generates the shift after the evolution, so the variance
    # is taken in the evolved state exp(-iHt) psi
    phi = np.exp(-1j * E * t) * (eig.vectors.conj().T @ psi)
    Gphi = G @ phi
    mean = np.vdot(phi, Gphi).real
    return float(4 * np.linalg.norm(Gphi - mean * phi) ** 2)


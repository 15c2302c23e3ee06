"""Bures, logarithmic and composite multiplication superoperators.

All three act diagonally on the matrix units |i><j| of the eigenbasis of a
full-rank state, so they are applied entrywise there and never stored as
D^2 x D^2 matrices.
"""

from __future__ import annotations

from enum import Enum

import numpy as np

from .errors import DimensionError
from .operators import GibbsState, as_hermitian

# below this |ln p_i - ln p_j| the log mean uses its Taylor series
TAYLOR_CUTOFF = 1e-4


class SuperopKind(str, Enum):
    BURES = "bures"
    BURES_INVERSE = "bures_inverse"
    LOG = "log"
    LOG_INVERSE = "log_inverse"
    COMPOSITE = "composite"


def _one_minus_exp_over_x(x):
    """(1 - exp(-x)) / x for x >= 0, continuous at 0."""
    x = np.asarray(x, dtype=float)
    small = x < TAYLOR_CUTOFF
    out = np.empty_like(x)
    xs = x[small]
    out[small] = 1 - xs / 2 + xs**2 / 6 - xs**3 / 24
    xl = x[~small]
    out[~small] = -np.expm1(-xl) / xl
    return out


def log_mean_coefficients(rho: GibbsState) -> np.ndarray:
    """(p_i - p_j)/(ln p_i - ln p_j), with limit p_i on degenerate pairs."""
    logp = rho.log_populations
    d = np.abs(logp[:, None] - logp[None, :])
    d[rho.partition.same_group()] = 0.0
    pmax = np.exp(np.maximum(logp[:, None], logp[None, :]))
    return pmax * _one_minus_exp_over_x(d)


def coefficients(kind: SuperopKind | str, rho: GibbsState) -> np.ndarray:
    """Entrywise multipliers c_ij of ``kind`` in the eigenbasis of ``rho``."""
    kind = SuperopKind(kind)
    rho.check_full_rank()
    p = rho.populations
    bures = (p[:, None] + p[None, :]) / 2
    if kind is SuperopKind.BURES:
        return bures
    if kind is SuperopKind.BURES_INVERSE:
        return 1 / bures
    log = log_mean_coefficients(rho)
    if kind is SuperopKind.LOG:
        return log
    if kind is SuperopKind.LOG_INVERSE:
        return 1 / log
    return log**2 / bures


def apply_in_eigenbasis(kind: SuperopKind | str, rho: GibbsState, At: np.ndarray) -> np.ndarray:
    """Apply ``kind`` to an operator already expressed in the eigenbasis of ``rho``."""
    return coefficients(kind, rho) * At


def apply_superop(kind: SuperopKind | str, rho: GibbsState, A) -> np.ndarray:
    """Apply the superoperator ``kind`` at ``rho`` to the Hermitian operator ``A``."""
    A = as_hermitian(A)
    if A.shape[0] != rho.dim:
        raise DimensionError(f"operator dimension {A.shape[0]} does not match state dimension {rho.dim}")
    out = rho.eigen.from_basis(apply_in_eigenbasis(kind, rho, rho.eigen.to_basis(A)))
    return (out + out.conj().T) / 2


def generalized_variance(rho: GibbsState, A) -> float:
    """Tr[A J(A)] - Tr[rho A]^2 for the composite superoperator J.

    Computed with ``A`` centred on its mean; since J maps the identity to
    ``rho`` this equals the uncentred expression but every term is
    nonnegative.
    """
    A = as_hermitian(A)
    if A.shape[0] != rho.dim:
        raise DimensionError(f"operator dimension {A.shape[0]} does not match state dimension {rho.dim}")
    At = rho.eigen.to_basis(A)
    mean = float(np.real(rho.populations @ np.diag(At)))
    At[np.diag_indices_from(At)] -= mean
    return float(np.sum(coefficients(SuperopKind.COMPOSITE, rho) * np.abs(At) ** 2))

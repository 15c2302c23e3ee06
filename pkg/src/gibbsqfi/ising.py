"""Periodic 1D Ising chain: transfer-matrix closed forms and a dense oracle.

H = -J sum Z_i Z_{i+1} + (B + theta_Z) sum Z_i + theta_X sum X_i

Transfer-matrix index 0 is spin z = +1 (energy +B), index 1 is z = -1.
The closed forms work with beta*B = b and beta*J = k and keep every
exponential in log form, so they stay finite far beyond the range where
lambda_+^N overflows.  For J >= 0 the eigenvalue ratio lambda_-/lambda_+
is written as exp(-ell) with ell = 2 artanh(x), x = r / cosh(b),
r = sqrt(sinh(b)^2 + exp(-4k)).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple, Sequence

import numpy as np
from scipy.special import expit, logsumexp

from .engine import qfi_thermal
from .errors import SizeGuardError
from .operators import SIGMA_X, SIGMA_Z, eigendecompose, local_sum

LN2 = np.log(2.0)
MAX_DENSE_SITES = 12
G_TAYLOR_CUTOFF = 1e-4


@dataclass(frozen=True)
class IsingParams:
    N: int
    J: float
    B: float
    beta: float

    def __post_init__(self):
        if int(self.N) != self.N or self.N < 2:
            raise ValueError(f"N must be an integer >= 2, got {self.N}")
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta must be positive and finite, got {self.beta}")

    def replace(self, **changes) -> "IsingParams":
        fields = dict(N=self.N, J=self.J, B=self.B, beta=self.beta)
        fields.update(changes)
        return IsingParams(**fields)


def _log_cosh(x):
    x = np.abs(x)
    return x + np.log1p(np.exp(-2 * x)) - LN2


def _log_abs_sinh(x):
    x = np.abs(x)
    with np.errstate(divide="ignore"):
        return x + np.log(-np.expm1(-2 * x)) - LN2


def g_function(R, beta: float):
    """sinh^2(beta R) / (R^2 cosh(beta R)), equal to beta^2 at R = 0."""
    return np.exp(log_g(R, beta))


def log_g(R, beta: float):
    R = np.asarray(R, dtype=float)
    y = beta * R
    small = np.abs(y) < G_TAYLOR_CUTOFF
    out = np.empty_like(y)
    ys = y[small]
    out[small] = 2 * np.log(beta) + np.log1p(-(ys**2) / 6 + 31 * ys**4 / 360)
    yl, Rl = y[~small], R[~small]
    out[~small] = 2 * _log_abs_sinh(yl) - _log_cosh(yl) - 2 * np.log(np.abs(Rl))
    return out if out.ndim else float(out)


@dataclass(frozen=True)
class TransferContext:
    """2x2 transfer-matrix data for one parameter point.

    ``A``, ``C`` and ``Fmat`` are the raw matrices (they may overflow for
    extreme parameters and are kept for inspection); all computations use
    the log-domain fields.
    """

    params: IsingParams
    A: np.ndarray
    C: np.ndarray
    Fmat: np.ndarray
    log_lambda_plus: float
    ratio: float  # lambda_- / lambda_+, negative for J < 0
    ell: float  # -ln(ratio) when J >= 0, else nan
    mixing: float  # sin^2 of twice the eigenvector angle
    v_plus: np.ndarray
    v_minus: np.ndarray
    mu: tuple  # v_pm is proportional to (mu_pm, 1)

    @property
    def log_lambda(self) -> tuple:
        """(ln lambda_+, ln |lambda_-|)."""
        with np.errstate(divide="ignore"):
            return self.log_lambda_plus, self.log_lambda_plus + float(np.log(abs(self.ratio)))

    def ratio_power(self, n) -> np.ndarray:
        """(lambda_-/lambda_+)^n for integer n >= 0 (array-valued)."""
        n = np.asarray(n, dtype=float)
        if self.params.J >= 0:
            with np.errstate(invalid="ignore"):
                return np.where(n == 0, 1.0, np.exp(-n * self.ell))
        return self.ratio**n


def transfer_context(p: IsingParams) -> TransferContext:
    b, k = p.beta * p.B, p.beta * p.J
    log_cosh_b = float(_log_cosh(b))
    # q = exp(-4k) / (sinh(b)^2 + exp(-4k))
    if b == 0:
        q, one_minus_q = 1.0, 0.0
    else:
        t_log = float(_log_abs_sinh(b)) + 2 * k
        q, one_minus_q = float(expit(-2 * t_log)), float(expit(2 * t_log))
    x = float(np.sqrt(np.tanh(b) ** 2 + np.exp(-4 * k - 2 * log_cosh_b)))
    log_lambda_plus = k + log_cosh_b + float(np.log1p(x))
    if k >= 0:
        with np.errstate(divide="ignore"):
            log_one_minus_x2 = float(np.log(-np.expm1(-4 * k))) - 2 * log_cosh_b
        ell = 2 * (float(np.log1p(x)) - 0.5 * log_one_minus_x2)
        ratio = float(np.exp(-ell))
    else:
        ell = float("nan")
        ratio = (1 - x) / (1 + x)
    phi = 0.5 * np.arctan2(np.sqrt(q), -np.sign(b) * np.sqrt(one_minus_q))
    v_plus = np.array([np.cos(phi), np.sin(phi)])
    v_minus = np.array([-np.sin(phi), np.cos(phi)])
    with np.errstate(over="ignore", invalid="ignore"):
        A = np.diag([np.exp(-b / 2), np.exp(b / 2)])
        C = np.array([[np.exp(k), np.exp(-k)], [np.exp(-k), np.exp(k)]])
        Rm = _field_matrix(p)
        Fmat = g_function(Rm, p.beta)
        s = np.exp(2 * k) * np.sinh(b)
        root = np.sqrt(s**2 + 1)
        mu = (float(-s + root), float(-s - root))
    return TransferContext(
        params=p, A=A, C=C, Fmat=Fmat, log_lambda_plus=log_lambda_plus, ratio=ratio, ell=ell,
        mixing=q, v_plus=v_plus, v_minus=v_minus, mu=mu,
    )


def _field_matrix(p: IsingParams) -> np.ndarray:
    # effective field R = B - J (z_left + z_right) on a site between spins z_left, z_right
    return np.array([[p.B - 2 * p.J, p.B], [p.B, p.B + 2 * p.J]])


def partition_function_log(p: IsingParams) -> float:
    """ln Z = N ln lambda_+ + ln(1 + (lambda_-/lambda_+)^N)."""
    ctx = transfer_context(p)
    return p.N * ctx.log_lambda_plus + float(np.log1p(ctx.ratio_power(p.N)))


def correlations(p: IsingParams):
    """Magnetization <Z_1> and connected correlators <Z_1 Z_{1+r}> - m^2, r = 0..N-1."""
    ctx = transfer_context(p)
    N = p.N
    rN = float(ctx.ratio_power(N))
    q = ctx.mixing
    # diagonal and off-diagonal elements of diag(1, -1) in the transfer eigenbasis
    s_pp_sq = 1 - q
    m = -np.sign(p.B) * np.sqrt(s_pp_sq) * (1 - rN) / (1 + rN)
    r = np.arange(N)
    nearest = np.minimum(r, N - r)
    if p.J >= 0 and np.isfinite(ctx.ell):
        with np.errstate(invalid="ignore", over="ignore"):
            far = np.where(N - 2 * nearest > 0, ctx.ratio_power(N - 2 * nearest), 1.0)
        spread = ctx.ratio_power(nearest) * (1 + far) / (1 + rN)
    else:
        spread = (ctx.ratio_power(r) + ctx.ratio_power(N - r)) / (1 + rN)
    connected = s_pp_sq * 4 * rN / (1 + rN) ** 2 + q * spread
    return float(m), connected


def qfi_parallel(p: IsingParams) -> float:
    """beta^2 Var[sum Z] from the transfer-matrix correlation sum."""
    _, connected = correlations(p)
    return float(p.beta**2 * p.N * np.sum(connected))


def log_qfi_parallel(p: IsingParams) -> float:
    """Natural log of :func:`qfi_parallel`, finite even where the QFI underflows.

    The correlation sum is assembled term by term in log form, which matters
    deep in the ordered phase with a field, where the QFI is of order
    exp(-beta (4J + 2B)).
    """
    if p.J < 0:
        return float(np.log(qfi_parallel(p)))
    ctx = transfer_context(p)
    b, k, N = p.beta * p.B, p.beta * p.J, p.N
    if b == 0:
        log_q, log_1mq = 0.0, -np.inf
    else:
        log_den = np.logaddexp(2 * _log_abs_sinh(b), -4 * k)
        log_q, log_1mq = -4 * k - log_den, 2 * _log_abs_sinh(b) - log_den
    ell = ctx.ell
    log1p_rN = float(np.log1p(ctx.ratio_power(N)))
    nearest = np.minimum(np.arange(N), N - np.arange(N))
    with np.errstate(divide="ignore"):
        far = np.where(N - 2 * nearest > 0, np.log1p(ctx.ratio_power(N - 2 * nearest)), LN2)
    with np.errstate(invalid="ignore"):
        decay = np.where(nearest == 0, 0.0, -ell * nearest)
    spread = log_q + decay + far - log1p_rN
    # the uniform term appears in each of the N correlators
    flip = np.log(N) + log_1mq + 2 * LN2 - N * ell - 2 * log1p_rN
    terms = np.append(spread, flip)
    return float(2 * np.log(p.beta) + np.log(N) + logsumexp(terms))


def qfi_parallel_derivative(p: IsingParams, step: float = 1e-3) -> float:
    """Second B-derivative of ln Z by Richardson-extrapolated central differences."""

    def second_difference(h):
        f = [partition_function_log(p.replace(B=p.B + s * h)) for s in (-1, 0, 1)]
        return (f[0] - 2 * f[1] + f[2]) / h**2

    return (4 * second_difference(step / 2) - second_difference(step)) / 3


REGIMES = ("B0_exact", "B0_lowT", "thermo", "lowT")


def qfi_parallel_limits(p: IsingParams, regime: str) -> float:
    """Closed-form parallel-field QFI in the named regime.

    B0_exact  beta^2 N e^{2k} (cosh^N k - sinh^N k) / (cosh^N k + sinh^N k) at B = 0
    B0_lowT   beta^2 N^2 (1 - (N^2 - 1) e^{-4k} / 3), B = 0 and k >> ln N
    thermo    N beta^2 e^{-4k} cosh b / (sinh^2 b + e^{-4k})^{3/2}, N -> infinity
    lowT      4 N beta^2 e^{-2b} (e^{-2b} + e^{-4k}), beta -> infinity
    """
    b, k, N, beta = p.beta * p.B, p.beta * p.J, p.N, p.beta
    if regime not in REGIMES:
        raise ValueError(f"unknown regime {regime!r}; expected one of {REGIMES}")
    if regime.startswith("B0") and p.B != 0:
        raise ValueError(f"regime {regime} requires B = 0")
    if regime in ("thermo", "lowT") and p.B == 0:
        raise ValueError(f"regime {regime} requires B != 0")
    if regime == "B0_exact":
        if k < 0:
            c, s = np.cosh(k), np.sinh(k)
            return float(beta**2 * N * np.exp(2 * k) * (c**N - s**N) / (c**N + s**N))
        # e^{2k} (1 - tanh^N k) / (1 + tanh^N k) = tanh(N artanh u) / u, u = e^{-2k}
        u = np.exp(-2 * k)
        if u == 0:
            return float(beta**2 * N**2)
        with np.errstate(divide="ignore"):
            return float(beta**2 * N * np.tanh(N * np.arctanh(u)) / u)
    if regime == "B0_lowT":
        return float(beta**2 * N**2 * (1 - (N**2 - 1) * np.exp(-4 * k) / 3))
    if regime == "thermo":
        ctx = transfer_context(p)
        x = np.sqrt(np.tanh(b) ** 2 + np.exp(-4 * k - 2 * _log_cosh(b)))
        return float(N * beta**2 * ctx.mixing / x)
    return float(4 * N * beta**2 * np.exp(-2 * abs(b)) * (np.exp(-2 * abs(b)) + np.exp(-4 * k)))


def dense_hamiltonian(p: IsingParams, theta_Z: float = 0.0, theta_X: float = 0.0) -> np.ndarray:
    N = p.N
    if N > MAX_DENSE_SITES:
        raise SizeGuardError(f"dense Ising chain limited to N <= {MAX_DENSE_SITES}, got {N}")
    z = spin_configurations(N)
    diagonal = -p.J * np.sum(z * np.roll(z, -1, axis=1), axis=1) + (p.B + theta_Z) * np.sum(z, axis=1)
    H = np.diag(diagonal).astype(complex)
    if theta_X:
        H += theta_X * local_sum(SIGMA_X, N)
    return H


def spin_configurations(N: int) -> np.ndarray:
    """z values of every basis state, shape (2^N, N); site 0 is the leading tensor factor."""
    bits = (np.arange(2**N)[:, None] >> np.arange(N - 1, -1, -1)[None, :]) & 1
    return 1.0 - 2.0 * bits


@lru_cache(maxsize=4)
def _dense_eigen(p: IsingParams):
    return eigendecompose(dense_hamiltonian(p))


def qfi_parallel_dense(p: IsingParams) -> float:
    """Exact-diagonalization oracle for the parallel-field QFI."""
    return qfi_thermal(_dense_eigen(p), local_sum(SIGMA_Z, p.N), p.beta).total


def qfi_transverse(p: IsingParams, method: str = "transfer") -> float:
    """QFI for the transverse field theta_X at theta_X = theta_Z = 0."""
    if p.N < 3:
        raise ValueError("transverse-field QFI needs N >= 3")
    if method == "dense":
        return qfi_thermal(_dense_eigen(p), local_sum(SIGMA_X, p.N), p.beta).total
    if method != "transfer":
        raise ValueError(f"unknown method {method!r}")
    ctx = transfer_context(p)
    b = p.beta * p.B
    spin = np.array([1.0, -1.0])
    # (A Fmat A) / lambda_+^2, assembled in log form
    log_M = log_g(_field_matrix(p), p.beta) - b / 2 * (spin[:, None] + spin[None, :]) - 2 * ctx.log_lambda_plus
    M = np.exp(log_M)
    top = ctx.v_plus @ M @ ctx.v_plus
    sub = float(ctx.ratio_power(p.N - 2)) * (ctx.v_minus @ M @ ctx.v_minus)
    return float(2 * p.N * (top + sub) / (1 + float(ctx.ratio_power(p.N))))


def transverse_site_expectation(p: IsingParams) -> float:
    """N E[zeta(z_{i-1}, z_i, z_{i+1})] with zeta = 2 g(R) exp(beta z_i R).

    This is the single-site expectation form of the transverse QFI; it is
    twice :func:`qfi_transverse` (it counts the trace over site i twice).
    Evaluated with plain transfer-matrix products, so meant for moderate
    parameters only.
    """
    if p.N < 3:
        raise ValueError("needs N >= 3")
    b, k = p.beta * p.B, p.beta * p.J
    spin = np.array([1.0, -1.0])
    A = np.diag(np.exp(-b * spin / 2))
    C = np.exp(k * np.outer(spin, spin))
    T = A @ C @ A
    rest = np.linalg.matrix_power(T, p.N - 2)
    total = 0.0
    for a in range(2):
        for c in range(2):
            for d in range(2):
                R = p.B - p.J * (spin[a] + spin[d])
                zeta = 2 * g_function(R, p.beta) * np.exp(p.beta * spin[c] * R)
                total += zeta * T[a, c] * T[c, d] * rest[d, a]
    Z = np.trace(np.linalg.matrix_power(T, p.N))
    return float(p.N * total / Z)


def transverse_low_T_limit(p: IsingParams) -> float:
    """N / (B + 2J)^2, the beta -> infinity value for B > 0, J >= 0."""
    return p.N / (abs(p.B) + 2 * p.J) ** 2


class Table(NamedTuple):
    columns: tuple
    rows: list

    def column(self, name: str) -> np.ndarray:
        i = self.columns.index(name)
        return np.array([row[i] for row in self.rows], dtype=float)


def figure1_datasets(
    variant: str,
    J_values: Sequence[float] | None = None,
    beta_values: Sequence[float] | None = None,
) -> Table:
    """Datasets behind the two panels of the Ising QFI figure.

    ``a``: parallel-field QFI versus J at beta = 1, B = 0 for N = 10, 30, 90.
    ``b``: parallel and transverse QFI versus beta at N = 50, B = 0.05, J = 2,
    with the bound beta^2 N^2 and the low-temperature overlay
    N^2 / (4 (B + 2J)^2) exactly as drawn in the figure.
    """
    if variant == "a":
        J_values = np.linspace(0.0, 4.0, 81) if J_values is None else J_values
        rows = []
        for N in (10, 30, 90):
            for J in J_values:
                p = IsingParams(N=N, J=float(J), B=0.0, beta=1.0)
                rows.append((float(J), N, qfi_parallel(p), p.beta**2 * N**2))
        return Table(("J", "N", "F_parallel", "bound"), rows)
    if variant == "b":
        beta_values = np.logspace(-2, 2, 81) if beta_values is None else beta_values
        N, B, J = 50, 0.05, 2.0
        overlay = N**2 / (4 * (B + 2 * J) ** 2)
        rows = []
        for beta in beta_values:
            p = IsingParams(N=N, J=J, B=B, beta=float(beta))
            rows.append((float(beta), qfi_parallel(p), qfi_transverse(p), p.beta**2 * N**2, overlay))
        return Table(("beta", "F_parallel", "F_transverse", "bound", "lowT_overlay"), rows)
    raise ValueError(f"unknown figure variant {variant!r}; expected 'a' or 'b'")

"""Oracle suites behind ``gibbsqfi verify``.

Each suite compares a library result with an independent evaluation and
returns one boolean per checked instance.
"""

from __future__ import annotations

import itertools
import sys

import numpy as np

from .bounds import commuting_saturator, finite_T_bound, gapped_bound, gapped_saturator
from .engine import (
    low_T_qfi,
    measurement_fisher,
    qfi_from_rho_dot,
    qfi_thermal,
    rho_dot,
    rho_dot_finite_difference,
    sld,
)
from .ising import IsingParams, qfi_parallel, qfi_parallel_dense, qfi_transverse
from .operators import SIGMA_X, SIGMA_Z, eigendecompose, gibbs_state, random_hermitian
from .superop import SuperopKind, apply_superop


def _rel(a, b):
    return abs(a - b) / max(abs(b), 1e-300)


def _instances(n, seed):
    rng = np.random.default_rng(seed)
    for k in range(n):
        D = 2 + k % 7
        beta = (0.1, 1.0, 10.0)[(k // 7) % 3]
        yield random_hermitian(D, rng), random_hermitian(D, rng), beta


def suite_qubit(quick):
    out = []
    for alpha, Delta, beta in itertools.product([0, np.pi / 6, np.pi / 3, np.pi / 2], [0.5, 1, 2], [0.1, 1, 10]):
        H = Delta * (np.cos(alpha) * SIGMA_Z + np.sin(alpha) * SIGMA_X)
        x = beta * Delta
        closed = beta**2 * (np.cos(alpha) ** 2 / np.cosh(x) ** 2 + np.sin(alpha) ** 2 * np.tanh(x) ** 2 / x**2)
        out.append(_rel(qfi_thermal(H, SIGMA_Z, beta).total, closed) < 1e-10)
    return out


def suite_paths(quick):
    out = []
    for H, Hp, beta in _instances(40 if quick else 200, seed=1):
        F = qfi_thermal(H, Hp, beta)
        state = gibbs_state(H, beta)
        eq5 = qfi_from_rho_dot(state, rho_dot(H, Hp, beta, basis="eigen"), basis="eigen")
        out.append(_rel(F.diag + F.offdiag, F.total) < 1e-9 and _rel(eq5, F.total) < 1e-9)
    return out


def suite_finite_difference(quick):
    out = []
    for H, Hp, beta in _instances(14 if quick else 42, seed=2):
        if beta > 1:
            continue
        R = rho_dot(H, Hp, beta)
        fd = rho_dot_finite_difference(H, Hp, beta)
        out.append(np.linalg.norm(R - fd) <= 1e-6 * np.linalg.norm(R))
    return out


def suite_finite_T_bound(quick):
    out = []
    for H, Hp, beta in _instances(100 if quick else 500, seed=3):
        bound = finite_T_bound(Hp, beta)
        out.append((bound - qfi_thermal(H, Hp, beta).total) / bound >= -1e-9)
    return out


def suite_saturators(quick):
    rng = np.random.default_rng(4)
    out = []
    for D in range(2, 9):
        Hp = random_hermitian(D, rng)
        out.append(_rel(low_T_qfi(gapped_saturator(Hp, 1.0), Hp), gapped_bound(Hp, 1.0)) < 1e-10)
        F = qfi_thermal(commuting_saturator(Hp, 0.0, 20.0), Hp, 1.0).total
        out.append(F >= (1 - 1e-6) * finite_T_bound(Hp, 1.0))
    return out


def suite_sld(quick):
    out = []
    for H, Hp, beta in _instances(14 if quick else 42, seed=5):
        if beta > 1:
            continue
        basis = sld(gibbs_state(H, beta), rho_dot(H, Hp, beta)).eigenbasis()
        F = qfi_thermal(H, Hp, beta)
        out.append(_rel(measurement_fisher(H, Hp, beta, basis), F.total) < 1e-8)
        diag = measurement_fisher(H, Hp, beta, eigendecompose(H))
        out.append(abs(diag - F.diag) <= 1e-9 * max(1.0, diag))
    return out


def suite_superop(quick):
    rng = np.random.default_rng(6)
    out = []
    for D in range(2, 9):
        rho = gibbs_state(random_hermitian(D, rng), 1.0)
        A = random_hermitian(D, rng)
        for fwd, inv in [(SuperopKind.BURES, SuperopKind.BURES_INVERSE), (SuperopKind.LOG, SuperopKind.LOG_INVERSE)]:
            back = apply_superop(inv, rho, apply_superop(fwd, rho, A))
            out.append(np.linalg.norm(back - A) <= 1e-10 * np.linalg.norm(A))
    return out


def suite_ising(quick):
    sizes = (3, 4, 5) if quick else (3, 4, 5, 6, 7, 8)
    out = []
    for N, J, B, beta in itertools.product(sizes, [0.0, 0.5, 2.0], [0.0, 0.05, 0.5], [0.5, 1.0, 4.0]):
        p = IsingParams(N, J, B, beta)
        out.append(_rel(qfi_parallel(p), qfi_parallel_dense(p)) < 1e-8)
        out.append(_rel(qfi_transverse(p), qfi_transverse(p, "dense")) < 1e-8)
    return out


SUITES = {
    "qubit closed form": suite_qubit,
    "path equivalence": suite_paths,
    "finite differences": suite_finite_difference,
    "finite-T bound": suite_finite_T_bound,
    "saturators": suite_saturators,
    "SLD measurement": suite_sld,
    "superoperator round trip": suite_superop,
    "Ising transfer vs dense": suite_ising,
}


def run_all(quick: bool = False, stream=None) -> int:
    """Run every suite, print pass/fail counts; return 0 iff all checks pass."""
    stream = sys.stdout if stream is None else stream
    passed = total = 0
    for name, suite in SUITES.items():
        try:
            results = suite(quick)
        except Exception as exc:  # a crashing suite counts as one failure
            print(f"{name}: ERROR {type(exc).__name__}: {exc}", file=stream)
            total += 1
            continue
        ok = sum(bool(r) for r in results)
        passed += ok
        total += len(results)
        status = "PASS" if ok == len(results) else "FAIL"
        print(f"{name}: {ok}/{len(results)} passed [{status}]", file=stream)
    print(f"total: {passed}/{total} passed, {total - passed} failed", file=stream)
    return 0 if passed == total else 1

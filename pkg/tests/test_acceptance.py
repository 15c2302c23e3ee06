"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines inline; they
are also repeated in the terminal summary.
"""

import hashlib
import itertools

import numpy as np
import pytest
from conftest import VERDICTS, random_instances, rel_err

from gibbsqfi import (
    SIGMA_X,
    SIGMA_Z,
    GibbsState,
    IsingParams,
    SuperopKind,
    apply_superop,
    classical_decay_bound,
    commuting_saturator,
    dynamical_bound,
    dynamical_qfi,
    eigendecompose,
    finite_T_bound,
    gapped_bound,
    gapped_saturator,
    gibbs_state,
    high_T_qfi,
    low_T_qfi,
    measurement_fisher,
    qfi_from_rho_dot,
    qfi_parallel,
    qfi_parallel_dense,
    qfi_parallel_limits,
    qfi_thermal,
    qfi_transverse,
    random_hermitian,
    rho_dot,
    rho_dot_finite_difference,
    sld,
    spectral_seminorm,
)
from gibbsqfi.cli import main
from gibbsqfi.ising import transverse_low_T_limit, transverse_site_expectation
from gibbsqfi.superop import coefficients

ISING_GRID = list(itertools.product(range(3, 11), [0.0, 0.5, 2.0], [0.0, 0.05, 0.5], [0.5, 1.0, 4.0]))
GOLDEN = {
    "figure1a": "0b0880ca0f70cbfa573dc3104b1296852a140f2ccb977ac96fe0d6683ff471fc",
    "figure1b": "07330ec47221ad7eca1bfd1600396fe11222545e5d98ed0c34e58798714f6e4c",
}


class Checks:
    """Collects named sub-checks and reports one verdict line."""

    def __init__(self, number, title):
        self.number, self.title = number, title
        self.failures = []

    def __call__(self, ok, detail):
        if not ok:
            self.failures.append(detail)

    def finish(self):
        status = "PASS" if not self.failures else "FAIL"
        line = f"criterion {self.number}: {status}  {self.title}"
        if self.failures:
            line += "  [" + "; ".join(self.failures[:4]) + (" ..." if len(self.failures) > 4 else "") + "]"
        print(line)
        VERDICTS.append(line)
        assert not self.failures, line


def qubit_closed_form(alpha, Delta, beta):
    x = beta * Delta
    return beta**2 * (np.cos(alpha) ** 2 / np.cosh(x) ** 2 + np.sin(alpha) ** 2 * np.tanh(x) ** 2 / x**2)


def qubit_H(alpha, Delta):
    return Delta * (np.cos(alpha) * SIGMA_Z + np.sin(alpha) * SIGMA_X)


def split_oracle(H, Hp, beta):
    """Diag and offdiag parts straight from the eigendecomposition of H."""
    E, V = np.linalg.eigh(H)
    w = np.exp(-beta * (E - E[0]))
    p = w / w.sum()
    A = V.conj().T @ Hp @ V
    same = np.isclose(E[:, None], E[None, :], rtol=0, atol=1e-12 * max(1.0, np.ptp(E)))
    # dephased H' variance
    Ad = np.where(same, A, 0)
    mean = np.sum(p * np.diag(Ad).real)
    second = np.sum(p * np.diag(Ad @ Ad).real)
    diag = beta**2 * (second - mean**2)
    off = 0.0
    for i, j in itertools.combinations(range(len(E)), 2):
        if not same[i, j]:
            off += 4 * (p[i] - p[j]) ** 2 * abs(A[i, j]) ** 2 / ((E[i] - E[j]) ** 2 * (p[i] + p[j]))
    return diag, off


def test_criterion_01_qubit_closed_form():
    check = Checks(1, "qubit closed form")
    grid = itertools.product([0, np.pi / 6, np.pi / 3, np.pi / 2], [0.5, 1.0, 2.0], [0.1, 1.0, 10.0])
    worst = 0.0
    for alpha, Delta, beta in grid:
        worst = max(worst, rel_err(qfi_thermal(qubit_H(alpha, Delta), SIGMA_Z, beta).total, qubit_closed_form(alpha, Delta, beta)))
    check(worst < 1e-10, f"grid rel err {worst:.2e}")
    for beta in (0.1, 1.0, 3.0):
        F = qfi_thermal(np.zeros((2, 2)), SIGMA_Z, beta).total
        check(F == beta**2, f"Delta=0 beta={beta}: {F!r}")
    for Delta in (0.5, 1.0, 2.0):
        F = qfi_thermal(qubit_H(np.pi / 2, Delta), SIGMA_Z, 20 / Delta).total
        check(rel_err(F, 1 / Delta**2) < 1e-8, f"transverse low-T rel err {rel_err(F, 1 / Delta**2):.2e}")
        beta = 10 / Delta
        F = qfi_thermal(qubit_H(0.0, Delta), SIGMA_Z, beta).total
        target = 4 * beta**2 * np.exp(-20)
        check(rel_err(F, target) < 1e-4, f"parallel low-T rel err {rel_err(F, target):.2e}")
    check.finish()


def test_criterion_02_finite_T_bound():
    check = Checks(2, "finite-T bound and commuting saturator")
    worst = np.inf
    for H, Hp, beta in random_instances(500, seed=1002):
        bound = finite_T_bound(Hp, beta)
        worst = min(worst, (bound - qfi_thermal(H, Hp, beta).total) / bound)
    check(worst >= -1e-9, f"min relative slack {worst:.2e}")
    rng = np.random.default_rng(1102)
    for D in range(2, 9):
        Hp = random_hermitian(D, rng)
        for beta in (0.1, 1.0, 10.0):
            H = commuting_saturator(Hp, 0.0, 20 / beta)
            ratio = qfi_thermal(H, Hp, beta).total / finite_T_bound(Hp, beta)
            check(ratio >= 1 - 1e-6, f"saturator D={D} beta={beta} ratio {ratio:.9f}")
    check.finish()


def test_criterion_03_gapped_bound():
    check = Checks(3, "gapped bound and saturator")
    rng = np.random.default_rng(1003)
    for D in range(2, 9):
        Hp = random_hermitian(D, rng)
        Delta = float(rng.uniform(0.3, 3.0))
        H = gapped_saturator(Hp, Delta)
        bound = gapped_bound(Hp, Delta)
        check(rel_err(low_T_qfi(H, Hp), bound) < 1e-10, f"ground D={D} rel err {rel_err(low_T_qfi(H, Hp), bound):.2e}")
        F = qfi_thermal(H, Hp, 40 / Delta).total
        check(rel_err(F, bound) < 1e-6, f"thermal D={D} rel err {rel_err(F, bound):.2e}")
    for _ in range(200):
        D = int(rng.integers(2, 9))
        H, Hp = random_hermitian(D, rng), random_hermitian(D, rng)
        E = np.linalg.eigvalsh(H)
        F = low_T_qfi(H, Hp)
        limit = spectral_seminorm(Hp) ** 2 / (E[1] - E[0]) ** 2
        check(F <= limit * (1 + 1e-9), f"random gapped instance {F:.6g} > {limit:.6g}")
    check.finish()


def test_criterion_04_coherence_advantage():
    check = Checks(4, "exponential coherence advantage")
    rng = np.random.default_rng(1004)
    for D in (2, 4, 6, 8):
        Hp = random_hermitian(D, rng)
        H = gapped_saturator(Hp, 1.0)
        ceiling = low_T_qfi(H, Hp)
        for beta in (10.0, 20.0, 40.0):
            F = qfi_thermal(H, Hp, beta).total
            check(rel_err(F, ceiling) < 1e-2, f"D={D} beta={beta} rel dev {rel_err(F, ceiling):.2e}")
        classical = classical_decay_bound(D, 40.0, 1.0, spectral_seminorm(Hp))
        check(classical < 1e-10 * ceiling, f"D={D} classical/coherent {classical / ceiling:.2e}")
    check.finish()


def test_criterion_05_split_and_paths():
    check = Checks(5, "split sum and path equivalence")
    worst = {"total vs split": 0.0, "total vs rho_dot": 0.0, "split vs rho_dot": 0.0, "finite difference": 0.0}
    for H, Hp, beta in random_instances(200, seed=1005):
        F = qfi_thermal(H, Hp, beta).total
        diag, off = split_oracle(H, Hp, beta)
        split = diag + off
        via_rho_dot = qfi_from_rho_dot(gibbs_state(H, beta), rho_dot(H, Hp, beta, basis="eigen"), basis="eigen")
        worst["total vs split"] = max(worst["total vs split"], rel_err(F, split))
        worst["total vs rho_dot"] = max(worst["total vs rho_dot"], rel_err(F, via_rho_dot))
        worst["split vs rho_dot"] = max(worst["split vs rho_dot"], rel_err(split, via_rho_dot))
        R = rho_dot(H, Hp, beta)
        fd = rho_dot_finite_difference(H, Hp, beta)
        worst["finite difference"] = max(worst["finite difference"], np.linalg.norm(R - fd) / np.linalg.norm(R))
    for name, err in worst.items():
        tol = 1e-6 if name == "finite difference" else 1e-9
        check(err < tol, f"{name} worst {err:.2e}")
    check.finish()


def test_criterion_06_sld_optimality():
    check = Checks(6, "SLD measurement optimality")
    n = 0
    for H, Hp, beta in random_instances(120, seed=1006):
        E = np.linalg.eigvalsh(H)
        if np.min(np.diff(E)) < 1e-6 or n == 100:
            continue
        n += 1
        F = qfi_thermal(H, Hp, beta)
        basis = sld(gibbs_state(H, beta), rho_dot(H, Hp, beta, basis="eigen"), basis="eigen").eigenbasis()
        got = measurement_fisher(H, Hp, beta, basis)
        check(rel_err(got, F.total) < 1e-8, f"SLD basis beta={beta} rel err {rel_err(got, F.total):.2e}")
        energy = measurement_fisher(H, Hp, beta, eigendecompose(H))
        check(abs(energy - F.diag) <= 1e-9 * max(1.0, F.diag), f"energy basis abs err {abs(energy - F.diag):.2e}")
    check(n == 100, f"only {n} instances")
    check.finish()


def test_criterion_07_ising_parallel():
    check = Checks(7, "Ising parallel field")
    worst = worst_closed = 0.0
    for N, J, B, beta in ISING_GRID:
        p = IsingParams(N, J, B, beta)
        transfer, dense = qfi_parallel(p), qfi_parallel_dense(p)
        worst = max(worst, rel_err(transfer, dense))
        if B == 0:
            closed = qfi_parallel_limits(p, "B0_exact")
            worst_closed = max(worst_closed, rel_err(closed, transfer), rel_err(closed, dense))
    check(worst < 1e-8, f"transfer vs dense worst {worst:.2e}")
    check(worst_closed < 1e-8, f"B=0 closed form worst {worst_closed:.2e}")
    for J in (3.0, 3.5, 4.0, 5.0, 8.0):
        ratio = qfi_parallel(IsingParams(90, J, 0.0, 1.0)) / 90**2
        check(ratio > 0.99, f"N=90 beta*J={J} F/(beta^2 N^2)={ratio:.5f}")
    check.finish()


def test_criterion_08_ising_transverse():
    check = Checks(8, "Ising transverse field")
    worst = 0.0
    for N, J, B, beta in ISING_GRID:
        p = IsingParams(N, J, B, beta)
        worst = max(worst, rel_err(qfi_transverse(p), qfi_transverse(p, "dense")))
    check(worst < 1e-8, f"transfer vs dense worst {worst:.2e}")
    for N, B, beta in itertools.product((3, 10, 50), (0.05, 0.5, 2.0), (0.5, 1.0, 4.0)):
        F = qfi_transverse(IsingParams(N, 0.0, B, beta))
        target = N * np.tanh(beta * B) ** 2 / B**2
        check(rel_err(F, target) < 1e-10, f"J=0 N={N} B={B} beta={beta} rel err {rel_err(F, target):.2e}")
    p = IsingParams(50, 2.0, 0.05, 50.0)
    plateau = 50 / 4.05**2
    check(rel_err(qfi_transverse(p), plateau) < 1e-2, f"plateau {qfi_transverse(p):.6g} vs {plateau:.6g}")
    check(transverse_low_T_limit(p) == plateau, "low-T limit helper")
    for N, B, beta in itertools.product((3, 5, 8), (0.05, 0.5), (0.5, 2.0)):
        p = IsingParams(N, 0.0, B, beta)
        ratio = transverse_site_expectation(p) / qfi_transverse(p, "dense")
        check(abs(ratio - 2) < 1e-10, f"site expectation ratio {ratio:.12f} at N={N}")
    check.finish()


def test_criterion_09_limits():
    check = Checks(9, "thermodynamic and low-T limits")
    p = IsingParams(200, 1.0, 0.5, 1.0)
    thermo, exact = qfi_parallel_limits(p, "thermo") / p.N, qfi_parallel(p) / p.N
    check(rel_err(thermo, exact) < 5e-3, f"thermo per site {thermo:.6g} vs {exact:.6g}")
    p = IsingParams(10, 2.0, 0.5, 30.0)
    lowT, exact = qfi_parallel_limits(p, "lowT"), qfi_parallel(p)
    check(rel_err(lowT, exact) < 1e-2, f"low-T formula {lowT:.5g} vs exact {exact:.5g}")
    check.finish()


def test_criterion_10_high_T():
    check = Checks(10, "high-temperature expansion")
    rng = np.random.default_rng(1010)
    for _ in range(20):
        H, Hp = random_hermitian(4, rng), random_hermitian(4, rng)
        scale = spectral_seminorm(H)
        H = H / scale  # keep beta * spread small at beta = 1e-2
        res = {}
        for beta in (1e-2, 5e-3):
            F = qfi_thermal(H, Hp, beta).total
            res[beta] = [abs(F - high_T_qfi(H, Hp, beta, order)) for order in (2, 3)]
        r2, r3 = res[1e-2][0] / res[5e-3][0], res[1e-2][1] / res[5e-3][1]
        check(r2 >= 7, f"leading-order residual ratio {r2:.3f}")
        check(r3 >= 14, f"third-order residual ratio {r3:.3f}")
    check.finish()


def test_criterion_11_dynamical():
    check = Checks(11, "dynamical bound")
    rng = np.random.default_rng(1011)
    for _ in range(200):
        D = int(rng.integers(2, 9))
        H, Hp = random_hermitian(D, rng), random_hermitian(D, rng)
        psi = rng.normal(size=D) + 1j * rng.normal(size=D)
        psi /= np.linalg.norm(psi)
        t = float(rng.uniform(0.1, 10))
        F, bound = dynamical_qfi(H, Hp, t, psi), dynamical_bound(Hp, t)
        check(F <= bound * (1 + 1e-10), f"D={D} t={t:.3g} {F:.6g} > {bound:.6g}")
    for D in range(2, 9):
        Hp = random_hermitian(D, rng)
        w, V = np.linalg.eigh(Hp)
        H = V @ np.diag(rng.normal(size=D)) @ V.conj().T
        psi = (V[:, -1] + V[:, 0]) / np.sqrt(2)
        t = float(rng.uniform(0.1, 10))
        F = dynamical_qfi(H, Hp, t, psi)
        check(rel_err(F, t**2 * (w[-1] - w[0]) ** 2) < 1e-10, f"commuting D={D} rel err {rel_err(F, t**2 * (w[-1] - w[0]) ** 2):.2e}")
    check.finish()


def test_criterion_12_superoperators():
    check = Checks(12, "superoperator algebra")
    rng = np.random.default_rng(1012)
    fro = np.linalg.norm
    for D in range(2, 9):
        rho = gibbs_state(random_hermitian(D, rng), 1.0)
        A, B = random_hermitian(D, rng), random_hermitian(D, rng)
        for fwd, inv in [(SuperopKind.BURES, SuperopKind.BURES_INVERSE), (SuperopKind.LOG, SuperopKind.LOG_INVERSE)]:
            err = fro(apply_superop(inv, rho, apply_superop(fwd, rho, A)) - A) / fro(A)
            check(err < 1e-10, f"round trip {fwd.value} D={D} {err:.2e}")
        for kind in SuperopKind:
            lhs = np.trace(A @ apply_superop(kind, rho, B))
            rhs = np.trace(apply_superop(kind, rho, A) @ B)
            check(abs(lhs - rhs) < 1e-10 * max(1.0, abs(lhs)), f"self-adjoint {kind.value} D={D}")
        C = rho.eigen.from_basis(np.diag(rng.normal(size=D)).astype(complex))
        for kind in (SuperopKind.BURES, SuperopKind.LOG, SuperopKind.COMPOSITE):
            err = fro(apply_superop(kind, rho, C) - rho.matrix @ C)
            check(err < 1e-12, f"commuting reduction {kind.value} D={D} {err:.2e}")
    for _ in range(50):
        rho = gibbs_state(random_hermitian(int(rng.integers(2, 9)), rng), float(rng.uniform(0.1, 10)))
        comp, bures = coefficients(SuperopKind.COMPOSITE, rho), coefficients(SuperopKind.BURES, rho)
        check(np.all(comp <= bures * (1 + 1e-12)), "composite coefficient above Bures")
    D = 5
    X = random_hermitian(D, rng)
    X /= np.abs(np.linalg.eigvalsh(X)).max()
    A = random_hermitian(D, rng)
    gaps = []
    for eps in (1e-2, 5e-3, 2.5e-3):
        R = np.eye(D) + eps * X
        rho = GibbsState.from_density(R / np.trace(R).real)
        gaps.append(fro(apply_superop(SuperopKind.LOG, rho, A) - apply_superop(SuperopKind.BURES, rho, A)))
    for big, small in zip(gaps, gaps[1:]):
        check(3.8 < big / small < 4.2, f"near-identity ratio {big / small:.3f}")
    check.finish()


def test_criterion_13_figures(tmp_path, capsys):
    check = Checks(13, "figure datasets")
    for task in ("figure1a", "figure1b"):
        outputs = []
        for k in range(2):
            path = tmp_path / f"{task}_{k}.csv"
            check(main([task, "--out", str(path)]) == 0, f"{task} exit code")
            outputs.append(path.read_bytes())
        check(outputs[0] == outputs[1], f"{task} not deterministic")
        digest = hashlib.sha256(outputs[0]).hexdigest()
        check(digest == GOLDEN[task], f"{task} hash {digest[:12]}")
        lines = outputs[0].decode().splitlines()
        header = lines[0].split(",")
        rows = np.array([[float(x) for x in line.split(",")] for line in lines[1:]])
        bound = rows[:, header.index("bound")]
        for name in header:
            if name.startswith("F_"):
                check(np.all(rows[:, header.index(name)] <= bound), f"{task} {name} exceeds bound")
    capsys.readouterr()
    check.finish()

"""Periodic Ising chain probed by a uniform field.

Transfer-matrix results are checked against exact diagonalization on a small
chain, then used where dense methods are hopeless.
"""

import numpy as np

from gibbsqfi import IsingParams, log_qfi_parallel, qfi_parallel, qfi_parallel_dense, qfi_transverse

p = IsingParams(N=8, J=0.7, B=0.2, beta=1.3)
print("N = 8 check:")
print(f"  parallel   transfer {qfi_parallel(p):.12f}  dense {qfi_parallel_dense(p):.12f}")
print(f"  transverse transfer {qfi_transverse(p):.12f}  dense {qfi_transverse(p, 'dense'):.12f}")

# Ferromagnetic coupling pushes the parallel QFI towards beta^2 N^2.
print("\nN = 90, B = 0, beta = 1:")
for J in (0.0, 1.0, 2.0, 3.0, 4.0):
    F = qfi_parallel(IsingParams(90, J, 0.0, 1.0))
    print(f"  J={J:3.1f}  F/N^2 = {F / 90**2:.5f}")

# The transverse QFI saturates at N/(B+2J)^2 at low temperature.
print("\nN = 50, J = 2, B = 0.05:")
for beta in (0.1, 1.0, 10.0, 100.0):
    p = IsingParams(50, 2.0, 0.05, beta)
    print(f"  beta={beta:6.1f}  parallel {qfi_parallel(p):.4e}  transverse {qfi_transverse(p):.6f}")
print(f"  plateau N/(B+2J)^2 = {50 / 4.05**2:.6f}")

# Deep in the ordered phase the parallel QFI underflows; the log form does not.
p = IsingParams(10_000, 1.0, 0.3, 1000.0)
print(f"\nN = 1e4, beta J = 1e3: F = {qfi_parallel(p)!r}, ln F = {log_qfi_parallel(p):.3f}")

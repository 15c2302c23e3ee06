"""A single qubit as a thermal thermometer for a field along z.

H = Delta (cos(alpha) Z + sin(alpha) X) and we estimate a small extra
field theta Z.  The QFI splits into a part from population changes and a
part from the rotation of the eigenbasis.
"""

import numpy as np

from gibbsqfi import SIGMA_X, SIGMA_Z, finite_T_bound, qfi_thermal

Delta, beta = 1.0, 2.0
print(f"Delta = {Delta}, beta = {beta}, bound beta^2 ||Z||^2 / 4 = {finite_T_bound(SIGMA_Z, beta):.4f}\n")
print(f"{'alpha':>8} {'total':>10} {'diag':>10} {'offdiag':>10}")
for alpha in np.linspace(0, np.pi / 2, 7):
    H = Delta * (np.cos(alpha) * SIGMA_Z + np.sin(alpha) * SIGMA_X)
    F = qfi_thermal(H, SIGMA_Z, beta)
    print(f"{alpha:8.4f} {F.total:10.6f} {F.diag:10.6f} {F.offdiag:10.6f}")

# At alpha = 0 only populations carry information and it dies as e^{-2 beta Delta}.
# At alpha = pi/2 the rotated eigenbasis keeps 1/Delta^2 as beta grows.
print("\nlow temperature:")
for beta in (5.0, 10.0, 20.0):
    par = qfi_thermal(Delta * SIGMA_Z, SIGMA_Z, beta).total
    perp = qfi_thermal(Delta * SIGMA_X, SIGMA_Z, beta).total
    print(f"  beta={beta:5.1f}  parallel {par:.3e}  transverse {perp:.6f}")

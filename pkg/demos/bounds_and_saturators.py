"""Precision bounds and the Hamiltonians that reach them.

For a random generator H' we build the commuting saturator (finite-T bound)
and the gapped saturator (ground-state bound), then compare against random
control Hamiltonians.
"""

import numpy as np

from gibbsqfi import (
    classical_decay_bound,
    commuting_saturator,
    finite_T_bound,
    gapped_bound,
    gapped_saturator,
    low_T_qfi,
    qfi_thermal,
    random_hermitian,
    spectral_seminorm,
)

rng = np.random.default_rng(3)
D, beta = 5, 1.5
Hp = random_hermitian(D, rng)
print(f"||H'|| = {spectral_seminorm(Hp):.4f}")

bound = finite_T_bound(Hp, beta)
random_best = max(qfi_thermal(random_hermitian(D, rng), Hp, beta).total for _ in range(200))
best = qfi_thermal(commuting_saturator(Hp, 0.0, 20 / beta), Hp, beta).total
print(f"\nfinite-T bound          {bound:.6f}")
print(f"best of 200 random H    {random_best:.6f}")
print(f"commuting saturator     {best:.6f}")

Delta = 1.0
H = gapped_saturator(Hp, Delta)
print(f"\ngapped bound ||H'||^2/Delta^2 = {gapped_bound(Hp, Delta):.6f}")
print(f"ground-state QFI of saturator = {low_T_qfi(H, Hp):.6f}")

# the coherent saturator keeps its QFI while any classical (commuting) probe
# with the same gap is exponentially suppressed
print(f"\n{'beta':>6} {'coherent':>10} {'classical cap':>14}")
for beta in (5.0, 10.0, 20.0, 40.0):
    F = qfi_thermal(H, Hp, beta).total
    print(f"{beta:6.1f} {F:10.6f} {classical_decay_bound(D, beta, Delta, spectral_seminorm(Hp)):14.3e}")

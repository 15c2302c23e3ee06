"""The Bures and logarithmic multiplications by a state.

Both act entrywise in the eigenbasis of rho.  Near the maximally mixed state
they differ only at second order, and the composite map sets the thermal QFI.
"""

import numpy as np

from gibbsqfi import GibbsState, SuperopKind, apply_superop, generalized_variance, gibbs_state, random_hermitian, variance

rng = np.random.default_rng(5)
D = 4
rho = gibbs_state(random_hermitian(D, rng), 1.0)
A = random_hermitian(D, rng)

back = apply_superop(SuperopKind.BURES_INVERSE, rho, apply_superop(SuperopKind.BURES, rho, A))
print(f"Bures round trip error {np.linalg.norm(back - A):.2e}")
print(f"variance {variance(rho, A):.6f} >= generalized variance {generalized_variance(rho, A):.6f}")

X = random_hermitian(D, rng)
print("\neps      ||J_L(A) - J_B(A)||")
for eps in (1e-1, 5e-2, 2.5e-2, 1.25e-2):
    R = np.eye(D) + eps * X
    sigma = GibbsState.from_density(R / np.trace(R).real)
    gap = np.linalg.norm(apply_superop(SuperopKind.LOG, sigma, A) - apply_superop(SuperopKind.BURES, sigma, A))
    print(f"{eps:<8} {gap:.3e}")

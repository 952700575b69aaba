"""
Quantum states as a classical phase space
=========================================

A complex state in C^N is a real vector in R^2N.  The Hermitian product
splits into a flat metric and a symplectic form, and Schroedinger
evolution becomes Hamilton's equations for the function <psi|H|psi>.
"""

import numpy as np

from entgeom.realform import (
    hamiltonian_vector_field,
    poisson_bracket,
    realify,
    scalar_product_parts,
    schrodinger_exact,
    trajectory,
)
from entgeom.states import random_hermitian, random_state

rng = np.random.default_rng(1)

# The real and imaginary parts of 2<psi|phi> are X.g.Y and X.Omega.Y
psi, phi = random_state(3, rng), random_state(3, rng)
g_part, omega_part = scalar_product_parts(realify(psi), realify(phi))
print("2<psi|phi>          =", 2 * np.vdot(psi, phi))
print("(X.g.Y, X.Omega.Y)  =", (g_part, omega_part))

# The Hamiltonian vector field of <H> is the Schroedinger velocity -iH psi
h = random_hermitian(3, rng)
xdot = hamiltonian_vector_field(h, realify(psi))
print("max |X_H - realify(-iH psi)| =", np.abs(xdot - realify(-1j * h @ psi)).max())

# Brackets of expectation values are expectation values of commutators
sx = np.array([[0, 1], [1, 0]])
sy = np.array([[0, -1j], [1j, 0]])
print("{<sx>, <sy>} at |0> =", poisson_bracket(sx, sy, realify([1, 0])))

# Integrate the flow and compare three schemes against the exact evolution
x0 = realify(psi)
exact = realify(schrodinger_exact(h, psi, 5.0))
for method in ("explicit-euler", "rk4", "implicit-midpoint"):
    _, xs = trajectory(h, x0, 5.0, 1e-2, method)
    norm_drift = abs(xs[-1] @ xs[-1] - x0 @ x0)
    print(f"{method:18s} endpoint error {np.linalg.norm(xs[-1] - exact):.2e}  norm drift {norm_drift:.2e}")

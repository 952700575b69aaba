"""
The maximally entangled states form a Lagrangian submanifold
============================================================

Inside the space of two-qubit (or two-qutrit) rays, the maximally
entangled states are an orbit of SU(N).  It has exactly half the real
dimension, and the symplectic form vanishes on it.  The product states,
by contrast, form a complex submanifold on which the form is nondegenerate.

We then look at the volume of the two-qubit orbit and how it responds to
deformations.
"""

import numpy as np

from entgeom.states import haar_unitary
from entgeom.submanifold import (
    EULER_VOLUME,
    euler_chart,
    induced_volume,
    lagrangian_report,
    random_variation_field,
    segre_report,
    volume_variation,
)

for n in (2, 3):
    rep = lagrangian_report(n, points=50, seed=n)
    print(f"N={n}: max |Omega| on the orbit {rep.max_violation:.1e}, dimension {rep.tangent_rank} of {rep.ambient_dim}")
    seg = segre_report(n, points=20, seed=n)
    print(f"      product states: Omega has rank {seg.omega_rank} on a {seg.tangent_rank}-dimensional tangent space")

# The two-qubit orbit is a real projective 3-space of volume pi^2
rng = np.random.default_rng(4)
chart = euler_chart(haar_unitary(2, rng))
print("orbit volume:", induced_volume(chart, 32), "  pi^2 =", EULER_VOLUME)

# Neither normal nor tangential deformations change the volume to first
# order; for normal ones this is minimality
for kind in ("normal", "tangential"):
    r = volume_variation(chart, random_variation_field(chart, rng, kind), 1e-3, 24)
    print(f"{kind:10s} field: dV/V = {r.first / r.volume:+.1e}")

# Deformations by a fixed traceless K push the orbit off itself and lose
# volume at second order: d2V = -2 Tr(K^2) V.  The orbit is minimal but not
# volume minimizing.
f = random_variation_field(chart, rng, modes=1)
k = f.generator(np.zeros((1, 3)))[0][0]
r = volume_variation(chart, f, 1e-3, 24)
print(f"constant K: d2V/V = {r.second / r.volume:+.4f}  -2 Tr(K^2) = {-2 * np.trace(k @ k).real:+.4f}")

"""
Entanglement as matrix theory
=============================

A state of two N-level systems is an N x N array Gamma.  Its singular
values are the Schmidt coefficients: rank one means a product state, and
a unitary Gamma means a maximally entangled one.
"""

import math

import numpy as np

from entgeom.bipartite import (
    entanglement_entropy,
    gamma_of_state,
    is_maximally_entangled,
    is_product,
    local_unitary_act,
    partial_trace,
    random_max_entangled,
    schmidt,
    segre_embed,
)
from entgeom.states import haar_unitary, random_state

rng = np.random.default_rng(3)
n = 3

product = gamma_of_state(segre_embed(random_state(n, rng), random_state(n, rng)))
generic = gamma_of_state(random_state(n * n, rng))
maximal = random_max_entangled(n, rng)

for name, g in (("product", product), ("generic", generic), ("maximal", maximal)):
    s = schmidt(g)
    print(
        f"{name:8s} schmidt {np.round(s.values, 4)}  entropy {entanglement_entropy(g):.4f}"
        f"  product {is_product(g)}  maximal {is_maximally_entangled(g)}"
    )
print("ln N =", math.log(n))

# The reduced state of a maximally entangled pair carries no information
print("reduced state of the maximal pair:\n", np.round(partial_trace(maximal), 12))

# Local unitaries move states around without changing the Schmidt spectrum
moved = local_unitary_act(haar_unitary(n, rng), haar_unitary(n, rng), generic)
print("spectrum change under local unitaries:", np.abs(schmidt(moved).values - schmidt(generic).values).max())

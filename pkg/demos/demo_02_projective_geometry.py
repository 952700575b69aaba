"""
Distances between rays
======================

Physical states are rays, so the natural geometry lives on projective
space.  The Fubini-Study metric ignores the overall scale and phase, and
its geodesic distance is the arccosine of the overlap.
"""

import math

import numpy as np

from entgeom.fubini_study import (
    KAHLER_CONSTANT,
    curve_length,
    fs_distance,
    fs_metric,
    fs_symplectic,
    geodesic,
    horizontal_project,
)
from entgeom.states import random_state

rng = np.random.default_rng(2)
psi = random_state(4, rng)

# Moving along psi or i psi changes nothing physical
u = horizontal_project(psi, random_state(4, rng)).direction
print("g(psi, u), g(i psi, u):", fs_metric(psi, psi, u), fs_metric(psi, 1j * psi, u))

# Metric and symplectic form are tied by the complex structure
print("Omega(u, iu) / g(u, u) =", fs_symplectic(psi, u, 1j * u) / fs_metric(psi, u, u), "=", KAHLER_CONSTANT)

# Orthogonal states sit at the maximal distance pi/2
t = np.linspace(0, math.pi / 2, 2000)
arc = np.stack([np.cos(t), np.sin(t)], axis=1)
print("great-circle length:", curve_length(arc), "  pi/2 =", math.pi / 2)

# A sampled geodesic has the arccos length, whatever phases the samples carry
phi = random_state(4, rng)
path = geodesic(psi, phi, 500)
path = path * np.exp(1j * rng.uniform(0, 2 * np.pi, len(path)))[:, None]
print("geodesic length:", curve_length(path), "  arccos overlap:", fs_distance(psi, phi))

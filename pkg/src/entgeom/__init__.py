"""Numerical geometry of pure quantum states and bipartite entanglement.

Submodules
----------
states        state vectors, density matrices, observables, Haar sampling
realform      Hilbert space as a flat phase space; Schroedinger flow as Hamiltonian flow
fubini_study  Fubini-Study metric and symplectic form on projective space
bipartite     square-array form of bipartite states, Schmidt data, partial traces
submanifold   charts, pulled-back forms, Lagrangian and volume-variation checks
checks        report-producing batch checks used by the command line
"""

from . import bipartite, checks, fubini_study, linalg, realform, states, submanifold
from .errors import *  # noqa: F401,F403

__version__ = "0.1.0"

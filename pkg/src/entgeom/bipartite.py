"""Bipartite pure states of C^N (x) C^N as square arrays.

A state ``Psi`` of dimension N^2 is reshaped row-major into the array
``Gamma`` with ``Psi = vec(Gamma) / sqrt(N)``, i.e. composite index
``alpha = i * N + j``.  The factor ``1/sqrt(N)`` lives in the state map, so a
normalised state has ``Tr(Gamma Gamma^H) = N`` and is maximally entangled
exactly when ``Gamma`` is unitary.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, NotSquareDim, NotUnitary
from .linalg import jacobi_svd
from .states import haar_unitary, is_unitary, normalize

__all__ = [
    "SchmidtDecomposition",
    "gamma_of_state",
    "state_of_gamma",
    "schmidt",
    "is_product",
    "segre_embed",
    "partial_trace",
    "is_maximally_entangled",
    "random_max_entangled",
    "local_unitary_act",
    "entanglement_entropy",
]


@dataclass(frozen=True)
class SchmidtDecomposition:
    """``Gamma / sqrt(N) = left @ diag(values) @ right_h``, values descending."""

    values: np.ndarray
    left: np.ndarray
    right_h: np.ndarray
    tol: float = 1e-10

    @property
    def rank(self):
        return int(np.sum(self.values > self.tol))

    @property
    def reduced_spectrum(self):
        return self.values**2

    def reconstruct(self):
        return self.left @ np.diag(self.values) @ self.right_h


def _square_gamma(gamma):
    g = np.asarray(gamma, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise DimensionMismatch(f"Gamma must be a square array, got shape {g.shape}")
    return g


def gamma_of_state(psi):
    psi = np.asarray(psi, dtype=complex)
    n = math.isqrt(psi.size)
    if n * n != psi.size or n == 0:
        raise NotSquareDim(f"state dimension {psi.size} is not a perfect square")
    return math.sqrt(n) * psi.reshape(n, n)


def state_of_gamma(gamma):
    g = _square_gamma(gamma)
    return g.reshape(-1) / math.sqrt(g.shape[0])


def schmidt(gamma, tol=1e-10):
    g = _square_gamma(gamma)
    u, s, vh = jacobi_svd(g / math.sqrt(g.shape[0]))
    return SchmidtDecomposition(values=s, left=u, right_h=vh, tol=tol)


def is_product(gamma, tol=1e-8):
    """Schmidt rank one within ``tol`` (``sigma_2 / sigma_1 <= tol``)."""
    s = schmidt(gamma).values
    return bool(s.size < 2 or s[1] <= tol * s[0])


def segre_embed(phi, lam):
    """Product state ``phi (x) lam`` (both factors normalised first)."""
    phi = normalize(phi)
    lam = normalize(lam)
    if phi.size != lam.size:
        raise DimensionMismatch("factors must have equal dimension")
    return np.kron(phi, lam)


def partial_trace(gamma, side="second"):
    """Reduced state after tracing out one factor.

    ``side="second"`` keeps the first subsystem, ``Gamma Gamma^H / N``;
    ``side="first"`` keeps the second, ``Gamma^T Gamma^* / N``.
    """
    g = _square_gamma(gamma)
    n = g.shape[0]
    if side == "second":
        return g @ g.conj().T / n
    if side == "first":
        return g.T @ g.conj() / n
    raise ValueError(f"side must be 'first' or 'second', got {side!r}")


def is_maximally_entangled(gamma, tol=1e-10):
    g = _square_gamma(gamma)
    return bool(np.max(np.abs(g @ g.conj().T - np.eye(g.shape[0]))) <= tol)


def random_max_entangled(n, rng):
    """Haar-random point of the maximally entangled orbit, as a unitary ``Gamma``."""
    if n < 2:
        raise ValueError("n must be >= 2")
    return haar_unitary(n, rng)


def local_unitary_act(u, v, gamma):
    """``Gamma -> U Gamma V^T``, the array form of ``(U (x) V) Psi``."""
    g = _square_gamma(gamma)
    u = np.asarray(u, dtype=complex)
    v = np.asarray(v, dtype=complex)
    if u.shape != g.shape or v.shape != g.shape:
        raise DimensionMismatch("local unitaries must match the local dimension")
    if not (is_unitary(u) and is_unitary(v)):
        raise NotUnitary("local operators must be unitary within 1e-10")
    return u @ g @ v.T


def entanglement_entropy(gamma):
    """Von Neumann entropy (natural log) of the reduced state."""
    p = schmidt(gamma).values ** 2
    p = p[p > 0.0]
    return float(max(0.0, -np.sum(p * np.log(p))))

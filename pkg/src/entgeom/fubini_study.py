"""Fubini-Study metric and symplectic form on complex projective space.

Tangent vectors are complex vectors ``u`` at a representative ``psi``.
Both forms are written in homogeneous coordinates, so they are invariant
under ``psi -> z psi`` (with ``u -> z u``) and vanish on the vertical
directions ``psi`` and ``i psi``.

Wedge convention: ``(a ^ b)(u, v) = a(u) b(v) - a(v) b(u)``.  With it the
symplectic form and metric are related by ``Omega(u, i u) = 2 g(u, u)``
(:data:`KAHLER_CONSTANT`).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BasePointMismatch, TooCoarse, ZeroVector

__all__ = [
    "KAHLER_CONSTANT",
    "TangentVector",
    "FubiniStudyForms",
    "horizontal_project",
    "fs_metric",
    "fs_symplectic",
    "fs_metric_eval",
    "fs_symplectic_eval",
    "fs_distance",
    "curve_length",
    "geodesic",
]

KAHLER_CONSTANT = 2.0


@dataclass(frozen=True)
class TangentVector:
    base: np.ndarray
    direction: np.ndarray
    horizontal: bool = False


def horizontal_project(psi, w):
    """Remove the component of ``w`` along ``psi``."""
    psi = np.asarray(psi, dtype=complex)
    w = np.asarray(w, dtype=complex)
    nsq = np.vdot(psi, psi).real
    if nsq <= 0.0:
        raise ZeroVector("base point is the zero vector")
    u = w - psi * (np.vdot(psi, w) / nsq)
    return TangentVector(base=psi, direction=u, horizontal=True)


def fs_metric(psi, u, v):
    """Fubini-Study metric ``g(u, v)`` at ``psi``.

    Works on stacked inputs: ``psi`` of shape ``(..., N)`` and tangents of
    shape ``(..., N)`` broadcast against it.
    """
    nsq = np.sum(np.abs(psi) ** 2, axis=-1)
    uv = np.sum(u * np.conj(v), axis=-1)
    upsi = np.sum(u * np.conj(psi), axis=-1)
    psiv = np.sum(psi * np.conj(v), axis=-1)
    return np.real(nsq * uv - upsi * psiv) / nsq**2


def fs_symplectic(psi, u, v):
    """Fubini-Study symplectic form ``Omega(u, v)`` at ``psi`` (stacked like :func:`fs_metric`)."""
    nsq = np.sum(np.abs(psi) ** 2, axis=-1)
    uv = np.sum(u * np.conj(v), axis=-1)
    vu = np.sum(v * np.conj(u), axis=-1)
    upsi = np.sum(u * np.conj(psi), axis=-1)
    vpsi = np.sum(v * np.conj(psi), axis=-1)
    psiv = np.sum(psi * np.conj(v), axis=-1)
    psiu = np.sum(psi * np.conj(u), axis=-1)
    val = 1j * (nsq * (uv - vu) - upsi * psiv + vpsi * psiu) / nsq**2
    return np.real(val)


@dataclass(frozen=True)
class FubiniStudyForms:
    """Bilinear evaluators of the Fubini-Study structures at a fixed base point."""

    base: np.ndarray
    norm_sq: float = field(init=False)

    def __post_init__(self):
        base = np.asarray(self.base, dtype=complex)
        nsq = float(np.vdot(base, base).real)
        if nsq <= 0.0:
            raise ZeroVector("base point is the zero vector")
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "norm_sq", nsq)

    def _direction(self, t):
        if isinstance(t, TangentVector):
            if t.base.shape != self.base.shape or not np.array_equal(t.base, self.base):
                raise BasePointMismatch("tangent vector is attached to a different base point")
            return t.direction
        return np.asarray(t, dtype=complex)

    def metric(self, u, v):
        return float(fs_metric(self.base, self._direction(u), self._direction(v)))

    def symplectic(self, u, v):
        return float(fs_symplectic(self.base, self._direction(u), self._direction(v)))


def fs_metric_eval(forms, u, v):
    return forms.metric(u, v)


def fs_symplectic_eval(forms, u, v):
    return forms.symplectic(u, v)


def fs_distance(psi, phi):
    """Geodesic distance ``arccos |<psi|phi>| / (|psi| |phi|)`` in ``[0, pi/2]``."""
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    overlap = abs(np.vdot(psi, phi)) / (np.linalg.norm(psi) * np.linalg.norm(phi))
    return float(np.arccos(min(1.0, overlap)))


def curve_length(samples, min_overlap=0.9):
    """Length of a sampled curve: sum of ``sqrt(g(delta, delta))`` over segments.

    Each segment's difference is measured in the metric at its first
    endpoint, so the sum is invariant under per-sample phase changes.
    Raises :class:`TooCoarse` if neighbouring samples overlap by less than
    ``min_overlap``.
    """
    pts = np.asarray(samples, dtype=complex)
    if pts.ndim != 2 or pts.shape[0] < 2:
        raise ValueError("need at least two samples")
    norms = np.linalg.norm(pts, axis=1)
    if np.any(norms == 0.0):
        raise ZeroVector("curve contains the zero vector")
    unit = pts / norms[:, None]
    a, b = unit[:-1], unit[1:]
    overlaps = np.abs(np.sum(np.conj(a) * b, axis=1))
    if np.any(overlaps <= min_overlap):
        k = int(np.argmin(overlaps))
        raise TooCoarse(f"segment {k} has overlap {overlaps[k]:.3f} <= {min_overlap}")
    delta = b - a
    seg = fs_metric(a, delta, delta)
    return float(np.sum(np.sqrt(np.maximum(seg, 0.0))))


def geodesic(psi, phi, samples):
    """Samples of the minimising geodesic from the ray of ``psi`` to that of ``phi``.

    ``gamma(t) = cos(t) psi + sin(t) perp`` for ``t`` in ``[0, fs_distance]``,
    where ``perp`` is the unit horizontal direction towards ``phi``.
    """
    psi = np.asarray(psi, dtype=complex)
    phi = np.asarray(phi, dtype=complex)
    psi = psi / np.linalg.norm(psi)
    phi = phi / np.linalg.norm(phi)
    overlap = np.vdot(psi, phi)
    if abs(overlap) > 0.0:
        phi = phi * (abs(overlap) / overlap)
    d = fs_distance(psi, phi)
    perp = phi - psi * np.vdot(psi, phi)
    nrm = np.linalg.norm(perp)
    if nrm < 1e-15:
        return np.repeat(psi[None, :], samples, axis=0)
    perp = perp / nrm
    t = np.linspace(0.0, d, samples)
    return np.cos(t)[:, None] * psi[None, :] + np.sin(t)[:, None] * perp[None, :]

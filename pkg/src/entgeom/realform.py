"""Hilbert space as a flat phase space.

A complex state ``psi`` in C^N is written as the real 2N-vector
``X = (x, y)`` with ``psi = (x + i y) / sqrt(2)``.  With that scale the
scalar product splits as ``2 <psi|phi> = X.g.Y + i X.Omega.Y`` with
``g = 1`` and ``Omega = [[0, 1], [-1, 0]]``, and the Schroedinger equation
``i dpsi/dt = H psi`` is exactly Hamilton's equation

    dX^I/dt = OmegaInv^{IJ} d<H>/dX^J,   OmegaInv = [[0, 1], [-1, 0]],

for the Hamiltonian function ``<H>(X) = <psi|H|psi>``.  Note that
``OmegaInv @ Omega = -1``: the bracket uses the same block pattern as the
form itself, and this choice of sign is the one that reproduces the
Schroedinger flow (see ``tests/test_realform.py::test_convention_anchor``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from .errors import (
    DimensionMismatch,
    NonpositiveStep,
    NotHermitian,
    OddDimension,
    StepBudgetExceeded,
)
from .linalg import jacobi_eigh
from .states import check_hermitian

__all__ = [
    "FlatKahlerStructure",
    "QuadraticObservable",
    "realify",
    "complexify",
    "split_hermitian",
    "scalar_product_parts",
    "observable_value_and_gradient",
    "poisson_bracket",
    "bracket_matrix",
    "quadratic_bracket",
    "hamiltonian_vector_field",
    "schrodinger_exact",
    "integrate_flow",
    "trajectory",
    "trajectory_csv",
    "step_count",
]

SQRT2 = math.sqrt(2.0)
MAX_STEPS = 10**7


@dataclass(frozen=True)
class FlatKahlerStructure:
    """Constant metric, symplectic form and Poisson tensor on R^{2N}."""

    n: int

    @property
    def dim(self):
        return 2 * self.n

    @property
    def metric(self):
        return np.eye(2 * self.n)

    @property
    def symplectic(self):
        return _block(self.n)

    @property
    def poisson(self):
        # same block pattern as the form; poisson @ symplectic = -1
        return _block(self.n)

    inverse_sign = -1


def _block(n):
    one = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, one], [-one, zero]])


@dataclass(frozen=True)
class QuadraticObservable:
    """Hermitian ``A = S + i L`` split into real symmetric ``S`` and antisymmetric ``L``."""

    source: np.ndarray
    sym: np.ndarray
    antisym: np.ndarray

    @property
    def n(self):
        return self.sym.shape[0]

    def real_matrix(self):
        """Symmetric ``M`` with ``<A>(X) = X.M.X / 2``."""
        s, l = self.sym, self.antisym
        return np.block([[s, -l], [l, s]])


def realify(psi):
    """``psi -> X = sqrt(2) (Re psi, Im psi)``."""
    psi = np.asarray(psi, dtype=complex)
    return SQRT2 * np.concatenate([psi.real, psi.imag])


def complexify(x):
    """Inverse of :func:`realify`."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size % 2:
        raise OddDimension(f"real vector must have even length, got {x.size}")
    n = x.size // 2
    return (x[:n] + 1j * x[n:]) / SQRT2


def split_hermitian(a):
    try:
        a = check_hermitian(a)
    except DimensionMismatch as exc:
        raise NotHermitian(str(exc)) from None
    s = a.real.copy()
    l = a.imag.copy()
    # exact symmetry: the Hermitian check above allows 1e-12 slack
    s = 0.5 * (s + s.T)
    l = 0.5 * (l - l.T)
    return QuadraticObservable(source=a, sym=s, antisym=l)


def _as_observable(q):
    return q if isinstance(q, QuadraticObservable) else split_hermitian(q)


def scalar_product_parts(x, y):
    """``(X.g.Y, X.Omega.Y)``, equal to ``2 (Re, Im) <psi|phi>``."""
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise DimensionMismatch(f"{x.shape} vs {y.shape}")
    n = x.size // 2
    g_part = float(x @ y)
    omega_part = float(x[:n] @ y[n:] - x[n:] @ y[:n])
    return g_part, omega_part


def _check_dims(q, x):
    if 2 * q.n != np.asarray(x).size:
        raise DimensionMismatch(f"observable acts on C^{q.n}, state has {np.asarray(x).size} real components")


def observable_value_and_gradient(q, x):
    """Value ``<psi|A|psi>`` and its exact gradient ``M X`` in real coordinates."""
    q = _as_observable(q)
    x = np.asarray(x, dtype=float)
    _check_dims(q, x)
    mx = q.real_matrix() @ x
    return 0.5 * float(x @ mx), mx


def poisson_bracket(f, g, x):
    """``{<f>, <g>}(X) = dF . OmegaInv . dG``."""
    f = _as_observable(f)
    g = _as_observable(g)
    x = np.asarray(x, dtype=float)
    _check_dims(f, x)
    _check_dims(g, x)
    _, df = observable_value_and_gradient(f, x)
    _, dg = observable_value_and_gradient(g, x)
    n = f.n
    return float(df[:n] @ dg[n:] - df[n:] @ dg[:n])


def quadratic_bracket(mf, mg, x):
    """Bracket of the quadratic functions ``X.Mf.X / 2`` and ``X.Mg.X / 2`` at ``X``."""
    x = np.asarray(x, dtype=float)
    df = mf @ x
    dg = mg @ x
    n = x.size // 2
    return float(df[:n] @ dg[n:] - df[n:] @ dg[:n])


def bracket_matrix(mf, mg):
    """Symmetric ``B`` with ``{X.Mf.X/2, X.Mg.X/2} = X.B.X / 2``.

    Computed purely from the real structure (``B = Mf J Mg - Mg J Mf``), so
    it can be used to test the Jacobi identity without any appeal to
    commutators.
    """
    j = _block(mf.shape[0] // 2)
    return mf @ j @ mg - mg @ j @ mf


def hamiltonian_vector_field(h, x):
    """``dX/dt = OmegaInv grad <H>``; equals ``realify(-1j * H @ psi)``."""
    h = _as_observable(h)
    x = np.asarray(x, dtype=float)
    _check_dims(h, x)
    _, grad = observable_value_and_gradient(h, x)
    n = h.n
    return np.concatenate([grad[n:], -grad[:n]])


def _flow_matrix(h):
    n = h.n
    m = h.real_matrix()
    return np.vstack([m[n:], -m[:n]])


def schrodinger_exact(h, psi0, t):
    """``exp(-i H t) psi0`` through the eigen-decomposition of ``H``."""
    h = check_hermitian(h)
    psi0 = np.asarray(psi0, dtype=complex)
    if h.shape[0] != psi0.size:
        raise DimensionMismatch(f"H is {h.shape}, state has dim {psi0.size}")
    w, v = jacobi_eigh(h)
    return v @ (np.exp(-1j * w * t) * (v.conj().T @ psi0))


def step_count(t, dt):
    if not dt > 0:
        raise NonpositiveStep(f"dt must be positive, got {dt}")
    if t < 0:
        raise NonpositiveStep(f"t must be nonnegative, got {t}")
    steps = math.ceil(t / dt - 1e-9)
    if steps > MAX_STEPS:
        raise StepBudgetExceeded(f"t/dt = {t / dt:.3g} exceeds {MAX_STEPS}")
    return steps


def _stepper(h, dt, method):
    """Return a one-step map ``X -> X'`` for the linear field ``A X``."""
    a = _flow_matrix(h)
    if method == "explicit-euler":
        return lambda x: x + dt * (a @ x)
    if method == "rk4":
        def rk4(x):
            k1 = a @ x
            k2 = a @ (x + 0.5 * dt * k1)
            k3 = a @ (x + 0.5 * dt * k2)
            k4 = a @ (x + dt * k3)
            return x + dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4)
        return rk4
    if method == "implicit-midpoint":
        eye = np.eye(a.shape[0])
        lu = lu_factor(eye - 0.5 * dt * a)
        rhs = eye + 0.5 * dt * a
        return lambda x: lu_solve(lu, rhs @ x)
    raise ValueError(f"unknown method {method!r}")


def integrate_flow(h, x0, t, dt, method="rk4"):
    """Integrate the Hamiltonian flow of ``<H>`` from ``X0`` up to time ``t``.

    The interval is split into ``ceil(t / dt)`` equal steps, so the step
    actually used is ``t / ceil(t / dt) <= dt``.

    Parameters
    ----------
    h : QuadraticObservable or array_like
        Hamiltonian.
    x0 : array_like
        Initial real state vector.
    method : {"explicit-euler", "rk4", "implicit-midpoint"}
        ``implicit-midpoint`` is symplectic; each step is one solve with a
        matrix factorised once up front.
    """
    return trajectory(h, x0, t, dt, method)[1][-1]


def trajectory(h, x0, t, dt, method="rk4"):
    """Times and states of the integrated flow, including the initial point."""
    h = _as_observable(h)
    x = np.array(x0, dtype=float)
    _check_dims(h, x)
    steps = step_count(t, dt)
    if steps == 0:
        return np.zeros(1), x[None, :].copy()
    h_step = t / steps
    step = _stepper(h, h_step, method)
    xs = np.empty((steps + 1, x.size))
    xs[0] = x
    for k in range(steps):
        x = step(x)
        xs[k + 1] = x
    return h_step * np.arange(steps + 1), xs


def trajectory_csv(h, times, xs):
    """CSV text with header ``t,re_0,...,im_{N-1},energy,norm``.

    ``energy`` is ``<psi|H|psi>`` and ``norm`` is ``<psi|psi>``.
    """
    h = _as_observable(h)
    n = h.n
    header = ["t"] + [f"re_{k}" for k in range(n)] + [f"im_{k}" for k in range(n)] + ["energy", "norm"]
    lines = [",".join(header)]
    m = h.real_matrix()
    for t, x in zip(times, xs):
        psi = complexify(x)
        energy = 0.5 * float(x @ m @ x)
        norm = float(np.vdot(psi, psi).real)
        row = [t, *psi.real, *psi.imag, energy, norm]
        lines.append(",".join(repr(float(v)) for v in row))
    return "\n".join(lines) + "\n"

"""Batch checks returning JSON-ready report dictionaries.

Every report carries ``check``, ``n``, ``points``, ``max_violation``,
``tangent_rank``, ``ambient_dim``, ``tolerance``, ``pass``, ``seed`` and
``wall_ms``; checks that have no tangent space report ``None`` for the two
rank fields.  ``wall_ms`` is ``None`` unless timing is requested, so that
reports are reproducible byte for byte.
"""

from __future__ import annotations

import math
import time

import numpy as np

from . import realform as rf
from .fubini_study import curve_length, fs_distance, geodesic
from .states import haar_unitary, random_hermitian, random_state
from .submanifold import (
    euler_chart,
    induced_volume,
    lagrangian_report,
    monte_carlo_volume,
    random_variation_field,
    segre_report,
    volume_variation,
)

__all__ = [
    "FLOW_TOLERANCE",
    "default_hamiltonian",
    "lagrangian_check",
    "segre_check",
    "minimal_check",
    "variation_sweep",
    "volume_check",
    "flow_check",
    "bracket_check",
    "distance_check",
    "length_check",
]

FLOW_TOLERANCE = {"rk4": 1e-10, "implicit-midpoint": 1e-6, "explicit-euler": 1e-2}


def _base(check, n, points, tol, passed, max_violation, seed):
    return {
        "check": check,
        "n": n,
        "points": points,
        "max_violation": float(max_violation),
        "tangent_rank": None,
        "ambient_dim": None,
        "tolerance": tol,
        "pass": bool(passed),
        "seed": seed,
        "wall_ms": None,
    }


def _finish(report, start, timing):
    if timing:
        report["wall_ms"] = (time.perf_counter() - start) * 1e3
    return report


def lagrangian_check(n=2, points=100, tol=1e-10, seed=0, timing=False):
    rep = lagrangian_report(n, points, tol, rng=np.random.default_rng(seed), seed=seed).as_dict()
    if not timing:
        rep["wall_ms"] = None
    return rep


def segre_check(n=2, points=100, tol=1e-10, seed=0, timing=False):
    rep = segre_report(n, points, tol, rng=np.random.default_rng(seed), seed=seed).as_dict()
    if not timing:
        rep["wall_ms"] = None
    return rep


def minimal_check(
    n=2,
    normal_fields=20,
    tangential_fields=5,
    grid=32,
    epsilon=1e-3,
    tol=1e-2,
    tangential_tol=1e-3,
    second_floor=-1e-2,
    seed=0,
    timing=False,
):
    """First and second volume variations of the N = 2 orbit.

    Passes iff ``|dV| / V <= tol`` for every random normal field,
    ``|dV| / V <= tangential_tol`` for every tangential field, and
    ``d2V >= second_floor * V`` for every normal field.
    """
    if n != 2:
        raise ValueError("volume variation is implemented for n = 2 only")
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    chart = euler_chart(haar_unitary(2, rng))
    normal, tangential = [], []
    for _ in range(normal_fields):
        f = random_variation_field(chart, rng, "normal")
        normal.append(volume_variation(chart, f, epsilon, grid))
    for _ in range(tangential_fields):
        f = random_variation_field(chart, rng, "tangential")
        tangential.append(volume_variation(chart, f, epsilon, grid))
    v0 = normal[0].volume if normal else induced_volume(chart, grid)
    first_ratios = [abs(r.first) / r.volume for r in normal]
    tang_ratios = [abs(r.first) / r.volume for r in tangential]
    second_ratios = [r.second / r.volume for r in normal]
    passed = (
        all(x <= tol for x in first_ratios)
        and all(x <= tangential_tol for x in tang_ratios)
        and all(x >= second_floor for x in second_ratios)
    )
    rep = _base("minimal", n, grid**3, tol, passed, max(first_ratios, default=0.0), seed)
    rep.update(
        tangent_rank=3,
        ambient_dim=6,
        volume=v0,
        epsilon=epsilon,
        grid=grid,
        normal_fields=normal_fields,
        tangential_fields=tangential_fields,
        tangential_max_violation=max(tang_ratios, default=0.0),
        tangential_tolerance=tangential_tol,
        min_second_variation=min(second_ratios, default=0.0),
        second_variation_floor=second_floor,
    )
    return _finish(rep, start, timing)


def variation_sweep(epsilons, grid=32, seed=0):
    """Volume variations of the first normal field of :func:`minimal_check` over several step sizes."""
    rng = np.random.default_rng(seed)
    chart = euler_chart(haar_unitary(2, rng))
    field = random_variation_field(chart, rng, "normal")
    return [volume_variation(chart, field, e, grid) for e in epsilons]


def volume_check(grid=32, samples=200_000, rel_tol=1e-2, base_tol=5e-3, seed=0, timing=False):
    """Quadrature volume of the N = 2 orbit against Monte Carlo and a second base point."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    chart = euler_chart(haar_unitary(2, rng))
    other = euler_chart(haar_unitary(2, rng))
    v_quad = induced_volume(chart, grid)
    v_other = induced_volume(other, grid)
    v_mc, v_err = monte_carlo_volume(chart, samples, rng)
    mc_dev = abs(v_quad - v_mc) / v_quad
    base_dev = abs(v_quad - v_other) / v_quad
    rep = _base("volume", 2, grid**3, rel_tol, mc_dev <= rel_tol and base_dev <= base_tol, mc_dev, seed)
    rep.update(
        tangent_rank=3,
        ambient_dim=6,
        volume=v_quad,
        volume_other_base=v_other,
        volume_monte_carlo=v_mc,
        monte_carlo_stderr=v_err,
        base_point_deviation=base_dev,
        base_point_tolerance=base_tol,
    )
    return _finish(rep, start, timing)


def default_hamiltonian(n):
    """``diag(1, -1, 0, ..., 0)``; sigma_z for n = 2."""
    d = np.zeros(n)
    d[0], d[1] = 1.0, -1.0
    return np.diag(d).astype(complex)


def flow_check(n=2, dt=1e-3, t=1.0, method="rk4", hamiltonian=None, state=None, tol=None, seed=0, timing=False):
    """Integrated Hamiltonian flow against the exact Schroedinger evolution.

    ``max_violation`` is the Euclidean (g) norm of the difference of the
    final real state vectors.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    h = default_hamiltonian(n) if hamiltonian is None else np.asarray(hamiltonian, dtype=complex)
    psi0 = random_state(h.shape[0], rng) if state is None else np.asarray(state, dtype=complex)
    tol = FLOW_TOLERANCE[method] if tol is None else tol
    x_num = rf.integrate_flow(h, rf.realify(psi0), t, dt, method)
    x_exact = rf.realify(rf.schrodinger_exact(h, psi0, t))
    err = float(np.linalg.norm(x_num - x_exact))
    q = rf.split_hermitian(h)
    e0, _ = rf.observable_value_and_gradient(q, rf.realify(psi0))
    e1, _ = rf.observable_value_and_gradient(q, x_num)
    rep = _base("flow", h.shape[0], rf.step_count(t, dt), tol, err <= tol, err, seed)
    rep.update(
        method=method,
        dt=dt,
        t=t,
        energy_drift=abs(e1 - e0),
        norm_drift=abs(float(x_num @ x_num) - float(rf.realify(psi0) @ rf.realify(psi0))),
    )
    return _finish(rep, start, timing)


def bracket_check(n=2, points=50, jacobi_tol=1e-9, commutator_tol=1e-10, seed=0, timing=False):
    """Poisson algebra of quadratic observables at random points.

    Three residuals are measured for random Hermitian triples: antisymmetry
    (must vanish exactly), the Jacobi identity (computed from the real
    bracket matrices only) and the correspondence
    ``{<A>, <B>} = <-i [A, B]>``.
    """
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    anti = jac = comm = 0.0
    for _ in range(points):
        a, b, c = (random_hermitian(n, rng) for _ in range(3))
        x = rf.realify(random_state(n, rng))
        qa, qb, qc = (rf.split_hermitian(m) for m in (a, b, c))
        ab = rf.poisson_bracket(qa, qb, x)
        anti = max(anti, abs(ab + rf.poisson_bracket(qb, qa, x)))
        ma, mb, mc = qa.real_matrix(), qb.real_matrix(), qc.real_matrix()
        cyc = (
            rf.quadratic_bracket(rf.bracket_matrix(ma, mb), mc, x)
            + rf.quadratic_bracket(rf.bracket_matrix(mb, mc), ma, x)
            + rf.quadratic_bracket(rf.bracket_matrix(mc, ma), mb, x)
        )
        jac = max(jac, abs(cyc))
        target, _ = rf.observable_value_and_gradient(-1j * (a @ b - b @ a), x)
        comm = max(comm, abs(ab - target))
    passed = anti == 0.0 and jac <= jacobi_tol and comm <= commutator_tol
    rep = _base("bracket", n, points, commutator_tol, passed, max(jac, comm), seed)
    rep.update(
        antisymmetry_residual=anti,
        jacobi_residual=jac,
        jacobi_tolerance=jacobi_tol,
        commutator_residual=comm,
    )
    return _finish(rep, start, timing)


def distance_check(psi=None, phi=None, n=2, points=1000, tol=1e-3, seed=0, timing=False):
    """``arccos`` distance against the length of the sampled geodesic."""
    start = time.perf_counter()
    rng = np.random.default_rng(seed)
    psi = random_state(n, rng) if psi is None else np.asarray(psi, dtype=complex)
    phi = random_state(psi.size, rng) if phi is None else np.asarray(phi, dtype=complex)
    d = fs_distance(psi, phi)
    length = curve_length(geodesic(psi, phi, points))
    dev = abs(length - d)
    rep = _base("distance", psi.size, points, tol, dev <= tol, dev, seed)
    rep.update(distance=d, geodesic_length=length)
    return _finish(rep, start, timing)


def length_check(samples=None, n=2, points=10_000, tol=1e-3, seed=0, timing=False):
    """Length of a sampled curve.

    Without samples, measures the great-circle arc ``(cos t, sin t, 0, ...)``
    for ``t`` in ``[0, pi/2]`` and compares with ``pi/2``; with samples, the
    reference is the distance between the curve's endpoints (a lower bound,
    reached for geodesics).
    """
    start = time.perf_counter()
    if samples is None:
        t = np.linspace(0.0, math.pi / 2, points)
        samples = np.zeros((points, n), dtype=complex)
        samples[:, 0] = np.cos(t)
        samples[:, 1] = np.sin(t)
        reference = math.pi / 2
    else:
        samples = np.asarray(samples, dtype=complex)
        reference = fs_distance(samples[0], samples[-1])
    length = curve_length(samples)
    dev = abs(length - reference)
    rep = _base("length", samples.shape[1], samples.shape[0], tol, dev <= tol, dev, seed)
    rep.update(length=length, reference=reference)
    return _finish(rep, start, timing)

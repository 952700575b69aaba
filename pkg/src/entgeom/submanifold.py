"""Submanifolds of the bipartite pure-state space CP^{N^2 - 1}.

Two families are parametrised here:

* the maximally entangled orbit ``{W Gamma0 : W in SU(N)}`` (``Gamma0``
  unitary), of real dimension N^2 - 1, through exponential charts
  ``theta -> exp(i sum_a theta_a T_a) Gamma0`` and, for N = 2, an Euler-angle
  chart covering the whole orbit;
* the product states (image of the Segre map), of real dimension 4(N - 1).

On a chart we pull back the Fubini-Study metric and symplectic form, check
the two Lagrangian conditions (half dimension, vanishing form), and compute
the induced volume and its variation under normal and tangential
deformations.

Normal directions: at ``Gamma`` the horizontal tangent space of the ambient
projective space splits into ``vec(i H Gamma)`` (along the orbit) and
``vec(K Gamma)`` (normal), for ``H``, ``K`` Hermitian traceless.  The two are
orthogonal because ``Re Tr((i H)^H K) = Im Tr(H K) = 0``.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field

import numpy as np

from .errors import ImmersionLost, NotUnitary, OutOfDomain, SingularMetric
from .fubini_study import fs_metric, fs_symplectic
from .linalg import numerical_rank
from .states import haar_unitary, is_unitary, normalize, random_state

__all__ = [
    "SuNBasis",
    "gellmann_basis",
    "expi_frames",
    "Chart",
    "OrbitChart",
    "SegreChart",
    "maxent_chart",
    "euler_chart",
    "segre_chart",
    "PulledBackForm",
    "pullback_form",
    "pullback_matrices",
    "LagrangianReport",
    "lagrangian_report",
    "segre_report",
    "midpoint_nodes",
    "midpoint_rule",
    "induced_volume",
    "monte_carlo_volume",
    "VariationField",
    "random_variation_field",
    "VariationResult",
    "volume_variation",
    "sweep_csv",
    "RANK_RTOL",
    "EULER_VOLUME",
]

RANK_RTOL = 1e-8
# Volume of the N = 2 orbit (SO(3) with the induced Fubini-Study metric).
# With T_a = Pauli matrices the left-invariant generators i sigma_a / 2 have
# length 1/2, so SU(2) is a round 3-sphere of radius 1 (volume 2 pi^2) and
# the orbit SU(2)/Z_2 has half of that.
EULER_VOLUME = math.pi**2


# --------------------------------------------------------------------------
# su(N) basis and the exponential map


@dataclass(frozen=True)
class SuNBasis:
    """Hermitian traceless generators with ``Tr(T_a T_b) = 2 delta_ab``."""

    n: int
    matrices: np.ndarray

    def __len__(self):
        return self.matrices.shape[0]

    def combine(self, coeffs):
        """``sum_a c_a T_a`` for coefficient arrays of shape ``(..., N^2 - 1)``."""
        return np.tensordot(np.asarray(coeffs, dtype=float), self.matrices, axes=(-1, 0))


def gellmann_basis(n):
    """Generalised Gell-Mann matrices: symmetric, antisymmetric, then diagonal.

    ``n = 2`` gives the Pauli matrices in the order x, y, z.
    """
    if n < 2:
        raise ValueError("n must be >= 2")
    sym, anti, diag = [], [], []
    for j in range(n):
        for k in range(j + 1, n):
            s = np.zeros((n, n), dtype=complex)
            s[j, k] = s[k, j] = 1.0
            sym.append(s)
            a = np.zeros((n, n), dtype=complex)
            a[j, k] = -1j
            a[k, j] = 1j
            anti.append(a)
    for l in range(1, n):
        d = np.zeros(n)
        d[:l] = 1.0
        d[l] = -l
        diag.append(np.diag(math.sqrt(2.0 / (l * (l + 1))) * d).astype(complex))
    # interleave so n = 2 comes out as (sigma_x, sigma_y, sigma_z)
    offdiag = [m for pair in zip(sym, anti) for m in pair]
    return SuNBasis(n=n, matrices=np.array(offdiag + diag))


def expi_frames(h, gens):
    """``W = exp(i H)`` and its derivatives ``dW/dtheta_a`` for ``H = sum theta_a G_a``.

    Uses the eigen-decomposition of the Hermitian ``H`` and the divided
    difference formula ``dW[G] = V (L o (V^H G V)) V^H`` with
    ``L_jk = (e^{i l_j} - e^{i l_k}) / (l_j - l_k)``, written through ``sinc``
    so that (near-)degenerate eigenvalues need no special case.

    Parameters
    ----------
    h : ndarray, shape (M, n, n)
        Stack of Hermitian matrices.
    gens : ndarray, shape (d, n, n)
        Hermitian directions ``G_a``.

    Returns
    -------
    w : ndarray, shape (M, n, n)
    dw : ndarray, shape (M, d, n, n)
    """
    lam, v = np.linalg.eigh(h)
    vh = np.conj(np.swapaxes(v, -1, -2))
    e = np.exp(1j * lam)
    w = (v * e[:, None, :]) @ vh
    mean = 0.5 * (lam[:, :, None] + lam[:, None, :])
    half = 0.5 * (lam[:, :, None] - lam[:, None, :])
    kernel = 1j * np.exp(1j * mean) * np.sinc(half / np.pi)
    rotated = vh[:, None] @ gens[None] @ v[:, None]
    dw = v[:, None] @ (kernel[:, None] * rotated) @ vh[:, None]
    return w, dw


# --------------------------------------------------------------------------
# charts


def _as_batch(theta, dim):
    t = np.asarray(theta, dtype=float)
    single = t.ndim == 1
    t = np.atleast_2d(t)
    if t.shape[-1] != dim:
        raise ValueError(f"chart has {dim} parameters, got {t.shape[-1]}")
    return t, single


def _horizontal(psi, tangents):
    nsq = np.sum(np.abs(psi) ** 2, axis=-1)
    coef = np.einsum("mk,mdk->md", np.conj(psi), tangents) / nsq[:, None]
    return tangents - coef[..., None] * psi[:, None, :]


class Chart:
    """Parametrised patch ``theta -> psi(theta)`` of a submanifold of CP^{D-1}.

    Subclasses implement :meth:`frames`, returning points and raw tangent
    vectors for a batch of parameters.  :meth:`tangents` returns the
    horizontal projections.
    """

    dim: int
    lower: np.ndarray
    upper: np.ndarray

    def frames(self, thetas):
        raise NotImplementedError

    def contains(self, theta, slack=1e-12):
        t = np.atleast_2d(np.asarray(theta, dtype=float))
        return bool(np.all(t >= self.lower - slack) and np.all(t <= self.upper + slack))

    def check_domain(self, theta):
        if not self.contains(theta):
            raise OutOfDomain("parameters outside the chart domain")

    def point(self, theta):
        t, single = _as_batch(theta, self.dim)
        psi, _ = self.frames(t)
        return psi[0] if single else psi

    def tangents(self, theta):
        t, single = _as_batch(theta, self.dim)
        psi, tan = self.frames(t)
        tan = _horizontal(psi, tan)
        return tan[0] if single else tan

    def sample(self, rng, size):
        return rng.uniform(self.lower, self.upper, size=(size, self.dim))

    @property
    def box_volume(self):
        return float(np.prod(self.upper - self.lower))


class OrbitChart(Chart):
    """Chart ``theta -> vec(W(theta) Gamma0) / sqrt(N)`` of the maximally entangled orbit."""

    def __init__(self, gamma0, group, lower, upper):
        self.gamma0 = np.asarray(gamma0, dtype=complex)
        self.n = self.gamma0.shape[0]
        self._group = group
        self.lower = np.asarray(lower, dtype=float)
        self.upper = np.asarray(upper, dtype=float)
        self.dim = self.lower.size

    def group_frames(self, thetas):
        """``W(theta)`` and ``dW/dtheta_a`` for a batch, shapes ``(M, n, n)`` and ``(M, d, n, n)``."""
        return self._group(np.atleast_2d(thetas))

    def frames(self, thetas):
        w, dw = self.group_frames(thetas)
        m = w.shape[0]
        scale = 1.0 / math.sqrt(self.n)
        psi = (w @ self.gamma0).reshape(m, -1) * scale
        tan = (dw @ self.gamma0).reshape(m, self.dim, -1) * scale
        return psi, tan


def _check_unitary_gamma(gamma0):
    g = np.asarray(gamma0, dtype=complex)
    if g.ndim != 2 or g.shape[0] != g.shape[1] or not is_unitary(g):
        raise NotUnitary("Gamma0 must be unitary within 1e-10")
    return g


def maxent_chart(gamma0, basis=None, radius=1.0):
    """Exponential chart ``theta -> exp(i sum theta_a T_a) Gamma0`` on ``[-radius, radius]^{N^2-1}``.

    At ``theta = 0`` the tangents are ``vec(i T_a Gamma0) / sqrt(N)``.
    """
    g0 = _check_unitary_gamma(gamma0)
    n = g0.shape[0]
    if basis is None:
        basis = gellmann_basis(n)
    gens = basis.matrices

    def group(thetas):
        return expi_frames(basis.combine(thetas), gens)

    d = len(basis)
    return OrbitChart(g0, group, -radius * np.ones(d), radius * np.ones(d))


_SX, _SY, _SZ = gellmann_basis(2).matrices


def _rz(a):
    c, s = np.cos(a / 2), np.sin(a / 2)
    out = np.zeros(a.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c + 1j * s
    out[..., 1, 1] = c - 1j * s
    return out


def _ry(b):
    c, s = np.cos(b / 2), np.sin(b / 2)
    out = np.empty(b.shape + (2, 2), dtype=complex)
    out[..., 0, 0] = c
    out[..., 0, 1] = s
    out[..., 1, 0] = -s
    out[..., 1, 1] = c
    return out


def _euler_group(thetas):
    a, b, g = thetas[:, 0], thetas[:, 1], thetas[:, 2]
    ra, rb, rg = _rz(a), _ry(b), _rz(g)
    w = ra @ rb @ rg
    half_z = 0.5j * _SZ
    half_y = 0.5j * _SY
    dw = np.stack([half_z @ w, ra @ half_y @ rb @ rg, w @ half_z], axis=1)
    return w, dw


def euler_chart(gamma0):
    """Euler-angle chart of the N = 2 orbit.

    ``W = exp(i a Z/2) exp(i b Y/2) exp(i c Z/2)`` on
    ``[0, 2 pi) x [0, pi) x [0, 2 pi)``.  The third range is half the SU(2)
    range, which accounts for ``W`` and ``-W`` giving the same ray, so the
    chart covers the orbit once up to a null set.
    """
    g0 = _check_unitary_gamma(gamma0)
    if g0.shape != (2, 2):
        raise ValueError("the Euler-angle chart exists for N = 2 only")
    return OrbitChart(g0, _euler_group, [0.0, 0.0, 0.0], [2 * math.pi, math.pi, 2 * math.pi])


def _complement_generators(phi):
    """Hermitian traceless generators moving ``phi`` along its horizontal directions.

    For an orthonormal basis ``e_k`` of the complement of ``phi`` these are
    ``G = -i(e phi^H - phi e^H)`` and ``G' = e phi^H + phi e^H``, so that
    ``i G phi = e`` and ``i G' phi = i e``.
    """
    n = phi.size
    _, vecs = np.linalg.eigh(np.eye(n) - np.outer(phi, phi.conj()))
    gens = []
    for e in vecs[:, 1:].T:
        out = np.outer(e, phi.conj())
        gens.append(-1j * (out - out.conj().T))
        gens.append(out + out.conj().T)
    return np.array(gens)


class SegreChart(Chart):
    """Chart ``(a, b) -> exp(i sum a_k G_k) phi (x) exp(i sum b_k G'_k) lam`` of the product states.

    Only generators that actually move each factor are used, so the chart
    has the full dimension 4(N - 1) with no redundant directions.
    """

    def __init__(self, phi, lam, radius=1.0):
        self.phi = normalize(phi)
        self.lam = normalize(lam)
        self.n = self.phi.size
        self.gens_left = _complement_generators(self.phi)
        self.gens_right = _complement_generators(self.lam)
        self.half = self.gens_left.shape[0]
        self.dim = 2 * self.half
        self.lower = -radius * np.ones(self.dim)
        self.upper = radius * np.ones(self.dim)

    def frames(self, thetas):
        thetas = np.atleast_2d(thetas)
        m = thetas.shape[0]
        k = self.half
        hl = np.tensordot(thetas[:, :k], self.gens_left, axes=(-1, 0))
        hr = np.tensordot(thetas[:, k:], self.gens_right, axes=(-1, 0))
        wl, dwl = expi_frames(hl, self.gens_left)
        wr, dwr = expi_frames(hr, self.gens_right)
        left = wl @ self.phi
        right = wr @ self.lam
        dleft = dwl @ self.phi
        dright = dwr @ self.lam
        psi = np.einsum("mi,mj->mij", left, right).reshape(m, -1)
        t_left = np.einsum("mdi,mj->mdij", dleft, right).reshape(m, k, -1)
        t_right = np.einsum("mi,mdj->mdij", left, dright).reshape(m, k, -1)
        return psi, np.concatenate([t_left, t_right], axis=1)


def segre_chart(phi, lam, radius=1.0):
    return SegreChart(phi, lam, radius=radius)


# --------------------------------------------------------------------------
# pulled-back forms


@dataclass(frozen=True)
class PulledBackForm:
    theta: np.ndarray
    which: str
    matrix: np.ndarray


def pullback_matrices(psi, tangents):
    """Metric and symplectic pull-backs for a batch: two arrays of shape ``(M, d, d)``."""
    p = psi[:, None, None, :]
    u = tangents[:, :, None, :]
    v = tangents[:, None, :, :]
    return fs_metric(p, u, v), fs_symplectic(p, u, v)


def pullback_form(chart, theta, which="metric"):
    """Matrix of the pulled-back metric or symplectic form at ``theta``."""
    if which not in ("metric", "symplectic"):
        raise ValueError("which must be 'metric' or 'symplectic'")
    theta = np.asarray(theta, dtype=float)
    chart.check_domain(theta)
    psi, tan = chart.frames(theta[None, :])
    g, om = pullback_matrices(psi, tan)
    mat = g[0] if which == "metric" else om[0]
    return PulledBackForm(theta=theta, which=which, matrix=mat)


def _real_tangent_rank(tangents):
    real = np.concatenate([tangents.real, tangents.imag], axis=-1)
    return numerical_rank(real, RANK_RTOL)


@dataclass
class LagrangianReport:
    check: str
    n: int
    points: int
    max_violation: float
    mean_violation: float
    tangent_rank: int
    omega_rank: int
    ambient_dim: int
    tolerance: float
    passed: bool
    seed: int | None = None
    wall_ms: float | None = None
    extra: dict = field(default_factory=dict)

    def as_dict(self):
        out = {
            "check": self.check,
            "n": self.n,
            "points": self.points,
            "max_violation": self.max_violation,
            "mean_violation": self.mean_violation,
            "tangent_rank": self.tangent_rank,
            "omega_rank": self.omega_rank,
            "ambient_dim": self.ambient_dim,
            "tolerance": self.tolerance,
            "pass": self.passed,
            "seed": self.seed,
            "wall_ms": self.wall_ms,
        }
        out.update(self.extra)
        return out


def _charts_for(kind, n, rng, radius):
    if kind == "maxent":
        basis = gellmann_basis(n)
        return lambda: maxent_chart(haar_unitary(n, rng), basis, radius=radius)
    if kind == "segre":
        return lambda: segre_chart(random_state(n, rng), random_state(n, rng), radius=radius)
    raise ValueError(f"unknown chart kind {kind!r}")


def _survey(kind, n, points, rng, radius):
    """Per-point form violation, tangent rank and form rank on random charts."""
    make = _charts_for(kind, n, rng, radius)
    violations = np.zeros(points)
    tan_ranks = np.zeros(points, dtype=int)
    om_ranks = np.zeros(points, dtype=int)
    for k in range(points):
        c = make()
        psi, tan = c.frames(c.sample(rng, 1))
        _, om = pullback_matrices(psi, tan)
        violations[k] = np.max(np.abs(om[0]))
        tan_ranks[k] = _real_tangent_rank(_horizontal(psi, tan)[0])
        om_ranks[k] = numerical_rank(om[0], RANK_RTOL)
    return violations, tan_ranks, om_ranks


def _is_lagrangian(n, violations, tan_ranks, tol):
    half_dim = n * n - 1
    return bool(violations.size and violations.max() <= tol and np.all(tan_ranks == half_dim))


def lagrangian_report(n, points=100, tol=1e-10, rng=None, chart="maxent", radius=0.5, seed=None):
    """Test the Lagrangian conditions at random points of a submanifold.

    Each point is a fresh random chart (Haar-random base ``Gamma0`` for the
    maximally entangled orbit, random factors for the Segre variety)
    evaluated at a uniform random parameter in ``[-radius, radius]^d``.
    Records the largest pulled-back symplectic entry, the tangent rank and
    the ambient real dimension ``2(N^2 - 1)``.  Passes iff the form vanishes
    within ``tol`` and the tangent rank is ``N^2 - 1`` (half the ambient
    dimension) at every point.
    """
    if n not in (2, 3, 4):
        raise ValueError("supported n: 2, 3, 4")
    if points < 1:
        raise ValueError("points must be positive")
    if rng is None:
        rng = np.random.default_rng(seed)
    start = time.perf_counter()
    viol, tan_ranks, om_ranks = _survey(chart, n, points, rng, radius)
    return LagrangianReport(
        check="lagrangian" if chart == "maxent" else f"lagrangian[{chart}]",
        n=n,
        points=points,
        max_violation=float(viol.max()),
        mean_violation=float(viol.mean()),
        tangent_rank=int(tan_ranks.min()),
        omega_rank=int(om_ranks.max()),
        ambient_dim=2 * (n * n - 1),
        tolerance=tol,
        passed=_is_lagrangian(n, viol, tan_ranks, tol),
        seed=seed,
        wall_ms=(time.perf_counter() - start) * 1e3,
    )


def segre_report(n, points=50, tol=1e-10, rng=None, radius=0.5, seed=None):
    """Negative control: the product states form a symplectic, not Lagrangian, submanifold.

    Passes iff at every point both the tangent rank and the rank of the
    pulled-back symplectic form equal ``4(N - 1)``, and consequently the
    Lagrangian test on the same points fails.
    """
    if n not in (2, 3, 4):
        raise ValueError("supported n: 2, 3, 4")
    if points < 1:
        raise ValueError("points must be positive")
    if rng is None:
        rng = np.random.default_rng(seed)
    start = time.perf_counter()
    viol, tan_ranks, om_ranks = _survey("segre", n, points, rng, radius)
    expected = 4 * (n - 1)
    lagrangian = _is_lagrangian(n, viol, tan_ranks, tol)
    passed = bool(np.all(om_ranks == expected) and np.all(tan_ranks == expected) and not lagrangian)
    return LagrangianReport(
        check="segre",
        n=n,
        points=points,
        max_violation=float(viol.max()),
        mean_violation=float(viol.mean()),
        tangent_rank=int(tan_ranks.min()),
        omega_rank=int(om_ranks.min()),
        ambient_dim=2 * (n * n - 1),
        tolerance=tol,
        passed=passed,
        seed=seed,
        wall_ms=(time.perf_counter() - start) * 1e3,
        extra={"expected_rank": expected, "lagrangian_pass": lagrangian},
    )


# --------------------------------------------------------------------------
# quadrature and volume


def midpoint_nodes(lower, upper, grid):
    """Tensor-product midpoint nodes and the common cell volume."""
    lower = np.atleast_1d(np.asarray(lower, dtype=float))
    upper = np.atleast_1d(np.asarray(upper, dtype=float))
    grid = np.broadcast_to(np.asarray(grid, dtype=int), lower.shape)
    axes = [lo + (np.arange(k) + 0.5) * (hi - lo) / k for lo, hi, k in zip(lower, upper, grid)]
    mesh = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([m.ravel() for m in mesh], axis=-1)
    cell = float(np.prod((upper - lower) / grid))
    return nodes, cell


def midpoint_rule(f, lower, upper, grid):
    """Midpoint-rule integral of a vectorised ``f(nodes) -> values``."""
    nodes, cell = midpoint_nodes(lower, upper, grid)
    return float(np.sum(f(nodes)) * cell)


def _volume_density(psi, tangents):
    g, _ = pullback_matrices(psi, tangents)
    return np.linalg.det(g)


def _density_on(chart, nodes, jitter):
    psi, tan = chart.frames(nodes)
    det = _volume_density(psi, tan)
    bad = det <= 0.0
    if np.any(bad):
        shifted = nodes[bad] + jitter
        psi_j, tan_j = chart.frames(shifted)
        det_j = _volume_density(psi_j, tan_j)
        if np.any(det_j <= 0.0):
            raise SingularMetric(f"{int(np.sum(det_j <= 0.0))} quadrature nodes hit a degenerate metric")
        det = det.copy()
        det[bad] = det_j
    return np.sqrt(det)


def induced_volume(chart, grid=32):
    """Volume of the chart image: midpoint rule for ``int sqrt(det g(theta)) dtheta``.

    ``grid`` is the number of nodes per axis (int or per-axis sequence).  A
    node where the pulled-back metric degenerates is shifted once by a
    small fraction of the cell width; if it is still degenerate
    :class:`SingularMetric` is raised.
    """
    nodes, cell = midpoint_nodes(chart.lower, chart.upper, grid)
    jitter = 1e-6 * (chart.upper - chart.lower) / np.asarray(grid)
    return float(np.sum(_density_on(chart, nodes, jitter)) * cell)


def monte_carlo_volume(chart, samples, rng, batch=8192):
    """Plain Monte Carlo estimate of the chart volume with its standard error."""
    total = 0.0
    total_sq = 0.0
    done = 0
    while done < samples:
        m = min(batch, samples - done)
        theta = chart.sample(rng, m)
        dens = _density_on(chart, theta, 0.0)
        total += float(np.sum(dens))
        total_sq += float(np.sum(dens**2))
        done += m
    mean = total / samples
    var = max(total_sq / samples - mean**2, 0.0)
    vol = chart.box_volume
    return vol * mean, vol * math.sqrt(var / samples)


# --------------------------------------------------------------------------
# variations


@dataclass(frozen=True)
class VariationField:
    """Deformation field on an orbit chart.

    ``K(theta) = amplitude * sum_m f_m(theta) sum_a coeffs[m, a] T_a`` with
    modes ``f = (1, cos t_1, sin t_1, cos t_2, sin t_2, ...)``.  The field at
    a chart point ``W Gamma0`` is ``vec(K W Gamma0) / sqrt(N)`` when
    ``kind == "normal"`` and ``vec(i K W Gamma0) / sqrt(N)`` when
    ``kind == "tangential"``.
    """

    chart: OrbitChart
    basis: SuNBasis
    coeffs: np.ndarray
    kind: str = "normal"
    amplitude: float = 1.0

    def scaled(self, factor):
        return VariationField(self.chart, self.basis, self.coeffs, self.kind, self.amplitude * factor)

    def _modes(self, thetas):
        m, d = thetas.shape
        f = np.ones((m, 1 + 2 * d))
        df = np.zeros((m, d, 1 + 2 * d))
        for b in range(d):
            c, s = np.cos(thetas[:, b]), np.sin(thetas[:, b])
            f[:, 1 + 2 * b] = c
            f[:, 2 + 2 * b] = s
            df[:, b, 1 + 2 * b] = -s
            df[:, b, 2 + 2 * b] = c
        return f, df

    def generator(self, thetas):
        """``K(theta)`` and ``dK/dtheta_b``, shapes ``(M, n, n)`` and ``(M, d, n, n)``."""
        thetas = np.atleast_2d(thetas)
        f, df = self._modes(thetas)
        per_mode = self.basis.combine(self.coeffs)  # (modes, n, n)
        k = self.amplitude * np.tensordot(f, per_mode, axes=(-1, 0))
        dk = self.amplitude * np.tensordot(df, per_mode, axes=(-1, 0))
        if self.kind == "tangential":
            k, dk = 1j * k, 1j * dk
        elif self.kind != "normal":
            raise ValueError(f"unknown field kind {self.kind!r}")
        return k, dk

    def frames(self, thetas):
        """Field vectors and their parameter derivatives in C^{N^2}."""
        thetas = np.atleast_2d(thetas)
        c = self.chart
        w, dw = c.group_frames(thetas)
        k, dk = self.generator(thetas)
        m = thetas.shape[0]
        scale = 1.0 / math.sqrt(c.n)
        g0 = c.gamma0
        vec = (k @ w @ g0).reshape(m, -1) * scale
        dvec = (dk @ w[:, None] @ g0 + k[:, None] @ dw @ g0).reshape(m, c.dim, -1) * scale
        return vec, dvec


def random_variation_field(chart, rng, kind="normal", amplitude=1.0, modes=None):
    """Field with independent standard-normal coefficients, scaled to unit RMS per mode."""
    basis = gellmann_basis(chart.n)
    n_modes = 1 + 2 * chart.dim if modes is None else modes
    coeffs = np.zeros((1 + 2 * chart.dim, len(basis)))
    coeffs[:n_modes] = rng.standard_normal((n_modes, len(basis))) / math.sqrt(n_modes * len(basis))
    return VariationField(chart, basis, coeffs, kind, amplitude)


@dataclass(frozen=True)
class VariationResult:
    epsilon: float
    volume: float
    volume_plus: float
    volume_minus: float

    @property
    def first(self):
        return (self.volume_plus - self.volume_minus) / (2.0 * self.epsilon)

    @property
    def second(self):
        return (self.volume_plus - 2.0 * self.volume + self.volume_minus) / self.epsilon**2


def _perturbed_volume(chart, field, eps, nodes, cell):
    psi, tan = chart.frames(nodes)
    if eps != 0.0:
        vec, dvec = field.frames(nodes)
        psi = psi + eps * vec
        tan = tan + eps * dvec
    det = _volume_density(psi, tan)
    if np.any(det <= 0.0):
        raise ImmersionLost(f"perturbed map degenerates at {int(np.sum(det <= 0.0))} nodes (eps = {eps:g})")
    return float(np.sum(np.sqrt(det)) * cell)


def volume_variation(chart, field, epsilon, grid=32):
    """Central differences of the volume along ``psi + eps * field``.

    The deformed points ``psi(theta) + eps * n(theta)`` are not renormalised:
    the Fubini-Study forms are scale invariant, so the pulled-back metric of
    the normalised map is the same.
    """
    nodes, cell = midpoint_nodes(chart.lower, chart.upper, grid)
    v0 = _perturbed_volume(chart, field, 0.0, nodes, cell)
    vp = _perturbed_volume(chart, field, epsilon, nodes, cell)
    vm = _perturbed_volume(chart, field, -epsilon, nodes, cell)
    return VariationResult(epsilon=epsilon, volume=v0, volume_plus=vp, volume_minus=vm)


def sweep_csv(results):
    """CSV text ``epsilon,V,deltaV,delta2V`` for a list of :class:`VariationResult`."""
    lines = ["epsilon,V,deltaV,delta2V"]
    for r in results:
        lines.append(",".join(repr(float(x)) for x in (r.epsilon, r.volume, r.first, r.second)))
    return "\n".join(lines) + "\n"

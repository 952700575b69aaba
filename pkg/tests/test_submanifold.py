import math

import numpy as np
import pytest
from scipy.linalg import expm

from entgeom.bipartite import gamma_of_state, is_maximally_entangled, is_product, segre_embed
from entgeom.errors import ImmersionLost, NotUnitary, OutOfDomain, SingularMetric
from entgeom.fubini_study import fs_metric
from entgeom.linalg import numerical_rank
from entgeom.states import haar_unitary, random_state
from entgeom.submanifold import (
    EULER_VOLUME,
    OrbitChart,
    euler_chart,
    expi_frames,
    gellmann_basis,
    induced_volume,
    lagrangian_report,
    maxent_chart,
    midpoint_rule,
    monte_carlo_volume,
    pullback_form,
    random_variation_field,
    segre_chart,
    segre_report,
    sweep_csv,
    volume_variation,
)

from .conftest import SIGMA_X, SIGMA_Y, SIGMA_Z


def real_rank(tangents):
    return numerical_rank(np.concatenate([tangents.real, tangents.imag], axis=-1))


class TestGellMann:
    def test_pauli(self):
        np.testing.assert_array_equal(gellmann_basis(2).matrices, [SIGMA_X, SIGMA_Y, SIGMA_Z])

    @pytest.mark.parametrize("n", [2, 3, 4, 5])
    def test_properties(self, n):
        t = gellmann_basis(n).matrices
        assert len(t) == n * n - 1
        assert np.max(np.abs(t - np.conj(np.swapaxes(t, 1, 2)))) <= 1e-14
        assert np.max(np.abs(np.trace(t, axis1=1, axis2=2))) <= 1e-14
        gram = np.einsum("aij,bji->ab", t, t)
        assert np.max(np.abs(gram - 2 * np.eye(len(t)))) <= 1e-12

    def test_rejects_small(self):
        with pytest.raises(ValueError):
            gellmann_basis(1)


class TestExpiFrames:
    def test_against_expm(self, rng):
        gens = gellmann_basis(3).matrices
        theta = rng.standard_normal((4, 8))
        h = np.tensordot(theta, gens, axes=(-1, 0))
        w, dw = expi_frames(h, gens)
        step = 1e-6
        for m in range(4):
            np.testing.assert_allclose(w[m], expm(1j * h[m]), atol=1e-13)
            for a in (0, 5, 7):
                fd = (expm(1j * (h[m] + step * gens[a])) - expm(1j * (h[m] - step * gens[a]))) / (2 * step)
                np.testing.assert_allclose(dw[m, a], fd, atol=1e-8)

    def test_degenerate_eigenvalues(self):
        gens = gellmann_basis(2).matrices
        w, dw = expi_frames(np.zeros((1, 2, 2)), gens)
        np.testing.assert_allclose(w[0], np.eye(2))
        np.testing.assert_allclose(dw[0], 1j * gens, atol=1e-15)


class TestMaxentChart:
    def test_origin(self, rng):
        g0 = haar_unitary(3, rng)
        c = maxent_chart(g0)
        np.testing.assert_allclose(c.point(np.zeros(8)), g0.reshape(-1) / math.sqrt(3), atol=1e-15)

    def test_tangents_at_origin(self, rng):
        g0 = haar_unitary(2, rng)
        c = maxent_chart(g0)
        expected = np.array([(1j * t @ g0).reshape(-1) / math.sqrt(2) for t in gellmann_basis(2).matrices])
        np.testing.assert_allclose(c.tangents(np.zeros(3)), expected, atol=1e-15)
        assert real_rank(c.tangents(np.zeros(3))) == 3

    @pytest.mark.parametrize("n", [2, 3])
    def test_outputs_on_orbit(self, rng, n):
        c = maxent_chart(haar_unitary(n, rng))
        psi = c.point(c.sample(rng, 100))
        assert np.max(np.abs(np.linalg.norm(psi, axis=1) - 1)) <= 1e-12
        assert all(is_maximally_entangled(gamma_of_state(p)) for p in psi)

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_tangent_rank(self, rng, n):
        c = maxent_chart(haar_unitary(n, rng))
        tans = c.tangents(c.sample(rng, 20))
        for t in tans:
            assert real_rank(t) == n * n - 1

    def test_not_unitary(self):
        with pytest.raises(NotUnitary):
            maxent_chart(2 * np.eye(2))


class TestEulerChart:
    def test_on_orbit_and_full_rank(self, rng):
        c = euler_chart(haar_unitary(2, rng))
        theta = c.sample(rng, 20)
        psi = c.point(theta)
        assert np.max(np.abs(np.linalg.norm(psi, axis=1) - 1)) <= 1e-12
        for t in c.tangents(theta):
            assert real_rank(t) == 3

    def test_tangents_vs_finite_differences(self, rng):
        c = euler_chart(haar_unitary(2, rng))
        theta = np.array([0.7, 1.1, 2.3])
        tan = c.frames(theta[None])[1][0]
        for a in range(3):
            e = np.zeros(3)
            e[a] = 1e-6
            fd = (c.point(theta + e) - c.point(theta - e)) / 2e-6
            np.testing.assert_allclose(tan[a], fd, atol=1e-9)

    def test_requires_qubits(self, rng):
        with pytest.raises(ValueError):
            euler_chart(haar_unitary(3, rng))


class TestSegreChart:
    def test_origin(self, rng):
        phi, lam = random_state(3, rng), random_state(3, rng)
        np.testing.assert_allclose(segre_chart(phi, lam).point(np.zeros(8)), segre_embed(phi, lam), atol=1e-15)

    def test_outputs_are_products(self, rng):
        c = segre_chart(random_state(3, rng), random_state(3, rng))
        for p in c.point(c.sample(rng, 50)):
            assert abs(np.linalg.norm(p) - 1) <= 1e-12
            assert is_product(gamma_of_state(p), tol=1e-10)

    @pytest.mark.parametrize("n", [2, 3])
    def test_rank(self, rng, n):
        c = segre_chart(random_state(n, rng), random_state(n, rng))
        assert c.dim == 4 * (n - 1)
        for t in c.tangents(c.sample(rng, 20)):
            assert real_rank(t) == 4 * (n - 1)


class TestPullback:
    def test_symplectic_vanishes_at_origin(self, rng):
        c = maxent_chart(haar_unitary(2, rng))
        assert np.max(np.abs(pullback_form(c, np.zeros(3), "symplectic").matrix)) <= 1e-12

    @pytest.mark.parametrize("n", [2, 3])
    def test_metric_at_origin(self, rng, n):
        c = maxent_chart(haar_unitary(n, rng))
        g = pullback_form(c, np.zeros(n * n - 1), "metric").matrix
        np.testing.assert_allclose(g, (2 / n) * np.eye(n * n - 1), atol=1e-14)

    def test_metric_positive_definite(self, rng):
        c = maxent_chart(haar_unitary(3, rng))
        for theta in c.sample(rng, 10):
            g = pullback_form(c, theta, "metric").matrix
            np.testing.assert_allclose(g, g.T, atol=1e-14)
            assert np.linalg.eigvalsh(g).min() > 0

    def test_segre_symplectic_full_rank(self, rng):
        c = segre_chart(random_state(3, rng), random_state(3, rng))
        om = pullback_form(c, c.sample(rng, 1)[0], "symplectic").matrix
        np.testing.assert_allclose(om, -om.T, atol=1e-14)
        assert numerical_rank(om) == 8

    def test_homogeneity(self, rng):
        # the same Euler coordinates on two base points give the same induced metric
        theta = np.array([0.4, 1.3, 5.0])
        spectra = []
        for _ in range(3):
            g = pullback_form(euler_chart(haar_unitary(2, rng)), theta, "metric").matrix
            spectra.append(np.linalg.eigvalsh(g))
        np.testing.assert_allclose(spectra[1], spectra[0], atol=1e-9)
        np.testing.assert_allclose(spectra[2], spectra[0], atol=1e-9)

    def test_out_of_domain(self, rng):
        c = maxent_chart(haar_unitary(2, rng), radius=0.5)
        with pytest.raises(OutOfDomain):
            pullback_form(c, np.array([0.0, 0.9, 0.0]))

    def test_bad_kind(self, rng):
        with pytest.raises(ValueError):
            pullback_form(maxent_chart(np.eye(2)), np.zeros(3), "volume")


class TestReports:
    @pytest.mark.parametrize("n, points", [(2, 100), (3, 50), (4, 20)])
    def test_lagrangian(self, n, points):
        rep = lagrangian_report(n, points, seed=1)
        assert rep.passed
        assert rep.max_violation <= 1e-10
        assert rep.tangent_rank == n * n - 1
        assert 2 * rep.tangent_rank == rep.ambient_dim

    def test_lagrangian_fails_on_segre(self):
        rep = lagrangian_report(3, 20, chart="segre", seed=1)
        assert not rep.passed
        assert rep.omega_rank == 8

    @pytest.mark.parametrize("n", [2, 3])
    def test_segre(self, n):
        rep = segre_report(n, 50, seed=2)
        assert rep.passed
        assert rep.omega_rank == 4 * (n - 1)

    def test_report_keys(self):
        d = lagrangian_report(2, 5, seed=0).as_dict()
        for key in ("check", "n", "points", "max_violation", "tangent_rank", "ambient_dim", "tolerance", "pass", "seed", "wall_ms"):
            assert key in d

    def test_unsupported_n(self):
        with pytest.raises(ValueError):
            lagrangian_report(5, 5)


class TestQuadrature:
    def test_midpoint_order_two(self):
        exact = math.e - 1
        e1 = abs(midpoint_rule(lambda x: np.exp(x[:, 0]), [0.0], [1.0], 10) - exact)
        e2 = abs(midpoint_rule(lambda x: np.exp(x[:, 0]), [0.0], [1.0], 20) - exact)
        assert e1 / e2 == pytest.approx(4.0, rel=0.01)

    def test_euler_volume(self, rng):
        c = euler_chart(haar_unitary(2, rng))
        v16 = induced_volume(c, 16)
        v32 = induced_volume(c, 32)
        assert abs(v32 - v16) / v32 < 5e-3
        assert v32 == pytest.approx(EULER_VOLUME, rel=1e-3)

    def test_base_point_independence(self, rng):
        v1 = induced_volume(euler_chart(haar_unitary(2, rng)), 24)
        v2 = induced_volume(euler_chart(haar_unitary(2, rng)), 24)
        assert abs(v1 - v2) / v1 <= 5e-3

    def test_monte_carlo(self, rng):
        c = euler_chart(haar_unitary(2, rng))
        v, err = monte_carlo_volume(c, 20_000, rng)
        assert abs(v - EULER_VOLUME) <= 4 * err
        assert err / v < 0.02

    def test_singular_metric(self):
        def frozen(thetas):
            m = thetas.shape[0]
            return np.broadcast_to(np.eye(2, dtype=complex), (m, 2, 2)), np.zeros((m, 1, 2, 2), dtype=complex)

        c = OrbitChart(np.eye(2), frozen, [0.0], [1.0])
        with pytest.raises(SingularMetric):
            induced_volume(c, 4)


@pytest.fixture(scope="module")
def qubit_chart():
    return euler_chart(haar_unitary(2, np.random.default_rng(5)))


class TestVariationFields:
    @pytest.mark.parametrize("n", [2, 3])
    def test_normality(self, rng, n):
        c = maxent_chart(haar_unitary(n, rng))
        f = random_variation_field(c, rng, "normal")
        theta = c.sample(rng, 20)
        vec, _ = f.frames(theta)
        psi, tan = c.frames(theta)
        tan = tan - np.einsum("mk,mdk->md", psi.conj(), tan)[..., None] * psi[:, None, :]
        overlaps = fs_metric(psi[:, None], vec[:, None], tan)
        assert np.max(np.abs(overlaps)) <= 1e-10

    def test_tangential_field_is_tangent(self, rng, qubit_chart):
        f = random_variation_field(qubit_chart, rng, "tangential")
        theta = qubit_chart.sample(rng, 5)
        vec, _ = f.frames(theta)
        tans = qubit_chart.tangents(theta)
        for v, t in zip(vec, tans):
            assert real_rank(np.vstack([t, v[None]])) == 3

    def test_field_derivative(self, rng, qubit_chart):
        f = random_variation_field(qubit_chart, rng, "normal")
        theta = np.array([[1.0, 0.8, 2.0]])
        _, dvec = f.frames(theta)
        for a in range(3):
            e = np.zeros((1, 3))
            e[0, a] = 1e-6
            fd = (f.frames(theta + e)[0] - f.frames(theta - e)[0]) / 2e-6
            np.testing.assert_allclose(dvec[0, a], fd[0], atol=1e-8)

    def test_bad_kind(self, rng, qubit_chart):
        f = random_variation_field(qubit_chart, rng)
        bad = type(f)(f.chart, f.basis, f.coeffs, "diagonal")
        with pytest.raises(ValueError):
            bad.generator(np.zeros((1, 3)))


class TestVolumeVariation:
    def test_normal_first_variation(self, rng, qubit_chart):
        for _ in range(3):
            r = volume_variation(qubit_chart, random_variation_field(qubit_chart, rng), 1e-3, 16)
            assert abs(r.first) / r.volume <= 1e-2

    def test_tangential_first_variation(self, rng, qubit_chart):
        r = volume_variation(qubit_chart, random_variation_field(qubit_chart, rng, "tangential"), 1e-3, 16)
        assert abs(r.first) / r.volume <= 1e-3

    def test_linearity_normal(self, rng, qubit_chart):
        # the normal first variation is zero up to roundoff, so the 5% ratio
        # test carries an absolute floor of 1e-10 V
        f = random_variation_field(qubit_chart, rng)
        d1 = volume_variation(qubit_chart, f, 1e-3, 12)
        d2 = volume_variation(qubit_chart, f.scaled(2.0), 1e-3, 12)
        assert abs(d2.first - 2 * d1.first) <= 0.05 * abs(2 * d1.first) + 1e-10 * d1.volume

    def test_linearity_on_patch(self, rng):
        # on a patch with boundary, a tangential field moves volume through
        # the boundary, giving a nonzero first variation
        c = maxent_chart(haar_unitary(2, rng), radius=0.5)
        f = random_variation_field(c, rng, "tangential")
        d1 = volume_variation(c, f, 1e-4, 12)
        d2 = volume_variation(c, f.scaled(2.0), 1e-4, 12)
        assert abs(d1.first) > 1e-3 * d1.volume
        assert abs(d2.first - 2 * d1.first) <= 0.05 * abs(2 * d1.first)

    def test_second_variation_random_fields(self, rng, qubit_chart):
        r = volume_variation(qubit_chart, random_variation_field(qubit_chart, rng), 1e-3, 16)
        assert r.second >= -1e-2 * r.volume

    def test_second_variation_constant_fields(self, rng, qubit_chart):
        # constant K(theta) is J applied to a Killing field of the orbit; the
        # second variation formula for minimal Lagrangians in CP^3 (Ricci 8,
        # Killing forms on the unit RP^3 at Hodge eigenvalue 4) gives
        # d2V = (4 - 8) int |V|^2 = -2 Tr(K^2) V
        for _ in range(3):
            f = random_variation_field(qubit_chart, rng, modes=1)
            k = f.generator(np.zeros((1, 3)))[0][0]
            r = volume_variation(qubit_chart, f, 1e-3, 16)
            assert abs(r.first) / r.volume <= 1e-10
            assert r.second / r.volume == pytest.approx(-2 * np.trace(k @ k).real, rel=1e-4)

    def test_immersion_lost(self, qubit_chart):
        class Collapse:
            # cancels the chart's tangents at eps = 1
            def frames(self, nodes):
                _, tan = qubit_chart.frames(nodes)
                return np.zeros((nodes.shape[0], 4), dtype=complex), -tan

        with pytest.raises(ImmersionLost):
            volume_variation(qubit_chart, Collapse(), 1.0, 4)

    def test_sweep_csv(self, rng, qubit_chart):
        f = random_variation_field(qubit_chart, rng)
        rows = [volume_variation(qubit_chart, f, e, 8) for e in (1e-2, 1e-3)]
        lines = sweep_csv(rows).splitlines()
        assert lines[0] == "epsilon,V,deltaV,delta2V"
        assert len(lines) == 3
        assert float(lines[2].split(",")[0]) == 1e-3

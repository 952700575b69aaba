import math

import numpy as np
import pytest

from entgeom.errors import BasePointMismatch, TooCoarse
from entgeom.fubini_study import (
    KAHLER_CONSTANT,
    FubiniStudyForms,
    TangentVector,
    curve_length,
    fs_distance,
    fs_metric,
    fs_metric_eval,
    fs_symplectic,
    fs_symplectic_eval,
    geodesic,
    horizontal_project,
)
from entgeom.linalg import numerical_rank
from entgeom.states import haar_unitary, random_state


def crandn(rng, *shape):
    return rng.standard_normal(shape) + 1j * rng.standard_normal(shape)


class TestHorizontal:
    def test_along_psi(self, rng):
        psi = random_state(3, rng)
        assert np.max(np.abs(horizontal_project(psi, psi).direction)) < 1e-15

    def test_orthogonal_unchanged(self):
        t = horizontal_project([1, 0, 0], [0, 2, 1j])
        np.testing.assert_array_equal(t.direction, [0, 2, 1j])
        assert t.horizontal

    def test_example(self):
        np.testing.assert_allclose(horizontal_project([1, 0], [1, 1]).direction, [0, 1])

    def test_orthogonality(self, rng):
        for _ in range(100):
            psi = crandn(rng, 4)
            u = horizontal_project(psi, crandn(rng, 4)).direction
            assert abs(np.vdot(psi, u)) <= 1e-12


class TestForms:
    def test_metric_example(self):
        f = FubiniStudyForms(np.array([1, 0]))
        assert fs_metric_eval(f, [0, 1], [0, 1]) == pytest.approx(1.0)

    def test_symplectic_example(self):
        f = FubiniStudyForms(np.array([1, 0]))
        assert fs_symplectic_eval(f, [0, 1], [0, 1j]) == pytest.approx(2.0)

    def test_vertical_directions(self, rng):
        psi = crandn(rng, 3)
        f = FubiniStudyForms(psi)
        v = crandn(rng, 3)
        for vert in (psi, 1j * psi):
            assert abs(f.metric(vert, v)) < 1e-12
            assert abs(f.symplectic(vert, v)) < 1e-12
            assert abs(f.symplectic(v, vert)) < 1e-12

    def test_symmetry(self, rng):
        for _ in range(100):
            psi, u, v = crandn(rng, 3), crandn(rng, 3), crandn(rng, 3)
            assert abs(fs_metric(psi, u, v) - fs_metric(psi, v, u)) <= 1e-12
            assert abs(fs_symplectic(psi, u, v) + fs_symplectic(psi, v, u)) <= 1e-12
            assert abs(fs_symplectic(psi, u, u)) <= 1e-12

    def test_real_bilinearity(self, rng):
        psi, u, w, v = (crandn(rng, 3) for _ in range(4))
        a, b = rng.standard_normal(2)
        for form in (fs_metric, fs_symplectic):
            lhs = form(psi, a * u + b * w, v)
            assert lhs == pytest.approx(a * form(psi, u, v) + b * form(psi, w, v), abs=1e-12)

    def test_symplectic_is_real(self, rng):
        psi, u, v = crandn(rng, 3), crandn(rng, 3), crandn(rng, 3)
        nsq = np.vdot(psi, psi).real
        uv, vu = np.vdot(v, u), np.vdot(u, v)
        raw = 1j * (nsq * (uv - vu) - np.vdot(psi, u) * np.vdot(v, psi) + np.vdot(psi, v) * np.vdot(u, psi)) / nsq**2
        assert abs(raw.imag) <= 1e-12
        assert fs_symplectic(psi, u, v) == pytest.approx(raw.real, abs=1e-14)

    def test_projective_invariance(self, rng):
        for _ in range(100):
            psi, u, v = crandn(rng, 3), crandn(rng, 3), crandn(rng, 3)
            z = complex(*rng.standard_normal(2))
            for form in (fs_metric, fs_symplectic):
                assert abs(form(z * psi, z * u, z * v) - form(psi, u, v)) <= 1e-10

    def test_unitary_invariance(self, rng):
        for _ in range(100):
            psi, u, v = crandn(rng, 4), crandn(rng, 4), crandn(rng, 4)
            w = haar_unitary(4, rng)
            for form in (fs_metric, fs_symplectic):
                assert abs(form(w @ psi, w @ u, w @ v) - form(psi, u, v)) <= 1e-10

    def test_kahler_constant(self, rng):
        ratios = []
        for _ in range(100):
            psi = random_state(3, rng)
            u = horizontal_project(psi, crandn(rng, 3)).direction
            ratios.append(fs_symplectic(psi, u, 1j * u) / fs_metric(psi, u, u))
        np.testing.assert_allclose(ratios, KAHLER_CONSTANT, rtol=1e-12)
        assert KAHLER_CONSTANT == 2.0

    @pytest.mark.parametrize("n", [2, 3, 5])
    def test_horizontal_dimension(self, rng, n):
        psi = random_state(n, rng)
        # real spanning set e_k, i e_k
        span = np.concatenate([np.eye(n), 1j * np.eye(n)]).astype(complex)
        gram = fs_metric(psi, span[:, None, :], span[None, :, :])
        assert numerical_rank(gram) == 2 * (n - 1)

    def test_stacked_evaluation(self, rng):
        psi = crandn(rng, 5, 3)
        u = crandn(rng, 5, 3)
        out = fs_metric(psi, u, u)
        assert out.shape == (5,)
        assert out[2] == pytest.approx(fs_metric(psi[2], u[2], u[2]))


class TestBasePoint:
    def test_mismatch(self, rng):
        f = FubiniStudyForms(np.array([1, 0]))
        t = horizontal_project(np.array([0, 1]), [1, 0])
        with pytest.raises(BasePointMismatch):
            f.metric(t, t)

    def test_matching_tangent(self):
        psi = np.array([1, 0])
        f = FubiniStudyForms(psi)
        t = horizontal_project(psi, [1, 1])
        assert f.metric(t, t) == pytest.approx(1.0)
        assert isinstance(t, TangentVector)


class TestDistance:
    def test_same_ray(self, rng):
        psi = random_state(3, rng)
        assert fs_distance(psi, (0.3 - 2j) * psi) == pytest.approx(0.0, abs=1e-7)

    def test_orthogonal(self):
        assert fs_distance([1, 0], [0, 1]) == pytest.approx(math.pi / 2)

    def test_quarter(self):
        assert fs_distance([1, 0], [1, 1j]) == pytest.approx(math.pi / 4)

    def test_range(self, rng):
        for _ in range(50):
            d = fs_distance(crandn(rng, 3), crandn(rng, 3))
            assert 0.0 <= d <= math.pi / 2


class TestCurveLength:
    def test_constant(self, rng):
        psi = random_state(2, rng)
        assert curve_length(np.repeat(psi[None], 10, axis=0)) == 0.0

    def test_great_circle(self):
        t = np.linspace(0, math.pi / 2, 10_000)
        samples = np.stack([np.cos(t), np.sin(t)], axis=1)
        assert abs(curve_length(samples) - math.pi / 2) <= 1e-3

    def test_phase_dithering(self, rng):
        t = np.linspace(0, 1.0, 500)
        samples = np.stack([np.cos(t), np.sin(t), 0 * t], axis=1).astype(complex)
        dithered = samples * np.exp(1j * rng.uniform(0, 2 * np.pi, t.size))[:, None]
        assert curve_length(dithered) == pytest.approx(curve_length(samples), abs=1e-12)

    def test_geodesic_matches_distance(self, rng):
        for _ in range(20):
            psi, phi = random_state(3, rng), random_state(3, rng)
            assert abs(curve_length(geodesic(psi, phi, 2000)) - fs_distance(psi, phi)) <= 1e-3

    def test_refinement_converges(self, rng):
        psi, phi = random_state(3, rng), random_state(3, rng)
        d = fs_distance(psi, phi)
        errs = [abs(curve_length(geodesic(psi, phi, m)) - d) for m in (100, 1000)]
        assert errs[1] < errs[0]

    def test_too_coarse(self):
        with pytest.raises(TooCoarse):
            curve_length(np.array([[1, 0], [0, 1]], dtype=complex))

    def test_needs_two_samples(self):
        with pytest.raises(ValueError):
            curve_length(np.array([[1, 0]]))

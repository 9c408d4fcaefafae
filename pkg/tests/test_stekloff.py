import math

import numpy as np
import pytest

from isomoment import (
    ConditioningError,
    FourierBoundary,
    HypothesisViolationError,
    ball_spectrum,
    converge_spectrum,
    coordinate_bounds,
    rayleigh_pair,
    spectral_chain_check,
    unit_ball_volume,
)
from isomoment.randomshapes import (
    kuhn_box_mesh,
    random_convex_boundaries,
    random_star_boundaries,
)


class TestBallSpectrum:
    def test_disc(self):
        assert ball_spectrum(2, 1.0, 5).eigenvalues == pytest.approx([0, 1, 1, 2, 2])

    def test_three_dimensions(self):
        assert ball_spectrum(3, 1.0, 4).eigenvalues == pytest.approx([0, 1, 1, 1])
        assert ball_spectrum(3, 1.0, 10).eigenvalues == pytest.approx(
            [0, 1, 1, 1, 2, 2, 2, 2, 2, 3])

    def test_radius_scaling(self):
        assert ball_spectrum(2, 2.0, 3).eigenvalues == pytest.approx([0, 0.5, 0.5])

    def test_invalid(self):
        with pytest.raises(ValueError):
            ball_spectrum(1, 1.0, 3)


class TestCoordinateBounds:
    def test_disc(self, disc):
        cb = coordinate_bounds(disc)
        assert cb.bounds == pytest.approx([1.0, 1.0], rel=1e-12)
        assert cb.product_first_n == pytest.approx(unit_ball_volume(2) / math.pi,
                                                   rel=1e-12)

    def test_square(self, square):
        cb = coordinate_bounds(square)
        assert cb.bounds == pytest.approx([0.75, 0.75], rel=1e-13)
        assert cb.product_first_n == pytest.approx(9.0 / 16.0, rel=1e-13)
        assert cb.product_first_n <= math.pi / 4.0

    def test_ellipse_product_below_ball(self, ellipse_boundary):
        cb = coordinate_bounds(ellipse_boundary)
        assert cb.product_first_n <= unit_ball_volume(2) / math.pi + 1e-10

    def test_ball_3d(self, unit_ball_3d):
        cb = coordinate_bounds(unit_ball_3d)
        assert cb.bounds == pytest.approx([1.0, 1.0, 1.0], rel=1e-12)


class TestRayleighPair:
    def test_disc_coordinate_space(self, disc):
        pair = rayleigh_pair(disc, 1)
        assert pair.A == pytest.approx(np.eye(2), abs=1e-12)
        assert pair.B == pytest.approx(np.eye(2), abs=1e-12)
        assert pair.roots == pytest.approx([1.0, 1.0], rel=1e-12)

    def test_disc_degree_three_exact(self, disc):
        pair = rayleigh_pair(disc, 3)
        assert pair.roots == pytest.approx([1, 1, 2, 2, 3, 3], rel=1e-10)

    def test_matrices_symmetric_and_definite(self):
        fb = random_convex_boundaries(3, 1)[0]
        from isomoment import canonical_placement

        placed, _ = canonical_placement(fb, mode="boundary", rotate=True)
        pair = rayleigh_pair(placed, 5)
        assert pair.A == pytest.approx(pair.A.T)
        assert pair.B == pytest.approx(pair.B.T)
        assert np.all(np.linalg.eigvalsh(pair.B) > 0.0)
        assert np.all(pair.roots > 0.0)
        assert pair.mean_residual < 1e-10

    def test_conditioning_failure_reported(self):
        fb = FourierBoundary.ellipse(4.0, 0.25)
        with pytest.raises(ConditioningError) as err:
            rayleigh_pair(fb, 40)
        assert err.value.condition_estimate is None or \
            err.value.condition_estimate > 1e12


class TestConvergeSpectrum:
    def test_disc_immediate(self, disc):
        sb = converge_spectrum(disc, max_degree=8, tol=1e-10)
        assert sb.converged
        assert sb.bounds[:4] == pytest.approx([1, 1, 2, 2], rel=1e-10)

    def test_monotone_in_degree(self):
        for seed in (0, 1):
            fb = random_convex_boundaries(seed, 1)[0]
            sb = converge_spectrum(fb, max_degree=10, tol=0.0)
            for (d0, b0), (d1, b1) in zip(sb.history, sb.history[1:]):
                k = min(len(b0), 6)
                assert np.all(b1[:k] <= b0[:k] * (1.0 + 1e-10))

    def test_square_upper_bound_at_all_degrees(self, square):
        sb = converge_spectrum(square, max_degree=10, tol=0.0)
        for _, bounds in sb.history:
            assert bounds[0] <= 0.75 + 1e-12

    def test_ellipse_strictly_below_ball_product(self):
        fb = random_convex_boundaries(7, 1)[0]
        sb = converge_spectrum(fb, max_degree=16, tol=1e-10)
        prod = float(np.prod(sb.bounds[:2]))
        assert prod < 1.0 - 1e-6

    def test_coordinate_bounds_dominate_converged(self, square):
        for shape in (square, random_convex_boundaries(8, 1)[0]):
            cb = coordinate_bounds(shape)
            sb = converge_spectrum(shape, max_degree=12, tol=1e-10)
            assert np.all(sb.bounds[:2] <= cb.bounds * (1.0 + 1e-10))

    def test_scaling_law(self):
        fb = random_convex_boundaries(2, 1)[0]
        s = 2.0
        big = fb.scaled(np.array([s, s]))
        a = converge_spectrum(fb, max_degree=12, tol=1e-10)
        b = converge_spectrum(big, max_degree=12, tol=1e-10)
        assert b.bounds[:4] == pytest.approx(a.bounds[:4] / s, rel=1e-9)

    def test_nonconverged_flagged(self):
        fb = random_convex_boundaries(4, 1)[0]
        sb = converge_spectrum(fb, max_degree=3, tol=1e-14)
        assert not sb.converged
        assert sb.achieved_tol > 0.0


class TestSpectralChain:
    def test_disc_all_equalities(self, disc):
        rep = spectral_chain_check(disc)
        assert rep.holds(tol=1e-9)
        assert rep.product_spectrum == pytest.approx(1.0, rel=1e-9)
        assert rep.product_bound == pytest.approx(1.0, rel=1e-9)
        assert rep.ball_product == pytest.approx(1.0, rel=1e-12)
        assert rep.reciprocal_sum == pytest.approx(2.0, rel=1e-9)
        assert rep.ball_reciprocal_sum == pytest.approx(2.0, rel=1e-12)

    def test_square_chain_and_reciprocal_sum(self, square):
        rep = spectral_chain_check(square)
        assert rep.product_bound == pytest.approx(9.0 / 16.0, rel=1e-12)
        assert rep.ball_product == pytest.approx(math.pi / 4.0, rel=1e-13)
        assert rep.ball_reciprocal_sum == pytest.approx(4.0 / math.sqrt(math.pi),
                                                        rel=1e-13)
        assert rep.reciprocal_sum >= rep.ball_reciprocal_sum
        assert rep.holds()

    def test_ball_3d_moment_links_only(self, unit_ball_3d):
        rep = spectral_chain_check(unit_ball_3d)
        assert rep.product_spectrum is None
        assert rep.product_bound == pytest.approx(rep.ball_product, rel=1e-12)
        assert rep.holds()

    def test_convex_cube_chain(self):
        rep = spectral_chain_check(kuhn_box_mesh(3))
        assert rep.product_bound <= rep.ball_product + 1e-12
        assert rep.holds()

    def test_nonconvex_rejected(self):
        fb = random_star_boundaries(5, 1, require_nonconvex=True)[0]
        with pytest.raises(HypothesisViolationError):
            spectral_chain_check(fb)

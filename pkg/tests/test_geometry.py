import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isomoment import (
    Ball,
    DegenerateShapeError,
    Ellipsoid,
    OrientationError,
    Polygon,
    SimplicialBody,
    UnsupportedShapeError,
    apply_affinity,
    ball_boundary_moment,
    ball_surface_measure,
    ball_volume_moment,
    canonical_placement,
    ellipsoid_moments,
    moments,
    normalize_J,
    polygon_moments,
    simplicial_moments,
    unit_ball_volume,
)
from isomoment.randomshapes import kuhn_box_mesh, random_convex_polygons

import _mc
from conftest import rotation


class TestPolygonMoments:
    def test_square_hand_values(self, square):
        m = polygon_moments(square)
        assert m.volume == pytest.approx(4.0, rel=1e-15)
        assert m.J == pytest.approx([4.0 / 3.0, 4.0 / 3.0], rel=1e-14)
        assert m.I == pytest.approx([16.0 / 3.0, 16.0 / 3.0], rel=1e-14)
        assert m.J0 == pytest.approx(8.0 / 3.0, rel=1e-14)
        assert m.I0 == pytest.approx(32.0 / 3.0, rel=1e-14)
        assert m.surface == pytest.approx(8.0)
        assert m.centroid == pytest.approx([0.0, 0.0], abs=1e-15)

    def test_triangle_hand_values(self, triangle):
        m = polygon_moments(triangle)
        assert m.volume == pytest.approx(0.5, rel=1e-15)
        assert m.J[0] == pytest.approx(1.0 / 12.0, rel=1e-14)
        assert m.M[0, 1] == pytest.approx(1.0 / 24.0, rel=1e-14)

    def test_reflection_symmetry(self, square):
        mirrored = Polygon(square.vertices * np.array([-1.0, 1.0]))
        a, b = polygon_moments(square), polygon_moments(mirrored)
        assert a.J == pytest.approx(b.J, rel=1e-15)
        assert a.I == pytest.approx(b.I, rel=1e-15)
        assert a.volume == pytest.approx(b.volume, rel=1e-15)

    def test_orientation_autonormalized(self):
        cw = Polygon([[-1, -1], [-1, 1], [1, 1], [1, -1]])
        assert cw.signed_area() > 0.0

    def test_degenerate_rejected(self):
        with pytest.raises(DegenerateShapeError):
            Polygon([[0, 0], [1, 0]])
        with pytest.raises(DegenerateShapeError):
            Polygon([[0, 0], [1, 0], [2, 0]])
        with pytest.raises(DegenerateShapeError):
            Polygon([[0, 0], [0, 0], [1, 0], [0, 1]])

    def test_monte_carlo_agreement(self, hexagon):
        m = polygon_moments(hexagon)
        vol, js = _mc.volume_moments(hexagon, n=200_000, seed=1)
        assert vol.agrees(m.volume)
        for k in range(2):
            assert js[k].agrees(m.J[k])
        surf, iks = _mc.boundary_moments(hexagon, n=200_000, seed=2)
        assert surf.value == pytest.approx(m.surface, rel=1e-12)
        for k in range(2):
            assert iks[k].agrees(m.I[k])


class TestSimplicialMoments:
    def test_standard_simplex_r3(self):
        v = np.eye(4, 3, k=-1)
        body = SimplicialBody(v, [[0, 1, 2, 3]],
                              [[0, 2, 1], [0, 1, 3], [0, 3, 2], [1, 2, 3]])
        m = simplicial_moments(body)
        assert m.volume == pytest.approx(1.0 / 6.0, rel=1e-14)
        assert m.J == pytest.approx([1.0 / 60.0] * 3, rel=1e-13)

    def test_cube_mesh(self, cube_mesh):
        m = simplicial_moments(cube_mesh)
        assert m.volume == pytest.approx(1.0, rel=1e-14)
        assert m.J == pytest.approx([1.0 / 3.0] * 3, rel=1e-13)
        assert m.surface == pytest.approx(6.0, rel=1e-13)
        assert m.I == pytest.approx([7.0 / 3.0] * 3, rel=1e-13)
        assert m.centroid == pytest.approx([0.5] * 3, rel=1e-13)

    def test_mirror_image_equal_moments(self, cube_mesh):
        v = cube_mesh.vertices * np.array([-1.0, 1.0, 1.0])
        simp = cube_mesh.simplices[:, [0, 1, 3, 2]]       # restore orientation
        fac = cube_mesh.facets[:, [0, 2, 1]]
        mirrored = SimplicialBody(v, simp, fac)
        a, b = simplicial_moments(cube_mesh), simplicial_moments(mirrored)
        assert a.volume == pytest.approx(b.volume, rel=1e-14)
        assert a.J == pytest.approx(b.J, rel=1e-13)
        assert a.I == pytest.approx(b.I, rel=1e-13)

    def test_inconsistent_facets_rejected(self, cube_mesh):
        bad = cube_mesh.facets.copy()
        bad[0] = bad[0][[0, 2, 1]]        # flip one facet inward
        with pytest.raises(OrientationError):
            SimplicialBody(cube_mesh.vertices, cube_mesh.simplices, bad)

    def test_degenerate_simplex_rejected(self):
        v = np.array([[0.0, 0.0], [1.0, 0.0], [2.0, 0.0]])
        with pytest.raises(DegenerateShapeError):
            SimplicialBody(v, [[0, 1, 2]], [[0, 1], [1, 2], [2, 0]])

    @pytest.mark.parametrize("dim", [2, 3, 4])
    def test_formula_vs_monte_carlo_random_simplices(self, dim):
        # Anti-hallucination gate for the barycentric second-moment formula:
        # three random simplices per dimension against hit-or-miss sampling.
        rng = np.random.default_rng(100 + dim)
        for trial in range(3):
            while True:
                v = rng.uniform(-1.0, 1.0, (dim + 1, dim))
                vol = np.linalg.det(v[1:] - v[0]) / math.factorial(dim)
                if abs(vol) > 0.05:
                    break
            if vol < 0.0:
                v[[0, 1]] = v[[1, 0]]
            facets = [[j for j in range(dim + 1) if j != i] for i in range(dim + 1)]
            body = SimplicialBody(v, [list(range(dim + 1))], _orient(v, facets))
            m = simplicial_moments(body)
            est_vol, est_js = _mc.volume_moments(body, n=150_000, seed=trial)
            assert est_vol.agrees(m.volume)
            for k in range(dim):
                assert est_js[k].agrees(m.J[k])


def _orient(vertices, facets):
    """Flip facet vertex order until the cone volumes match a positive body."""
    out = []
    for f in facets:
        pts = vertices[np.asarray(f)]
        mat = pts.T
        centroid = vertices.mean(axis=0)
        c = _facet_normal(pts)
        if c @ (pts.mean(axis=0) - centroid) < 0.0:
            f = list(f)
            f[-1], f[-2] = f[-2], f[-1]
        out.append(list(f))
    return out


def _facet_normal(pts):
    n = pts.shape[1]
    edges = (pts[1:] - pts[0]).T
    c = np.empty(n)
    for i in range(n):
        m = np.zeros((n, n))
        m[i, 0] = 1.0
        m[:, 1:] = edges
        c[i] = np.linalg.det(m)
    return c


class TestEllipsoidMoments:
    @pytest.mark.parametrize("dim", [2, 3, 4])
    @pytest.mark.parametrize("radius", [0.5, 1.0, 2.0])
    def test_ball_closed_forms(self, dim, radius):
        m = ellipsoid_moments(Ball(dim, radius))
        omega = unit_ball_volume(dim)
        assert m.volume == pytest.approx(omega * radius ** dim, rel=1e-14)
        assert m.J == pytest.approx([ball_volume_moment(dim, radius)] * dim, rel=1e-13)
        assert m.I == pytest.approx([ball_boundary_moment(dim, radius)] * dim, rel=1e-13)
        assert m.surface == pytest.approx(ball_surface_measure(dim, radius), rel=1e-13)

    def test_unit_ball_3d_value(self, unit_ball_3d):
        m = ellipsoid_moments(unit_ball_3d)
        assert m.J[0] == pytest.approx(4.0 * math.pi / 15.0, rel=1e-14)

    def test_unit_disc_boundary_equality_case(self):
        m = ellipsoid_moments(Ball(2, 1.0))
        # Per-axis equality for the disc: I^4 = 64 pi J^3.
        assert m.I[0] ** 4 == pytest.approx(64.0 * math.pi * m.J[0] ** 3, rel=1e-13)
        assert m.I[0] == pytest.approx(math.pi, rel=1e-14)

    def test_ellipse_scaling_law(self, ellipse):
        m = ellipsoid_moments(ellipse)
        assert m.J == pytest.approx([math.pi, math.pi / 16.0], rel=1e-13)
        assert m.J_prod == pytest.approx(math.pi ** 2 / 16.0, rel=1e-13)

    def test_ellipse_boundary_vs_monte_carlo(self, ellipse):
        m = ellipsoid_moments(ellipse)
        surf, iks = _mc.boundary_moments(ellipse, n=400_000, seed=5)
        assert surf.agrees(m.surface)
        for k in range(2):
            assert iks[k].agrees(m.I[k])

    def test_nonspherical_3d_boundary_unsupported(self):
        e = Ellipsoid([1.0, 2.0, 3.0])
        with pytest.raises(UnsupportedShapeError):
            ellipsoid_moments(e)
        m = ellipsoid_moments(e, boundary=False)
        assert not m.has_boundary()
        assert m.volume == pytest.approx(unit_ball_volume(3) * 6.0, rel=1e-14)

    def test_offcenter_parallel_axis(self):
        ball = Ball(2, 1.0, center=[2.0, 0.0])
        m = ellipsoid_moments(ball)
        assert m.J[0] == pytest.approx(math.pi / 4.0 + 4.0 * math.pi, rel=1e-13)
        assert m.I[0] == pytest.approx(math.pi + 4.0 * 2.0 * math.pi, rel=1e-13)


class TestMomentSummaryInvariants:
    def test_matrix_diag_and_determinant(self, hexagon):
        m = polygon_moments(hexagon.rotated(rotation(0.3)).translated([0.5, -0.2]))
        assert np.array_equal(np.diag(m.M), m.J)
        assert m.M == pytest.approx(m.M.T, rel=1e-15)
        eig = np.linalg.eigvalsh(m.M)
        assert m.D == pytest.approx(float(np.prod(eig)), rel=1e-12)

    def test_polar_moment_minimal_at_centroid(self, hexagon):
        shape = hexagon.translated([0.7, -0.4])
        centered, _ = canonical_placement(shape, mode="volume")
        j0 = polygon_moments(centered).J0
        rng = np.random.default_rng(4)
        for _ in range(10):
            shifted = centered.translated(rng.uniform(-1.0, 1.0, 2))
            assert polygon_moments(shifted).J0 >= j0 - 1e-12


class TestCanonicalPlacement:
    def test_translated_square(self, square):
        moved = square.translated([5.0, 7.0])
        placed, placement = canonical_placement(moved, mode="volume")
        assert placement.translation == pytest.approx([-5.0, -7.0], rel=1e-14)
        assert placement.rotation == pytest.approx(np.eye(2))
        assert polygon_moments(placed).centroid == pytest.approx([0.0, 0.0], abs=1e-13)

    def test_rotated_rectangle_realigned(self):
        rect = Polygon([[-2, -0.5], [2, -0.5], [2, 0.5], [-2, 0.5]])
        skewed = rect.rotated(rotation(math.pi / 6.0)).translated([1.0, 2.0])
        placed, placement = canonical_placement(skewed, mode="boundary", rotate=True)
        m = moments(placed)
        assert abs(m.M_boundary[0, 1]) < 1e-10 * m.I0
        assert m.boundary_centroid == pytest.approx([0.0, 0.0], abs=1e-12)
        # The recovered rotation undoes the applied one up to axis symmetry.
        assert placement.rotation @ placement.rotation.T == pytest.approx(np.eye(2))

    def test_disc_gets_identity_rotation(self, disc):
        _, placement = canonical_placement(disc, mode="boundary", rotate=True)
        assert placement.rotation == pytest.approx(np.eye(2), abs=1e-12)

    def test_placement_reproduces_transform(self, hexagon):
        shape = hexagon.rotated(rotation(0.8)).translated([0.3, 0.9])
        placed, placement = canonical_placement(shape, mode="boundary", rotate=True)
        assert placement.apply(shape.vertices) == pytest.approx(placed.vertices)


class TestAffinity:
    def test_identity(self, square):
        out = apply_affinity(square, np.array([1.0, 1.0]))
        assert np.array_equal(out.vertices, square.vertices)

    def test_square_to_rectangle_values(self, square):
        out = apply_affinity(square, np.array([2.0, 0.5]))
        m = moments(out)
        assert m.J[0] == pytest.approx(16.0 / 3.0, rel=1e-14)
        assert m.J[1] == pytest.approx(1.0 / 3.0, rel=1e-14)
        assert m.J_prod == pytest.approx(16.0 / 9.0, rel=1e-14)

    def test_disc_to_ellipse(self):
        out = apply_affinity(Ball(2, 1.0), np.array([2.0, 0.5]))
        m = ellipsoid_moments(out)
        assert m.J == pytest.approx([math.pi, math.pi / 16.0], rel=1e-13)
        assert m.J_prod == pytest.approx(math.pi ** 2 / 16.0, rel=1e-13)

    def test_nonpositive_scale_rejected(self, square):
        with pytest.raises(DegenerateShapeError):
            apply_affinity(square, np.array([1.0, -2.0]))

    def test_general_scaling_law(self, triangle):
        t = np.array([1.7, 0.6])
        before = moments(triangle, boundary=False).J
        after = moments(apply_affinity(triangle, t), boundary=False).J
        assert after == pytest.approx(t ** 2 * np.prod(t) * before, rel=1e-13)


class TestNormalizeJ:
    def test_ellipse_to_disc(self, ellipse):
        t, image = normalize_J(ellipse)
        assert t == pytest.approx([0.5, 2.0], rel=1e-13)
        assert image.semi_axes == pytest.approx([1.0, 1.0], rel=1e-13)

    def test_ball_unchanged(self, unit_ball_3d):
        t, _ = normalize_J(unit_ball_3d)
        assert t == pytest.approx([1.0, 1.0, 1.0], rel=1e-14)

    def test_rectangle_to_square(self, square):
        rect = apply_affinity(square, np.array([2.0, 0.5]))
        t, image = normalize_J(rect)
        assert t == pytest.approx([0.5, 2.0], rel=1e-13)
        m = moments(image, boundary=False)
        assert m.J == pytest.approx([4.0 / 3.0] * 2, rel=1e-13)
        assert m.J[0] == pytest.approx(math.sqrt(16.0 / 9.0), rel=1e-13)

    def test_product_of_scales_is_one(self, hexagon):
        stretched = apply_affinity(hexagon, np.array([3.0, 0.25]))
        t, image = normalize_J(stretched)
        assert float(np.prod(t)) == pytest.approx(1.0, rel=1e-12)
        J = moments(image, boundary=False).J
        assert J[0] == pytest.approx(J[1], rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000), logs=st.lists(
    st.floats(-1.0, 1.0), min_size=2, max_size=2))
def test_property_product_invariance(seed, logs):
    # Volume-preserving affinities leave the moment product unchanged.
    poly = random_convex_polygons(seed, 1)[0]
    t = np.exp([logs[0], -logs[0]])
    before = moments(poly, boundary=False).J_prod
    after = moments(apply_affinity(poly, t), boundary=False).J_prod
    assert after == pytest.approx(before, rel=1e-10)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_property_equalization(seed):
    poly = random_convex_polygons(seed, 1)[0].translated([0.3, -0.1])
    _, image = normalize_J(poly)
    J = moments(image, boundary=False).J
    geo = math.sqrt(float(np.prod(J)))
    assert np.max(np.abs(J - geo)) / geo < 1e-10


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 10_000), dim=st.sampled_from([2, 3, 4]))
def test_property_kuhn_boxes_match_exact_box(seed, dim):
    # Translated/scaled boxes have elementary closed-form moments.
    rng = np.random.default_rng(seed)
    shift = rng.uniform(-1.0, 1.0, dim)
    body = kuhn_box_mesh(dim).translated(shift)
    m = simplicial_moments(body)
    lo, hi = shift, shift + 1.0
    vol = 1.0
    expect_j = [(hi[k] ** 3 - lo[k] ** 3) / 3.0 for k in range(dim)]
    assert m.volume == pytest.approx(vol, rel=1e-13)
    assert m.J == pytest.approx(expect_j, rel=1e-12)

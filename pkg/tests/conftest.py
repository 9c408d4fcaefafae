import numpy as np
import pytest

from isomoment import Ball, Ellipsoid, FourierBoundary, Polygon, regular_polygon
from isomoment.randomshapes import kuhn_box_mesh


@pytest.fixture
def square():
    return Polygon([[-1.0, -1.0], [1.0, -1.0], [1.0, 1.0], [-1.0, 1.0]])


@pytest.fixture
def triangle():
    return Polygon([(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)])


@pytest.fixture
def hexagon():
    return regular_polygon(6)


@pytest.fixture
def disc():
    return FourierBoundary.circle()


@pytest.fixture
def ellipse_boundary():
    return FourierBoundary.ellipse(2.0, 0.5)


@pytest.fixture
def ellipse():
    return Ellipsoid([2.0, 0.5])


@pytest.fixture
def unit_ball_3d():
    return Ball(3, 1.0)


@pytest.fixture
def cube_mesh():
    return kuhn_box_mesh(3)


def rotation(angle):
    c, s = np.cos(angle), np.sin(angle)
    return np.array([[c, -s], [s, c]])

import math

import numpy as np
import pytest

from hybridmc.errors import ModelError, ProjectionError
from hybridmc.models import BoxInvariant, project_to_boundary


def test_membership_is_strict():
    inv = BoxInvariant.interval(upper=20.25)
    assert inv.contains([20.0])
    assert not inv.contains([20.25])
    assert inv.contains_closure([20.25])


def test_bounds_must_be_ordered():
    with pytest.raises(ModelError):
        BoxInvariant((1.0,), (1.0,))
    with pytest.raises(ModelError):
        BoxInvariant((0.0, 0.0), (1.0,))


def test_project_half_line():
    inv = BoxInvariant.interval(upper=20.25)
    assert project_to_boundary(inv, [20.5]).tolist() == [20.25]


def test_project_keeps_in_bounds_coordinates():
    square = BoxInvariant((0.0, 0.0), (1.0, 1.0))
    assert project_to_boundary(square, [1.3, 0.5]).tolist() == [1.0, 0.5]


def test_project_corner():
    square = BoxInvariant((0.0, 0.0), (1.0, 1.0))
    assert project_to_boundary(square, [-2.0, 7.0]).tolist() == [0.0, 1.0]


def test_project_interior_point_fails():
    square = BoxInvariant((0.0, 0.0), (1.0, 1.0))
    with pytest.raises(ProjectionError):
        project_to_boundary(square, [0.5, 0.5])


def test_projection_is_idempotent():
    square = BoxInvariant((0.0, 0.0), (1.0, 1.0))
    rng = np.random.default_rng(1)
    for z in rng.uniform(-3, 4, size=(200, 2)):
        if square.contains(z):
            continue
        p = project_to_boundary(square, z)
        # push back outside along the violated faces and project again
        nudged = p + np.where(z > 1, 1e-6, np.where(z < 0, -1e-6, 0.0))
        assert np.array_equal(project_to_boundary(square, nudged), p)


def test_whole_space_contains_everything():
    inv = BoxInvariant.whole_space(2)
    assert inv.contains([1e300, -1e300])
    assert inv.lower == (-math.inf, -math.inf)

from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from phase_lab.errors import ValidationError
from phase_lab.loops import ParameterLoop

radii = st.floats(0.05, 2.0)
windings = st.integers(-3, 3).filter(bool)


@given(radii, windings)
def test_circle_area_signed(r, w):
    loop = ParameterLoop.circle(0.3 - 0.2j, r, w)
    assert loop.signed_area == pytest.approx(w * math.pi * r**2)
    assert loop.reversed().signed_area == pytest.approx(-loop.signed_area)


def test_polygon_area_and_orientation():
    square = ParameterLoop.polygon([0, 1, 1 + 1j, 1j])
    assert square.signed_area == pytest.approx(1.0)
    assert square.reversed().signed_area == pytest.approx(-1.0)
    assert square.point(0.0) == 0
    assert square.point(0.25) == pytest.approx(1)
    assert square.point(0.5) == pytest.approx(1 + 1j)


@pytest.mark.parametrize(
    "loop",
    [
        ParameterLoop.circle(0.1, 0.5, 2),
        ParameterLoop.polygon([0, 1, 1j]),
        ParameterLoop.latitude(1.0, -1),
        ParameterLoop.longitude(0.4),
    ],
)
@pytest.mark.parametrize("t", [0.13, 0.5, 0.91])
def test_velocity_is_derivative(loop, t):
    h = 1e-6
    if loop.is_plane:
        fd = (loop.point(t + h) - loop.point(t - h)) / (2 * h)
        assert abs(fd - loop.velocity(t)) < 1e-6 * max(1, abs(fd))
    else:
        fd = (np.array(loop.point(t + h)) - np.array(loop.point(t - h))) / (2 * h)
        assert np.allclose(fd, loop.velocity(t), atol=1e-5)


@pytest.mark.parametrize("theta0, expected", [(math.pi / 2, 2 * math.pi), (math.pi / 3, math.pi)])
def test_solid_angle(theta0, expected):
    loop = ParameterLoop.latitude(theta0)
    assert loop.solid_angle == pytest.approx(expected)
    assert loop.is_great_circle == (theta0 == math.pi / 2)


def test_samples_close_exactly():
    loop = ParameterLoop.circle(0, 0.5, K=64)
    pts = loop.samples()
    assert len(pts) == 65
    assert pts[-1] == pts[0]
    assert len(loop.times()) == len(loop.midpoints()) == 64


def test_wrong_geometry_queries():
    with pytest.raises(ValidationError):
        ParameterLoop.equator().signed_area
    with pytest.raises(ValidationError):
        ParameterLoop.circle().solid_angle


@pytest.mark.parametrize(
    "kwargs",
    [dict(kind="spiral"), dict(kind="circle_plane", K=4), dict(kind="circle_plane", radius=-1),
     dict(kind="polygon_plane", vertices=(0, 1))],
)
def test_validation(kwargs):
    with pytest.raises(ValidationError):
        ParameterLoop(**kwargs)

"""Branch handling for scalar phases."""

from __future__ import annotations

import math

TWO_PI = 2 * math.pi


def wrap_phase(x: float) -> float:
    """Reduce to (-pi, pi]. Idempotent."""
    y = math.remainder(float(x), TWO_PI)
    if y <= -math.pi:
        y += TWO_PI
    return y


def circle_distance(a: float, b: float) -> float:
    """min_k |a - b + 2 pi k|."""
    return abs(math.remainder(float(a) - float(b), TWO_PI))

"""Closed parameter loops on the unit interval t in [0, 1].

Plane loops map t to a complex number z(t); sphere loops map t to polar and
azimuthal angles (theta(t), phi(t)). Sampling is uniform, t_k = k / K, and
sample K is identified with sample 0.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ValidationError

PLANE_KINDS = ("circle_plane", "polygon_plane")
SPHERE_KINDS = ("sphere_latitude", "sphere_longitude")


@dataclass(frozen=True)
class ParameterLoop:
    kind: str
    K: int = 2048
    center: complex = 0j
    radius: float = 0.0
    winding: int = 1
    theta0: float = math.pi / 2
    phi0: float = 0.0
    vertices: tuple = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in PLANE_KINDS + SPHERE_KINDS:
            raise ValidationError(f"unknown loop kind {self.kind!r}")
        if self.K < 8:
            raise ValidationError(f"need K >= 8 samples, got {self.K}")
        if self.kind == "polygon_plane" and len(self.vertices) < 3:
            raise ValidationError("polygon needs at least 3 vertices")
        if self.radius < 0:
            raise ValidationError("radius must be non-negative")
        object.__setattr__(self, "center", complex(self.center))

    # constructors -----------------------------------------------------------
    @classmethod
    def circle(cls, center=0j, radius=0.5, winding=1, K=2048) -> ParameterLoop:
        return cls("circle_plane", K=K, center=complex(center), radius=float(radius), winding=int(winding))

    @classmethod
    def polygon(cls, vertices, K=2048) -> ParameterLoop:
        return cls("polygon_plane", K=K, vertices=tuple(complex(v) for v in vertices))

    @classmethod
    def latitude(cls, theta0, winding=1, K=2048) -> ParameterLoop:
        return cls("sphere_latitude", K=K, theta0=float(theta0), winding=int(winding))

    @classmethod
    def equator(cls, winding=1, K=2048) -> ParameterLoop:
        return cls.latitude(math.pi / 2, winding, K)

    @classmethod
    def longitude(cls, phi0=0.0, winding=1, K=2048) -> ParameterLoop:
        return cls("sphere_longitude", K=K, phi0=float(phi0), winding=int(winding))

    def with_samples(self, K: int) -> ParameterLoop:
        from dataclasses import replace

        return replace(self, K=K)

    def reversed(self) -> ParameterLoop:
        """Same path traversed the other way."""
        from dataclasses import replace

        if self.kind == "polygon_plane":
            return replace(self, vertices=tuple(reversed(self.vertices)))
        return replace(self, winding=-self.winding)

    # geometry ----------------------------------------------------------------
    @property
    def is_plane(self) -> bool:
        return self.kind in PLANE_KINDS

    @property
    def is_sphere(self) -> bool:
        return self.kind in SPHERE_KINDS

    @property
    def is_great_circle(self) -> bool:
        return self.kind == "sphere_longitude" or (
            self.kind == "sphere_latitude" and abs(self.theta0 - math.pi / 2) < 1e-12
        )

    @property
    def signed_area(self) -> float:
        """Enclosed area, positive for counterclockwise traversal (plane loops)."""
        if self.kind == "circle_plane":
            return self.winding * math.pi * self.radius**2
        if self.kind == "polygon_plane":
            v = np.asarray(self.vertices)
            x, y = v.real, v.imag
            return 0.5 * float(np.sum(x * np.roll(y, -1) - np.roll(x, -1) * y))
        raise ValidationError("signed_area is defined for plane loops")

    @property
    def solid_angle(self) -> float:
        """Oriented solid angle swept on the unit sphere (sphere loops)."""
        if self.kind == "sphere_latitude":
            return self.winding * 2 * math.pi * (1 - math.cos(self.theta0))
        if self.kind == "sphere_longitude":
            return self.winding * 2 * math.pi
        raise ValidationError("solid_angle is defined for sphere loops")

    @property
    def extent(self) -> tuple[complex, float]:
        """(center, radius) of a disc containing a plane loop."""
        if self.kind == "circle_plane":
            return self.center, self.radius
        v = np.asarray(self.vertices)
        c = complex(v.mean())
        return c, float(np.max(np.abs(v - c)))

    # evaluation --------------------------------------------------------------
    def _polygon_edges(self):
        v = np.asarray(self.vertices)
        w = np.roll(v, -1)
        lengths = np.abs(w - v)
        total = lengths.sum()
        if total == 0:
            raise ValidationError("degenerate polygon")
        breaks = np.concatenate([[0.0], np.cumsum(lengths) / total])
        return v, w, breaks

    def point(self, t: float):
        """z(t) for plane loops, (theta, phi) for sphere loops."""
        t = float(t) % 1.0
        if self.kind == "circle_plane":
            return self.center + self.radius * complex(math.cos(2 * math.pi * self.winding * t),
                                                       math.sin(2 * math.pi * self.winding * t))
        if self.kind == "polygon_plane":
            v, w, breaks = self._polygon_edges()
            i = min(int(np.searchsorted(breaks, t, side="right")) - 1, len(v) - 1)
            s = (t - breaks[i]) / (breaks[i + 1] - breaks[i])
            return complex(v[i] + s * (w[i] - v[i]))
        if self.kind == "sphere_latitude":
            return self.theta0, 2 * math.pi * self.winding * t
        return 2 * math.pi * self.winding * t, self.phi0

    def velocity(self, t: float):
        """dz/dt, or (dtheta/dt, dphi/dt)."""
        t = float(t) % 1.0
        if self.kind == "circle_plane":
            w = 2 * math.pi * self.winding
            return 1j * w * self.radius * complex(math.cos(w * t), math.sin(w * t))
        if self.kind == "polygon_plane":
            v, w, breaks = self._polygon_edges()
            i = min(int(np.searchsorted(breaks, t, side="right")) - 1, len(v) - 1)
            return complex((w[i] - v[i]) / (breaks[i + 1] - breaks[i]))
        if self.kind == "sphere_latitude":
            return 0.0, 2 * math.pi * self.winding
        return 2 * math.pi * self.winding, 0.0

    def times(self) -> np.ndarray:
        """t_0 .. t_{K-1}."""
        return np.arange(self.K) / self.K

    def midpoints(self) -> np.ndarray:
        return (np.arange(self.K) + 0.5) / self.K

    def samples(self) -> list:
        """K+1 points with the last one an exact copy of the first."""
        pts = [self.point(t) for t in self.times()]
        pts.append(pts[0])
        return pts

"""Marked points, geodesic caps, and azimuthal sectors on the unit sphere.

The first sphere factor carries three disjoint caps arranged symmetrically
under the 4*pi/3 rotation about the y-axis; the second factor carries three
equal azimuthal sectors of width 2*pi/3 that tile the sphere with meridian
boundaries.  Cap centers sit at the great-circle midpoints between
consecutive marked points, which is the only placement that contains the
prescribed pair of marked points while excluding the other four (the two
candidates at distance pi/3 from a marked point are equidistant, so a cap
centered on the marked point itself cannot separate them).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError
from .sphere import SpherePoint, rotate_y

CAP_ROTATION_ANGLE = 4.0 * math.pi / 3.0  # permutes the caps, about the y-axis
SECTOR_ROTATION_ANGLE = 2.0 * math.pi / 3.0  # permutes the sectors, about the z-axis
DEFAULT_CAP_RADIUS = math.pi / 4.0
CAP_RADIUS_WINDOW = (math.pi / 6.0, math.pi / 3.0)
DEFAULT_POLE_MARGIN = math.pi / 36.0

_BOUNDARY_TOL = 1e-12


@dataclass(frozen=True)
class MarkedPoints:
    """The six marked points: both poles and their two rotated images."""

    p1: SpherePoint
    p2: SpherePoint
    p3: SpherePoint
    q1: SpherePoint
    q2: SpherePoint
    q3: SpherePoint

    def p(self, i: int) -> SpherePoint:
        return (self.p1, self.p2, self.p3)[(i - 1) % 3]

    def q(self, i: int) -> SpherePoint:
        return (self.q1, self.q2, self.q3)[(i - 1) % 3]


def default_marked_points() -> MarkedPoints:
    p1 = SpherePoint(0.0, 0.0, 1.0)
    q1 = SpherePoint(0.0, 0.0, -1.0)
    p2 = rotate_y(CAP_ROTATION_ANGLE, p1)
    p3 = rotate_y(CAP_ROTATION_ANGLE, p2)
    q2 = rotate_y(CAP_ROTATION_ANGLE, q1)
    q3 = rotate_y(CAP_ROTATION_ANGLE, q2)
    return MarkedPoints(p1, p2, p3, q1, q2, q3)


@dataclass(frozen=True)
class CapRegion:
    """Open geodesic cap: points at angular distance < radius from the center."""

    center: SpherePoint
    geodesic_radius: float

    def __post_init__(self) -> None:
        if not 0.0 < self.geodesic_radius < math.pi:
            raise ValueError("geodesic radius must lie in (0, pi)")

    def contains(self, p: SpherePoint) -> bool:
        return self.center.angle_to(p) < self.geodesic_radius

    def contains_xyz(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        dot = self.center.x * x + self.center.y * y + self.center.z * z
        return dot > math.cos(self.geodesic_radius)

    def cap_frame(self) -> tuple[np.ndarray, float]:
        return self.center.as_array(), self.geodesic_radius

    def polar_breakpoints(self) -> list[float]:
        colat = math.acos(min(1.0, max(-1.0, self.center.z)))
        return [colat - self.geodesic_radius, colat + self.geodesic_radius]


@dataclass(frozen=True)
class SectorRegion:
    """Closed azimuthal sector theta2 in [start, end] (end may exceed 2*pi)."""

    theta2_start: float
    theta2_end: float

    def __post_init__(self) -> None:
        if not 0.0 < self.theta2_end - self.theta2_start <= 2.0 * math.pi:
            raise ValueError("sector width must lie in (0, 2*pi]")

    @property
    def width(self) -> float:
        return self.theta2_end - self.theta2_start

    def _offset(self, theta2: float) -> float:
        return (theta2 - self.theta2_start) % (2.0 * math.pi)

    def contains(self, p: SpherePoint) -> bool:
        _, theta2 = p.angles()
        return self._offset(theta2) <= self.width or self._is_pole(p)

    def _is_pole(self, p: SpherePoint) -> bool:
        return abs(p.z) >= 1.0 - _BOUNDARY_TOL

    def classify(self, p: SpherePoint) -> str:
        """'interior', 'boundary', or 'exterior'; poles are corner vertices."""
        if self._is_pole(p):
            return "boundary"
        off = self._offset(p.angles()[1])
        if min(off, abs(off - self.width), 2.0 * math.pi - off) <= _BOUNDARY_TOL:
            return "boundary"
        return "interior" if off < self.width else "exterior"

    def contains_xyz(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        theta2 = np.arctan2(y, x)
        off = (theta2 - self.theta2_start) % (2.0 * math.pi)
        return (off <= self.width) | (np.abs(z) >= 1.0 - _BOUNDARY_TOL)


@dataclass(frozen=True)
class ComplementRegion:
    """Set complement of another region (used for cap complements)."""

    region: CapRegion

    def contains(self, p: SpherePoint) -> bool:
        return not self.region.contains(p)

    def contains_xyz(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        return ~self.region.contains_xyz(x, y, z)


def default_cap_center(i: int) -> SpherePoint:
    """Center of cap i: the xz great-circle midpoint of its two marked points."""
    c = SpherePoint(math.sin(-math.pi / 6.0), 0.0, math.cos(-math.pi / 6.0))
    for _ in range((i - 1) % 3):
        c = rotate_y(CAP_ROTATION_ANGLE, c)
    return c


def default_cap_region(i: int, radius: float = DEFAULT_CAP_RADIUS) -> CapRegion:
    """Cap i at the given radius; the radius window keeps the marked-point
    containment pattern and pairwise disjointness."""
    lo, hi = CAP_RADIUS_WINDOW
    if not lo < radius < hi:
        raise ConfigurationError(
            f"cap radius {radius:.6f} outside the admissible window ({lo:.6f}, {hi:.6f})"
        )
    return CapRegion(center=default_cap_center(i), geodesic_radius=radius)


def default_sector_region(i: int) -> SectorRegion:
    """Sector i of the three equal azimuthal sectors tiling the sphere.

    The first runs over theta2 in [pi/3, pi]; the others follow by the
    2*pi/3 azimuthal rotation, the third wrapping through 2*pi.
    """
    start = math.pi / 3.0 + ((i - 1) % 3) * SECTOR_ROTATION_ANGLE
    return SectorRegion(theta2_start=start, theta2_end=start + SECTOR_ROTATION_ANGLE)


@dataclass(frozen=True, eq=False)
class BoundarySample:
    """A boundary point with its outward unit normal (tangent to the sphere)."""

    point: SpherePoint
    outward_normal: np.ndarray
    arc: str


def _cap_boundary_samples(cap: CapRegion, n: int) -> list[BoundarySample]:
    c = cap.center.as_array()
    seed = np.array([1.0, 0.0, 0.0])
    if abs(c @ seed) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ c) * c
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(c, e1)
    rho = cap.geodesic_radius
    out = []
    for k in range(n):
        phi = 2.0 * math.pi * (k + 0.5) / n
        direction = math.cos(phi) * e1 + math.sin(phi) * e2
        b = math.cos(rho) * c + math.sin(rho) * direction
        # Tangent direction of increasing distance from the center.
        normal = (math.cos(rho) * b - c) / math.sin(rho)
        out.append(BoundarySample(SpherePoint.from_array(b), normal, "circle"))
    return out


def _meridian_samples(theta2: float, n: int, margin: float, outward_sign: float, arc: str) -> list[BoundarySample]:
    span = math.pi - 2.0 * margin
    if span <= 0.0:
        return []
    e2 = np.array([-math.sin(theta2), math.cos(theta2), 0.0])
    out = []
    for k in range(n):
        theta1 = margin + (k + 0.5) * span / n
        out.append(
            BoundarySample(SpherePoint.from_angles(theta1, theta2), outward_sign * e2, arc)
        )
    return out


def sample_boundary(
    region: CapRegion | SectorRegion,
    n: int,
    pole_margin: float = DEFAULT_POLE_MARGIN,
) -> list[BoundarySample]:
    """n points per boundary component with outward unit normals.

    Cap boundaries are circles; sector boundaries are their two meridian
    arcs, truncated ``pole_margin`` away from the corner vertices at the
    poles (normals are undefined there).
    """
    if n < 1:
        raise ValueError("need at least one sample")
    if isinstance(region, CapRegion):
        return _cap_boundary_samples(region, n)
    if isinstance(region, SectorRegion):
        start = region.theta2_start % (2.0 * math.pi)
        end = region.theta2_end % (2.0 * math.pi)
        return _meridian_samples(start, n, pole_margin, -1.0, "start") + _meridian_samples(
            end, n, pole_margin, +1.0, "end"
        )
    raise TypeError(f"cannot sample the boundary of {type(region).__name__}")


def uniform_sphere_samples(n: int, rng: np.random.Generator) -> list[SpherePoint]:
    """n independent uniform points on the sphere (Gaussian direction trick)."""
    out = []
    while len(out) < n:
        v = rng.normal(size=3)
        norm = np.linalg.norm(v)
        if norm > 1e-12:
            out.append(SpherePoint.from_array(v / norm))
    return out


def interior_samples(region, n: int, rng: np.random.Generator, max_tries: int = 100000) -> list[SpherePoint]:
    """Rejection-sample n sphere-uniform points lying inside the region."""
    out: list[SpherePoint] = []
    tries = 0
    while len(out) < n:
        if tries >= max_tries:
            raise RuntimeError(f"interior sampling stalled after {max_tries} draws")
        tries += 1
        v = rng.normal(size=3)
        norm = np.linalg.norm(v)
        if norm <= 1e-12:
            continue
        p = SpherePoint.from_array(v / norm)
        if region.contains(p):
            out.append(p)
    return out


def membership_ledger(points: MarkedPoints, caps: dict[int, CapRegion]) -> dict[str, bool]:
    """The 18-entry membership table of the marked points against the caps."""
    table = {}
    for name, pt in (
        ("p1", points.p1),
        ("p2", points.p2),
        ("p3", points.p3),
        ("q1", points.q1),
        ("q2", points.q2),
        ("q3", points.q3),
    ):
        for i, cap in sorted(caps.items()):
            table[f"{name}_in_N{i}"] = cap.contains(pt)
    return table


def expected_membership_ledger() -> dict[str, bool]:
    """Prescribed pattern: cap i holds exactly p_i and q_{i-1} (cyclically)."""
    table = {f"{name}_in_N{i}": False for name in ("p1", "p2", "p3", "q1", "q2", "q3") for i in (1, 2, 3)}
    table["p1_in_N1"] = table["q3_in_N1"] = True
    table["p2_in_N2"] = table["q1_in_N2"] = True
    table["p3_in_N3"] = table["q2_in_N3"] = True
    return table

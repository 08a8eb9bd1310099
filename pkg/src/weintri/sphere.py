"""Charts, potentials, and finite-difference exterior calculus on the unit sphere.

Points live either on the unit sphere in ambient coordinates or in a
stereographic chart (the real and imaginary parts of the affine coordinate).
In a chart with complex structure J sending du -> dv, a potential f induces

    d^C f = df o J = f_v du - f_u dv,
    omega_f = -d(d^C f) = (f_uu + f_vv) du ^ dv,

so the two-form density is the chart Laplacian.  The potential
log(1 + u^2 + v^2) makes omega_f the round area form of the unit sphere
(total area 4*pi).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import NumericalFault, ProjectionError

DEFAULT_FD_STEP = 1e-4

_NORTH = np.array([0.0, 0.0, 1.0])


@dataclass(frozen=True)
class SpherePoint:
    """A point on the unit sphere in ambient coordinates."""

    x: float
    y: float
    z: float

    def __post_init__(self) -> None:
        n = self.x * self.x + self.y * self.y + self.z * self.z
        if not math.isfinite(n) or abs(n - 1.0) > 1e-9:
            raise ValueError(f"({self.x}, {self.y}, {self.z}) is not on the unit sphere")

    @classmethod
    def normalized(cls, x: float, y: float, z: float) -> "SpherePoint":
        n = math.sqrt(x * x + y * y + z * z)
        if n == 0.0 or not math.isfinite(n):
            raise ValueError("cannot normalize the zero vector")
        return cls(x / n, y / n, z / n)

    @classmethod
    def from_angles(cls, theta1: float, theta2: float) -> "SpherePoint":
        """Polar angles: theta1 in [0, pi] from the +z axis, theta2 azimuthal."""
        s = math.sin(theta1)
        return cls.normalized(s * math.cos(theta2), s * math.sin(theta2), math.cos(theta1))

    @classmethod
    def from_array(cls, a: np.ndarray) -> "SpherePoint":
        return cls.normalized(float(a[0]), float(a[1]), float(a[2]))

    def angles(self) -> tuple[float, float]:
        """(theta1, theta2) with theta2 in [0, 2*pi); arbitrary at the poles."""
        theta1 = math.acos(min(1.0, max(-1.0, self.z)))
        theta2 = math.atan2(self.y, self.x) % (2.0 * math.pi)
        return theta1, theta2

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z])

    def antipode(self) -> "SpherePoint":
        return SpherePoint(-self.x, -self.y, -self.z)

    def angle_to(self, other: "SpherePoint") -> float:
        d = self.x * other.x + self.y * other.y + self.z * other.z
        return math.acos(min(1.0, max(-1.0, d)))


@dataclass(frozen=True)
class ChartPoint:
    """Real and imaginary parts of the affine coordinate in a chart."""

    u: float
    v: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.u) and math.isfinite(self.v)):
            raise ValueError(f"chart point ({self.u}, {self.v}) is not finite")

    @property
    def r2(self) -> float:
        return self.u * self.u + self.v * self.v

    def as_array(self) -> np.ndarray:
        return np.array([self.u, self.v])


def rotation_matrix_y(alpha: float) -> np.ndarray:
    """Rotation about the y-axis: (x, z) -> (x cos a + z sin a, -x sin a + z cos a)."""
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, 0.0, s], [0.0, 1.0, 0.0], [-s, 0.0, c]])


def rotation_matrix_z(alpha: float) -> np.ndarray:
    c, s = math.cos(alpha), math.sin(alpha)
    return np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])


def _apply_rotation(m: np.ndarray, p: SpherePoint) -> SpherePoint:
    return SpherePoint.normalized(*(m @ p.as_array()))


def rotate_y(alpha: float, p: SpherePoint) -> SpherePoint:
    return _apply_rotation(rotation_matrix_y(alpha), p)


def rotate_z(alpha: float, p: SpherePoint) -> SpherePoint:
    return _apply_rotation(rotation_matrix_z(alpha), p)


def _rotation_taking_to_north(pole: SpherePoint) -> np.ndarray:
    """Rotation matrix R with R @ pole = (0, 0, 1), by the Rodrigues formula.

    The axis is pole x north; for the antipodal pole (axis degenerate) the
    convention is a half-turn about the x-axis.
    """
    p = pole.as_array()
    c = float(p @ _NORTH)
    axis = np.cross(p, _NORTH)
    s = float(np.linalg.norm(axis))
    if s < 1e-15:
        if c > 0.0:
            return np.eye(3)
        return np.diag([1.0, -1.0, -1.0])  # half-turn about x
    axis = axis / s
    k = np.array(
        [
            [0.0, -axis[2], axis[1]],
            [axis[2], 0.0, -axis[0]],
            [-axis[1], axis[0], 0.0],
        ]
    )
    return np.eye(3) + s * k + (1.0 - c) * (k @ k)


class StereographicChart:
    """Stereographic chart of the sphere minus one projection point.

    The north-pole chart is (x, y, z) -> (x, y) / (1 - z); a general pole is
    handled by conjugating with the rotation taking the pole to (0, 0, 1).
    The chart origin is the antipode of the pole.
    """

    def __init__(self, pole: SpherePoint | None = None):
        self.pole = pole if pole is not None else SpherePoint(0.0, 0.0, 1.0)
        self._rot = _rotation_taking_to_north(self.pole)
        self._rot_inv = self._rot.T

    def to_chart(self, p: SpherePoint) -> ChartPoint:
        w = self._rot @ p.as_array()
        denom = 1.0 - w[2]
        if denom <= 1e-15:
            raise ProjectionError("point coincides with the projection pole")
        return ChartPoint(w[0] / denom, w[1] / denom)

    def to_sphere(self, c: ChartPoint) -> SpherePoint:
        s = 1.0 + c.r2
        w = np.array([2.0 * c.u / s, 2.0 * c.v / s, (c.r2 - 1.0) / s])
        return SpherePoint.normalized(*(self._rot_inv @ w))

    def push_tangent(self, c: ChartPoint, du: float, dv: float) -> np.ndarray:
        """Ambient image of the chart vector du*d/du + dv*d/dv at to_sphere(c)."""
        u, v, s = c.u, c.v, 1.0 + c.r2
        s2 = s * s
        d_du = np.array(
            [2.0 / s - 4.0 * u * u / s2, -4.0 * u * v / s2, 4.0 * u / s2]
        )
        d_dv = np.array(
            [-4.0 * u * v / s2, 2.0 / s - 4.0 * v * v / s2, 4.0 * v / s2]
        )
        return self._rot_inv @ (du * d_du + dv * d_dv)

    def area_scale_to_chart(self, c: ChartPoint) -> float:
        """Chart area per unit round area at this point: (1 + r^2)^2 / 4.

        The chart is conformal with |d(to_sphere)| = 2 / (1 + r^2), so round
        area scales by 4 / (1 + r^2)^2 going chart -> sphere.
        """
        s = 1.0 + c.r2
        return s * s / 4.0


@dataclass(frozen=True)
class PotentialField:
    """A real potential on a chart with first and second derivatives."""

    evaluate: Callable[[ChartPoint], float]
    gradient: Callable[[ChartPoint], tuple[float, float]]
    hessian: Callable[[ChartPoint], np.ndarray]
    derivative_mode: str = "analytic"

    @classmethod
    def from_scalar(cls, fn: Callable[[ChartPoint], float], step: float = DEFAULT_FD_STEP) -> "PotentialField":
        """Wrap a bare scalar function with centered finite differences."""

        def gradient(c: ChartPoint) -> tuple[float, float]:
            u, v, h = c.u, c.v, step
            gu = (fn(ChartPoint(u + h, v)) - fn(ChartPoint(u - h, v))) / (2.0 * h)
            gv = (fn(ChartPoint(u, v + h)) - fn(ChartPoint(u, v - h))) / (2.0 * h)
            return gu, gv

        def hessian(c: ChartPoint) -> np.ndarray:
            u, v, h = c.u, c.v, step
            f0 = fn(c)
            fuu = (fn(ChartPoint(u + h, v)) - 2.0 * f0 + fn(ChartPoint(u - h, v))) / (h * h)
            fvv = (fn(ChartPoint(u, v + h)) - 2.0 * f0 + fn(ChartPoint(u, v - h))) / (h * h)
            fuv = (
                fn(ChartPoint(u + h, v + h))
                - fn(ChartPoint(u + h, v - h))
                - fn(ChartPoint(u - h, v + h))
                + fn(ChartPoint(u - h, v - h))
            ) / (4.0 * h * h)
            return np.array([[fuu, fuv], [fuv, fvv]])

        return cls(
            evaluate=fn,
            gradient=gradient,
            hessian=hessian,
            derivative_mode=f"finite-difference(step={step:g})",
        )


def fubini_study_potential() -> PotentialField:
    """log(1 + u^2 + v^2): the round-form potential in a stereographic chart."""

    def evaluate(c: ChartPoint) -> float:
        return math.log1p(c.r2)

    def gradient(c: ChartPoint) -> tuple[float, float]:
        s = 1.0 + c.r2
        return 2.0 * c.u / s, 2.0 * c.v / s

    def hessian(c: ChartPoint) -> np.ndarray:
        s = 1.0 + c.r2
        s2 = s * s
        fuu = 2.0 / s - 4.0 * c.u * c.u / s2
        fvv = 2.0 / s - 4.0 * c.v * c.v / s2
        fuv = -4.0 * c.u * c.v / s2
        return np.array([[fuu, fuv], [fuv, fvv]])

    return PotentialField(evaluate, gradient, hessian, "analytic")


@dataclass(frozen=True)
class OneFormField:
    """Coefficients (a, b) of a du + b dv as a function of the chart point."""

    components: Callable[[ChartPoint], tuple[float, float]]


@dataclass(frozen=True)
class TwoFormDensity:
    """Coefficient of du ^ dv as a function of the chart point."""

    density: Callable[[ChartPoint], float]


def d_complex(f: PotentialField) -> OneFormField:
    """df o J with J: du -> dv, dv -> -du; equals f_v du - f_u dv."""

    def components(c: ChartPoint) -> tuple[float, float]:
        gu, gv = f.gradient(c)
        return gv, -gu

    return OneFormField(components)


def omega_from_potential(f: PotentialField) -> TwoFormDensity:
    """-d(df o J), which reduces to the chart Laplacian f_uu + f_vv."""

    def density(c: ChartPoint) -> float:
        h = f.hessian(c)
        return float(h[0, 0] + h[1, 1])

    return TwoFormDensity(density)


def fd_exterior_derivative(eta: OneFormField, p: ChartPoint, step: float = DEFAULT_FD_STEP) -> float:
    """Centered-difference d(a du + b dv) = (db/du - da/dv) du ^ dv at p."""
    if step <= 0.0:
        raise ValueError("step must be positive")
    u, v, h = p.u, p.v, step
    try:
        _, b_e = eta.components(ChartPoint(u + h, v))
        _, b_w = eta.components(ChartPoint(u - h, v))
        a_n, _ = eta.components(ChartPoint(u, v + h))
        a_s, _ = eta.components(ChartPoint(u, v - h))
    except ValueError as exc:
        raise NumericalFault(f"stencil at ({u}, {v}) left the chart domain") from exc
    val = (b_e - b_w) / (2.0 * h) - (a_n - a_s) / (2.0 * h)
    if not math.isfinite(val):
        raise NumericalFault(f"non-finite exterior derivative at ({u}, {v})")
    return val

"""Area integration of two-form densities over regions of the unit sphere.

The integrand is a density relative to the round area element
sin(theta1) dtheta1 dtheta2.  Chart two-forms are pulled back with
:func:`round_form_density`.  Regions enter only through a membership test;
integration scans each polar circle for the member azimuth intervals
(boundary crossings refined by bisection) and feeds the resulting smooth
one-dimensional profile to an adaptive quadrature.  Geodesic caps take a
closed rectangle in their own rotated frame instead, which converges much
faster.
"""

from __future__ import annotations

import math
from typing import Callable, NamedTuple

import numpy as np
from scipy import integrate

from .errors import QuadratureError
from .sphere import SpherePoint, StereographicChart, TwoFormDensity

DEFAULT_TARGET = 1e-7

_AZIMUTH_SCAN = 2048
_BISECT_TOL = 1e-13
_GAUSS_ORDER = 64

_gauss_nodes, _gauss_weights = np.polynomial.legendre.leggauss(_GAUSS_ORDER)


class QuadratureResult(NamedTuple):
    value: float
    error_estimate: float


def round_form_density(
    two_form: TwoFormDensity, chart: StereographicChart
) -> Callable[[SpherePoint], float]:
    """Unsigned density of a chart two-form relative to the round area element."""

    def density(p: SpherePoint) -> float:
        c = chart.to_chart(p)
        return abs(two_form.density(c)) * chart.area_scale_to_chart(c)

    return density


def _membership_fn(region) -> Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]:
    """Vectorized membership on ambient coordinate arrays."""
    vec = getattr(region, "contains_xyz", None)
    if vec is not None:
        return vec
    scalar = getattr(region, "contains", region)

    def fallback(x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        out = np.empty(x.shape, dtype=bool)
        for i in range(x.size):
            out.flat[i] = bool(
                scalar(SpherePoint.normalized(x.flat[i], y.flat[i], z.flat[i]))
            )
        return out

    return fallback


def _scalar_membership(region) -> Callable[[float, float], bool]:
    member = _membership_fn(region)

    def at_angles(theta1: float, theta2: float) -> bool:
        s = math.sin(theta1)
        x = np.array([s * math.cos(theta2)])
        y = np.array([s * math.sin(theta2)])
        z = np.array([math.cos(theta1)])
        return bool(member(x, y, z)[0])

    return at_angles


def _gauss_integral(density: Callable[[SpherePoint], float], theta1: float, a: float, b: float) -> float:
    """Gauss-Legendre integral of the density along a polar-circle arc."""
    if b <= a:
        return 0.0
    mid, half = 0.5 * (a + b), 0.5 * (b - a)
    total = 0.0
    for t, w in zip(_gauss_nodes, _gauss_weights):
        theta2 = mid + half * t
        total += w * density(SpherePoint.from_angles(theta1, theta2))
    return total * half


def _refine_crossing(member, theta1: float, lo: float, hi: float) -> float:
    """Bisect a membership sign change in azimuth down to _BISECT_TOL."""
    inside_lo = member(theta1, lo)
    while hi - lo > _BISECT_TOL:
        mid = 0.5 * (lo + hi)
        if member(theta1, mid) == inside_lo:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def _circle_profile(region, density, theta1: float, scan: int) -> float:
    """sin(theta1) times the density integral over member azimuths at theta1."""
    member_vec = _membership_fn(region)
    grid = (np.arange(scan) + 0.5) * (2.0 * math.pi / scan)
    s, c = math.sin(theta1), math.cos(theta1)
    mask = member_vec(s * np.cos(grid), s * np.sin(grid), np.full(scan, c))
    if not mask.any():
        return 0.0
    if mask.all():
        return s * _gauss_integral(density, theta1, 0.0, 2.0 * math.pi)

    member = _scalar_membership(region)
    flips = np.nonzero(mask != np.roll(mask, -1))[0]
    crossings = sorted(
        _refine_crossing(member, theta1, grid[j], grid[(j + 1) % scan] + (2.0 * math.pi if j == scan - 1 else 0.0))
        % (2.0 * math.pi)
        for j in flips
    )
    # Between consecutive crossings membership is constant; classify by the
    # already-computed scan mask at a grid point in the gap (fall back to a
    # fresh midpoint test if no grid point lands inside).
    total = 0.0
    bounds = crossings + [crossings[0] + 2.0 * math.pi]
    for a, b in zip(bounds[:-1], bounds[1:]):
        inside = np.nonzero((grid > a) & (grid < b))[0]
        if inside.size:
            is_member = bool(mask[inside[0]])
        else:
            is_member = member(theta1, 0.5 * (a + b) % (2.0 * math.pi))
        if is_member:
            total += _gauss_integral(density, theta1, a, b)
    return s * total


def _cap_quadrature(region, density, target: float) -> QuadratureResult:
    """Tensor Gauss-Legendre over the cap rectangle in the cap's own frame."""
    center, radius = region.cap_frame()
    # Orthonormal tangent frame at the cap center.
    seed = np.array([1.0, 0.0, 0.0])
    if abs(center @ seed) > 0.9:
        seed = np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ center) * center
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(center, e1)

    def tensor_value(n_t: int, n_p: int) -> float:
        t_nodes, t_weights = np.polynomial.legendre.leggauss(n_t)
        p_nodes, p_weights = np.polynomial.legendre.leggauss(n_p)
        t = 0.5 * radius * (t_nodes + 1.0)
        phi = math.pi * (p_nodes + 1.0)
        total = 0.0
        for ti, wi in zip(t, t_weights):
            ring = math.sin(ti)
            base = math.cos(ti) * center
            row = 0.0
            for pj, wj in zip(phi, p_weights):
                q = base + ring * (math.cos(pj) * e1 + math.sin(pj) * e2)
                row += wj * density(SpherePoint.from_array(q))
            total += wi * ring * row
        return total * (0.5 * radius) * math.pi

    coarse = tensor_value(16, 32)
    fine = tensor_value(32, 64)
    err = abs(fine - coarse)
    if err > target:
        finer = tensor_value(64, 128)
        err = abs(finer - fine)
        fine = finer
    if err > target:
        raise QuadratureError(f"cap quadrature stalled at estimated error {err:.3e}")
    return QuadratureResult(fine, max(err, 1e-15))


def area_quadrature(
    region,
    density: Callable[[SpherePoint], float],
    target: float = DEFAULT_TARGET,
    scan: int = _AZIMUTH_SCAN,
) -> QuadratureResult:
    """Integral of a round-form density over a sphere region.

    ``region`` is anything with a ``contains(SpherePoint) -> bool`` method
    (or a bare callable); geodesic caps exposing ``cap_frame()`` use a
    closed-rectangle rule.  Raises :class:`QuadratureError` when the error
    estimate misses ``target``.
    """
    if hasattr(region, "cap_frame"):
        return _cap_quadrature(region, density, target)

    def profile(theta1: float) -> float:
        return _circle_profile(region, density, theta1, scan)

    points = None
    breakpoints = getattr(region, "polar_breakpoints", None)
    if breakpoints is not None:
        points = [t for t in breakpoints() if 0.0 < t < math.pi]

    value, estimate = integrate.quad(
        profile, 0.0, math.pi, epsabs=0.25 * target, epsrel=1e-12, limit=400, points=points
    )
    estimate += 1e-10  # crossing-refinement and scan floor
    if estimate > target:
        raise QuadratureError(f"quadrature error estimate {estimate:.3e} exceeds target {target:.3e}")
    return QuadratureResult(value, estimate)


class _ConstantRegion:
    def __init__(self, value: bool):
        self._value = value

    def contains(self, p: SpherePoint) -> bool:
        return self._value

    def contains_xyz(self, x: np.ndarray, y: np.ndarray, z: np.ndarray) -> np.ndarray:
        return np.full(x.shape, self._value, dtype=bool)


whole_sphere = _ConstantRegion(True)
empty_region = _ConstantRegion(False)

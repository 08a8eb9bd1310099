"""Conformal gradient fields, the expansion identity, and Morse data.

For a potential f with two-form density lam = f_uu + f_vv > 0, the gradient
with respect to the conformal metric lam*(du^2 + dv^2) is

    X = (f_u / lam, f_v / lam),

and the contraction of the two-form along X is f_u dv - f_v du, whose
exterior derivative returns the two-form exactly.  The residual routine
therefore measures pure finite-difference error for gradient fields and a
genuine defect for anything else.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DegeneracyError
from .sphere import (
    ChartPoint,
    OneFormField,
    PotentialField,
    SpherePoint,
    StereographicChart,
    fd_exterior_derivative,
)

GRADIENT_TOL = 1e-12
MAX_ITERATIONS = 100
MAX_HALVINGS = 30
DEDUP_TOL = 1e-6
NONDEGENERATE_TOL = 1e-8
ESCAPE_RADIUS = 1e6


@dataclass(frozen=True)
class LiouvilleField:
    """Conformal gradient of a potential; expands its own two-form."""

    potential: PotentialField

    def density(self, c: ChartPoint) -> float:
        h = self.potential.hessian(c)
        return float(h[0, 0] + h[1, 1])

    def components(self, c: ChartPoint) -> tuple[float, float]:
        lam = self.density(c)
        if lam <= 0.0:
            raise DegeneracyError(f"two-form density {lam:.3e} <= 0 at ({c.u}, {c.v})")
        gu, gv = self.potential.gradient(c)
        return gu / lam, gv / lam


def liouville_field(f: PotentialField) -> LiouvilleField:
    return LiouvilleField(f)


def contraction_one_form(
    f: PotentialField, vector_field: Callable[[ChartPoint], tuple[float, float]] | None = None
) -> OneFormField:
    """iota_X omega_f.  For the conformal gradient the density cancels and the
    form is exactly f_u dv - f_v du; for a supplied field X it is
    lam * (X_u dv - X_v du)."""
    if vector_field is None:

        def components(c: ChartPoint) -> tuple[float, float]:
            gu, gv = f.gradient(c)
            return -gv, gu

    else:

        def components(c: ChartPoint) -> tuple[float, float]:
            h = f.hessian(c)
            lam = float(h[0, 0] + h[1, 1])
            xu, xv = vector_field(c)
            return -lam * xv, lam * xu

    return OneFormField(components)


def liouville_residual(
    f: PotentialField,
    p: ChartPoint,
    step: float,
    vector_field: Callable[[ChartPoint], tuple[float, float]] | None = None,
) -> float:
    """|d(iota_X omega) - omega| at p, as an absolute density difference."""
    eta = contraction_one_form(f, vector_field)
    d_eta = fd_exterior_derivative(eta, p, step)
    h = f.hessian(p)
    return abs(d_eta - float(h[0, 0] + h[1, 1]))


@dataclass(frozen=True)
class CriticalPoint:
    """A nondegenerate zero of the gradient with its Morse index."""

    location: ChartPoint
    index: int
    hessian_eigenvalues: tuple[float, float]
    gradient_norm: float
    sphere_location: SpherePoint | None = None


@dataclass(frozen=True)
class SeedOutcome:
    seed: ChartPoint
    converged: bool
    reason: str
    iterations: int
    location: ChartPoint | None = None


def _newton_from_seed(
    f: PotentialField, seed: ChartPoint, escape_radius: float
) -> SeedOutcome:
    x = seed.as_array().astype(float)
    g = np.array(f.gradient(ChartPoint(*x)))
    gnorm = float(np.linalg.norm(g))
    for it in range(MAX_ITERATIONS):
        if gnorm < GRADIENT_TOL:
            return SeedOutcome(seed, True, "converged", it, ChartPoint(*x))
        if float(np.linalg.norm(x)) > escape_radius:
            return SeedOutcome(seed, False, "escaped the working chart", it)
        h = f.hessian(ChartPoint(*x))
        try:
            delta = np.linalg.solve(h, -g)
        except np.linalg.LinAlgError:
            return SeedOutcome(seed, False, "singular Hessian", it)
        accepted = False
        for _ in range(MAX_HALVINGS + 1):
            x_new = x + delta
            g_new = np.array(f.gradient(ChartPoint(*x_new)))
            gnorm_new = float(np.linalg.norm(g_new))
            if gnorm_new < gnorm:
                x, g, gnorm = x_new, g_new, gnorm_new
                accepted = True
                break
            delta = 0.5 * delta
        if not accepted:
            return SeedOutcome(seed, False, "damping stalled", it)
    if gnorm < GRADIENT_TOL:
        return SeedOutcome(seed, True, "converged", MAX_ITERATIONS, ChartPoint(*x))
    return SeedOutcome(seed, False, "iteration budget exhausted", MAX_ITERATIONS)


def find_critical_points(
    f: PotentialField,
    seeds: list[ChartPoint],
    chart: StereographicChart | None = None,
    escape_radius: float = ESCAPE_RADIUS,
) -> tuple[list[CriticalPoint], list[SeedOutcome]]:
    """Damped Newton on the gradient from every seed, deduplicated.

    Converged points whose Hessian has an eigenvalue within
    NONDEGENERATE_TOL of zero are reported per-seed as degenerate and not
    returned as critical points.
    """
    outcomes: list[SeedOutcome] = []
    found: list[CriticalPoint] = []
    for seed in seeds:
        out = _newton_from_seed(f, seed, escape_radius)
        if out.converged and out.location is not None:
            eigs = np.linalg.eigvalsh(f.hessian(out.location))
            if float(np.min(np.abs(eigs))) < NONDEGENERATE_TOL:
                out = SeedOutcome(
                    seed, False, "converged to a degenerate point", out.iterations, out.location
                )
            else:
                duplicate = any(
                    math.hypot(
                        cp.location.u - out.location.u, cp.location.v - out.location.v
                    )
                    < DEDUP_TOL
                    for cp in found
                )
                if not duplicate:
                    gnorm = float(np.linalg.norm(f.gradient(out.location)))
                    found.append(
                        CriticalPoint(
                            location=out.location,
                            index=int(np.sum(eigs < 0.0)),
                            hessian_eigenvalues=(float(eigs[0]), float(eigs[1])),
                            gradient_norm=gnorm,
                            sphere_location=(
                                chart.to_sphere(out.location) if chart is not None else None
                            ),
                        )
                    )
        outcomes.append(out)
    return found, outcomes

"""Weinstein-structure audit for the sphere-product trisection.

Each trisection piece is a product of a cap-punctured first sphere and a
sector of the second sphere.  Both factors carry the round-form potential in
a stereographic chart whose projection point is the puncture, so the single
critical point is the antipode of that pole.  The audit checks, by finite
samples: the expansion identity of the conformal gradient field, the Morse
data, the prescribed region memberships, and the outward sign of the product
field along every stratum of the piece boundary.

The second-factor potential has two variants.  The literal one projects from
the north pole, placing the critical point on the vertex shared by all three
sectors and making the field tangent to every sector boundary; the audit
surfaces that as a flagged degeneracy rather than a failure.  The corrected
variant projects from an equatorial point interior to the preceding sector,
which restores a strict outward sign.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .combinatorics import (
    build_surface_decomposition,
    build_trisection_data,
    stabilize,
    validate_trisection,
)
from .config import RunConfig
from .errors import ConfigurationError
from .liouville import LiouvilleField, find_critical_points, liouville_residual
from .quadrature import area_quadrature, round_form_density, whole_sphere
from .regions import (
    CAP_ROTATION_ANGLE,
    SECTOR_ROTATION_ANGLE,
    CapRegion,
    ComplementRegion,
    SectorRegion,
    default_cap_region,
    default_marked_points,
    default_sector_region,
    expected_membership_ledger,
    interior_samples,
    membership_ledger,
    sample_boundary,
    uniform_sphere_samples,
)
from .report import (
    FAIL,
    FLAGGED,
    PLUMBING,
    TOOL_VERSION,
    CheckEntry,
    VerificationReport,
    entry,
    skipped,
)
from .sphere import (
    ChartPoint,
    PotentialField,
    SpherePoint,
    StereographicChart,
    d_complex,
    fd_exterior_derivative,
    fubini_study_potential,
    omega_from_potential,
    rotate_y,
    rotate_z,
    rotation_matrix_y,
)

TANGENCY_TOL = 1e-9

PAPER_LITERAL = "paper-literal"
CORRECTED = "corrected"


def _next(i: int) -> int:
    return i % 3 + 1


@dataclass(frozen=True)
class StepConfig:
    """One factor's chart, potential, and expected critical point."""

    index: int
    factor: str  # "cap-factor" or "sector-factor"
    mode: str
    chart: StereographicChart
    potential: PotentialField
    expected_minimum: SpherePoint

    def field_ambient(self, p: SpherePoint) -> np.ndarray:
        """The conformal gradient field pushed to ambient coordinates at p."""
        c = self.chart.to_chart(p)
        xu, xv = LiouvilleField(self.potential).components(c)
        return self.chart.push_tangent(c, xu, xv)


def configure_step1(radius: float) -> dict[int, StepConfig]:
    """First-factor configuration: chart poles at the cap marked points.

    The potential for piece i projects from the marked point inside cap i,
    so its critical point is the antipodal marked point, which must land in
    cap i+1.  Raises when a containment fails for the given radius.
    """
    marked = default_marked_points()
    caps = {i: default_cap_region(i, radius) for i in (1, 2, 3)}
    for i in (1, 2, 3):
        j = _next(i)
        if caps[i].center.angle_to(caps[j].center) <= 2.0 * radius:
            raise ConfigurationError(
                f"caps {i} and {j} are not disjoint at radius {radius:.6f}"
            )
    configs = {}
    for i in (1, 2, 3):
        pole = marked.p(i)
        minimum = pole.antipode()
        if not caps[i].contains(pole):
            raise ConfigurationError(f"chart pole of piece {i} is not inside cap {i}")
        if not caps[_next(i)].contains(minimum):
            raise ConfigurationError(
                f"critical point of piece {i} is not inside cap {_next(i)} "
                f"at radius {radius:.6f}"
            )
        configs[i] = StepConfig(
            index=i,
            factor="cap-factor",
            mode="cap-punctured",
            chart=StereographicChart(pole),
            potential=fubini_study_potential(),
            expected_minimum=minimum,
        )
    return configs


def configure_step2(mode: str) -> dict[int, StepConfig]:
    """Second-factor configuration in either variant.

    paper-literal: every piece uses the north-pole chart; the critical point
    is the south pole, a vertex of the sector decomposition.  corrected: the
    chart pole for piece i sits at an equatorial interior point of sector
    i+2, so the critical point lands in the interior of sector i.
    """
    if mode not in (PAPER_LITERAL, CORRECTED):
        raise ValueError(f"unknown second-factor mode {mode!r}")
    configs = {}
    for i in (1, 2, 3):
        if mode == PAPER_LITERAL:
            pole = SpherePoint(0.0, 0.0, 1.0)
        else:
            pole = SpherePoint.from_angles(math.pi / 2.0, 7.0 * math.pi / 4.0)
            for _ in range(i - 1):
                pole = rotate_z(SECTOR_ROTATION_ANGLE, pole)
        configs[i] = StepConfig(
            index=i,
            factor="sector-factor",
            mode=mode,
            chart=StereographicChart(pole),
            potential=fubini_study_potential(),
            expected_minimum=pole.antipode(),
        )
    return configs


@dataclass(frozen=True)
class StratumSpec:
    """One smooth boundary stratum of a trisection piece.

    The stratum is the product of the boundary of ``boundary_region`` (in
    one factor) with ``partner_region`` (in the other).  ``flip_normal``
    marks strata bounding the complement of the region, where the outward
    direction reverses.  ``keep_arcs`` drops boundary components lying in
    the corner set shared with the neighboring piece.
    """

    name: str
    boundary_factor: str
    boundary_region: CapRegion | SectorRegion
    flip_normal: bool
    partner_region: object
    keep_arcs: tuple[str, ...] | None = None
    excluded: str = ""


def stratum_decomposition(
    i: int,
    caps: dict[int, CapRegion] | None = None,
    sectors: dict[int, SectorRegion] | None = None,
    radius: float = math.pi / 4.0,
) -> list[StratumSpec]:
    """The four boundary strata of piece i, with the corner set removed.

    Piece i is (sphere minus cap i) x sector i glued to cap i+1 x sector
    i+1; the corner cap i+1 x (sector i meet sector i+1) is interior to the
    piece and must never be sampled.
    """
    if caps is None:
        caps = {k: default_cap_region(k, radius) for k in (1, 2, 3)}
    if sectors is None:
        sectors = {k: default_sector_region(k) for k in (1, 2, 3)}
    j = _next(i)
    corner = f"cap-{j} x (sector-{i} meet sector-{j} meridian)"
    return [
        StratumSpec(
            name=f"bdry(complement cap-{i}) x sector-{i}",
            boundary_factor="cap-factor",
            boundary_region=caps[i],
            flip_normal=True,
            partner_region=sectors[i],
        ),
        StratumSpec(
            name=f"(complement cap-{i}) x bdry sector-{i}",
            boundary_factor="sector-factor",
            boundary_region=sectors[i],
            flip_normal=False,
            partner_region=ComplementRegion(caps[i]),
        ),
        StratumSpec(
            name=f"bdry cap-{j} x sector-{j}",
            boundary_factor="cap-factor",
            boundary_region=caps[j],
            flip_normal=False,
            partner_region=sectors[j],
        ),
        StratumSpec(
            name=f"cap-{j} x bdry sector-{j} minus corner",
            boundary_factor="sector-factor",
            boundary_region=sectors[j],
            flip_normal=False,
            partner_region=caps[j],
            keep_arcs=("end",),
            excluded=corner,
        ),
    ]


def product_field(
    cap_cfg: StepConfig, sector_cfg: StepConfig, p1: SpherePoint, p2: SpherePoint
) -> np.ndarray:
    """Product Liouville field at (p1, p2): the direct sum of the factor fields."""
    return np.concatenate([cap_cfg.field_ambient(p1), sector_cfg.field_ambient(p2)])


@dataclass(frozen=True)
class StratumResult:
    name: str
    boundary_samples: int
    partner_samples: int
    min_signed: float
    max_abs: float
    argmin_boundary: tuple[float, float, float]
    argmin_partner: tuple[float, float, float]
    passes: bool


@dataclass(frozen=True)
class TransversalityReport:
    piece: int
    mode: str
    threshold: float
    strata: tuple[StratumResult, ...]

    @property
    def passes(self) -> bool:
        return all(s.passes for s in self.strata)


def check_transversality(
    i: int,
    cap_cfg: StepConfig,
    sector_cfg: StepConfig,
    samples_per_stratum: int,
    threshold: float,
    rng: np.random.Generator,
    partner_count: int = 4,
    radius: float = math.pi / 4.0,
) -> TransversalityReport:
    """Signed outwardness of the product field over every stratum of piece i.

    Boundary samples come from the factor carrying the boundary; each is
    paired with interior samples of the partner factor, and the component
    of the product field along the outward normal (which lies entirely in
    the boundary factor) is recorded.
    """
    if samples_per_stratum < 1:
        raise ValueError("need at least one sample per stratum")
    results = []
    for spec in stratum_decomposition(i, radius=radius):
        samples = sample_boundary(spec.boundary_region, samples_per_stratum)
        if spec.keep_arcs is not None:
            samples = [s for s in samples if s.arc in spec.keep_arcs]
        if not samples:
            raise ConfigurationError(f"stratum {spec.name} produced no boundary samples")
        partners = interior_samples(spec.partner_region, partner_count, rng)
        sign = -1.0 if spec.flip_normal else 1.0
        min_signed = math.inf
        max_abs = 0.0
        argmin = (samples[0].point, partners[0])
        for bs in samples:
            normal = sign * bs.outward_normal
            for partner in partners:
                if spec.boundary_factor == "cap-factor":
                    vec = product_field(cap_cfg, sector_cfg, bs.point, partner)
                    outward = float(vec[:3] @ normal)
                else:
                    vec = product_field(cap_cfg, sector_cfg, partner, bs.point)
                    outward = float(vec[3:] @ normal)
                max_abs = max(max_abs, abs(outward))
                if outward < min_signed:
                    min_signed = outward
                    argmin = (bs.point, partner)
        results.append(
            StratumResult(
                name=spec.name,
                boundary_samples=len(samples),
                partner_samples=len(partners),
                min_signed=min_signed,
                max_abs=max_abs,
                argmin_boundary=(argmin[0].x, argmin[0].y, argmin[0].z),
                argmin_partner=(argmin[1].x, argmin[1].y, argmin[1].z),
                passes=min_signed > threshold,
            )
        )
    return TransversalityReport(
        piece=i, mode=sector_cfg.mode, threshold=threshold, strata=tuple(results)
    )


# ---------------------------------------------------------------------------
# full pipeline
# ---------------------------------------------------------------------------


def _disk_points(rng: np.random.Generator, n: int, radius: float) -> list[ChartPoint]:
    r = radius * np.sqrt(rng.uniform(size=n))
    phi = 2.0 * math.pi * rng.uniform(size=n)
    return [
        ChartPoint(float(ri * math.cos(pi)), float(ri * math.sin(pi)))
        for ri, pi in zip(r, phi)
    ]


def _tangent_frame(p: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    seed = np.array([1.0, 0.0, 0.0]) if abs(p[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = seed - (seed @ p) * p
    e1 /= np.linalg.norm(e1)
    return e1, np.cross(p, e1)


def rotation_pullback_deviation(
    density: Callable[[SpherePoint], float],
    rotation: np.ndarray,
    points: list[SpherePoint],
) -> float:
    """max |density(Rp) * area-distortion(R at p) - density(p)| over the points.

    The distortion comes from an orthonormal tangent frame, so the check
    verifies (not assumes) that the rotation preserves the round area.
    """
    worst = 0.0
    for p in points:
        a = p.as_array()
        e1, e2 = _tangent_frame(a)
        image = rotation @ a
        distortion = abs(float(np.cross(rotation @ e1, rotation @ e2) @ image))
        pulled = density(SpherePoint.from_array(image)) * distortion
        worst = max(worst, abs(pulled - density(p)))
    return worst


_NUMERICAL_SECTIONS = (
    ("identity", "chart calculus identities"),
    ("areas", "round-form area checks"),
    ("rotation", "rotation pullback checks"),
    ("regions", "region membership checks"),
    ("step1", "first-factor configuration"),
    ("step2", "second-factor configuration"),
    ("transversality", "boundary outwardness audit"),
)


def _guarded(report: VerificationReport, section: str, fn: Callable[[], None]) -> None:
    """Run a section; any fault becomes a failed entry instead of aborting."""
    try:
        fn()
    except Exception as exc:
        report.add(
            CheckEntry(
                f"{section}/fault",
                f"section aborted: {exc}",
                PLUMBING,
                FAIL,
                {"error": str(exc), "type": type(exc).__name__},
            )
        )


def full_verify(cfg: RunConfig) -> VerificationReport:
    """Run every check and aggregate one report.

    Combinatorial checks run for any genera; the numerical sections cover
    only the sphere-product case and are emitted as skipped otherwise.
    Section faults become failed entries; a report is always returned.
    """
    cfg.validate()
    rng = np.random.default_rng(cfg.seed)
    report = VerificationReport(version=TOOL_VERSION, config=cfg.echo())

    _guarded(report, "combinatorics", lambda: _combinatorial_section(report, cfg))

    if cfg.g != 0 or cfg.h != 0:
        for section, label in _NUMERICAL_SECTIONS:
            report.add(
                skipped(
                    f"{section}/out-of-scope",
                    f"{label} skipped",
                    PLUMBING,
                    "numerical audit covers only the sphere-product case (g=h=0)",
                )
            )
        return report

    state: dict = {}
    _guarded(report, "identity", lambda: _identity_section(report, cfg, rng))
    _guarded(report, "areas", lambda: _area_section(report, cfg, state))
    _guarded(report, "rotation", lambda: _rotation_section(report, cfg, rng, state))
    _guarded(report, "regions", lambda: _region_section(report, cfg, rng, state))
    _guarded(report, "step1", lambda: _step1_section(report, cfg, rng, state))
    _guarded(report, "step2", lambda: _step2_section(report, cfg, rng, state))
    _guarded(report, "transversality", lambda: _transversality_section(report, cfg, rng, state))
    return report


def _combinatorial_section(report: VerificationReport, cfg: RunConfig) -> None:
    tri = build_trisection_data(cfg.g, cfg.h)
    report.extend(validate_trisection(tri))
    moved = stabilize(tri.sector_decomposition)
    built = build_surface_decomposition(cfg.g + 1)
    report.add(
        entry(
            "decomposition/stabilization",
            "vertex connect-sum move reproduces the next-genus counts",
            "higher-genus decompositions arise by the vertex move",
            (
                moved.arcs_per_pair == built.arcs_per_pair
                and len(moved.vertices) == len(built.vertices)
                and moved.euler_characteristic == built.euler_characteristic
            ),
            {
                "moved": {
                    "arcs_per_pair": len(moved.arcs) // 3,
                    "vertices": len(moved.vertices),
                    "euler": moved.euler_characteristic,
                },
                "built": {
                    "arcs_per_pair": len(built.arcs) // 3,
                    "vertices": len(built.vertices),
                    "euler": built.euler_characteristic,
                },
            },
        )
    )


def _identity_section(report: VerificationReport, cfg: RunConfig, rng: np.random.Generator) -> None:
    fs = fubini_study_potential()
    omega = omega_from_potential(fs)
    sweep = _disk_points(rng, cfg.sweep_samples, 10.0)

    densities = [omega.density(c) for c in sweep]
    report.add(
        entry(
            "identity/positivity",
            "two-form density of the round potential is positive on the chart",
            "the potential is J-convex: omega_f(v, Jv) > 0",
            min(densities) > 0.0,
            {"min_density": min(densities), "samples": len(sweep)},
        )
    )

    residual_tol = 100.0 * cfg.fd_step**2
    residuals = [liouville_residual(fs, c, cfg.fd_step) for c in sweep]
    report.add(
        entry(
            "identity/liouville-residual",
            f"expansion residual |d(iota_X omega) - omega| stays below {residual_tol:.1e}",
            "the conformal gradient satisfies d(iota_X omega) = omega",
            max(residuals) < residual_tol,
            {
                "max_residual": max(residuals),
                "tolerance": residual_tol,
                "samples": len(residuals),
            },
        )
    )

    probe = ChartPoint(0.5, 0.5)
    base = LiouvilleField(fs)

    def perturbed(c: ChartPoint) -> tuple[float, float]:
        xu, xv = base.components(c)
        return xu + 0.1, xv

    detector = liouville_residual(fs, probe, cfg.fd_step, vector_field=perturbed)
    report.add(
        entry(
            "identity/residual-detector",
            "a deliberately perturbed field is detected (residual above 1e-3)",
            PLUMBING,
            detector > 1e-3,
            {"perturbed_residual": detector, "probe": [probe.u, probe.v]},
        )
    )

    dcf = d_complex(fs)
    exactness = max(
        abs(fd_exterior_derivative(dcf, c, cfg.fd_step) + omega.density(c))
        for c in sweep[:200]
    )
    report.add(
        entry(
            "identity/exactness",
            "d of the complex differential returns minus the two-form density",
            "omega_f = -d(df o J)",
            exactness < 1e-5,
            {"max_deviation": exactness, "samples": 200},
        )
    )

    fd_version = PotentialField.from_scalar(fs.evaluate, cfg.fd_step)
    agree_tol = 10.0 * cfg.fd_step**2
    grad_dev = max(
        max(abs(a - b) for a, b in zip(fs.gradient(c), fd_version.gradient(c)))
        for c in sweep[:200]
    )
    hess_dev = max(
        float(np.max(np.abs(fs.hessian(c) - fd_version.hessian(c)))) for c in sweep[:200]
    )
    report.add(
        entry(
            "identity/derivative-agreement",
            "analytic derivatives agree with centered finite differences",
            PLUMBING,
            grad_dev < agree_tol and hess_dev < agree_tol,
            {"max_gradient_dev": grad_dev, "max_hessian_dev": hess_dev, "tolerance": agree_tol},
        )
    )

    worst_roundtrip = 0.0
    for pole in uniform_sphere_samples(10, rng):
        chart = StereographicChart(pole)
        for p in uniform_sphere_samples(100, rng):
            if pole.angle_to(p) < 1e-6:
                continue
            q = chart.to_sphere(chart.to_chart(p))
            worst_roundtrip = max(
                worst_roundtrip, float(np.linalg.norm(q.as_array() - p.as_array()))
            )
    report.add(
        entry(
            "identity/chart-roundtrip",
            "stereographic projection round-trips points through the chart",
            PLUMBING,
            worst_roundtrip < 1e-12,
            {"max_error": worst_roundtrip, "poles": 10, "points_per_pole": 100},
        )
    )


def _area_section(report: VerificationReport, cfg: RunConfig, state: dict) -> None:
    fs = fubini_study_potential()
    north_chart = StereographicChart(SpherePoint(0.0, 0.0, 1.0))
    round_density = round_form_density(omega_from_potential(fs), north_chart)
    state["round_density"] = round_density
    state["north_chart"] = north_chart

    whole = area_quadrature(whole_sphere, round_density, cfg.quadrature_target)
    report.add(
        entry(
            "areas/whole-sphere",
            "round-form area of the whole sphere equals 4*pi",
            "the potential's two-form is the round area form (total 4*pi)",
            abs(whole.value - 4.0 * math.pi) < 1e-6,
            {"value": whole.value, "expected": 4.0 * math.pi, "estimate": whole.error_estimate},
        )
    )

    sectors = {i: default_sector_region(i) for i in (1, 2, 3)}
    state["sectors"] = sectors
    sector_areas = {}
    for i in (1, 2, 3):
        res = area_quadrature(sectors[i], round_density, cfg.quadrature_target)
        sector_areas[i] = res.value
        report.add(
            entry(
                f"areas/sector-{i}",
                f"sector {i} has round-form area 4*pi/3",
                "the three sectors have identical area",
                abs(res.value - 4.0 * math.pi / 3.0) < 1e-6,
                {
                    "value": res.value,
                    "expected": 4.0 * math.pi / 3.0,
                    "estimate": res.error_estimate,
                },
            )
        )
    spread = max(sector_areas.values()) - min(sector_areas.values())
    report.add(
        entry(
            "areas/sector-equality",
            "the three sector areas agree",
            "the three sectors have identical area",
            spread < 1e-6,
            {"spread": spread, "areas": {str(k): v for k, v in sector_areas.items()}},
        )
    )

    caps = {i: default_cap_region(i, cfg.cap_radius) for i in (1, 2, 3)}
    state["caps"] = caps
    cap_expected = 2.0 * math.pi * (1.0 - math.cos(cfg.cap_radius))
    cap_areas = {
        i: area_quadrature(caps[i], round_density, cfg.quadrature_target).value
        for i in (1, 2, 3)
    }
    cap_dev = max(abs(a - cap_expected) for a in cap_areas.values())
    report.add(
        entry(
            "areas/caps",
            "the three caps have equal area matching the closed form",
            "the marked disks are mutually symplectomorphic",
            cap_dev < 1e-6,
            {
                "areas": {str(k): v for k, v in cap_areas.items()},
                "closed_form": cap_expected,
                "max_deviation": cap_dev,
            },
        )
    )

    report.add(
        CheckEntry(
            "areas/sector-erratum",
            "literal third-sector interval spans only 4*pi/12, leaving an uncovered gap",
            "the three sectors have identical area",
            FLAGGED,
            {
                "literal_widths": [2.0 * math.pi / 3.0, 2.0 * math.pi / 3.0, math.pi / 3.0],
                "uncovered_azimuth": [0.0, math.pi / 3.0],
                "corrected_interval": [5.0 * math.pi / 3.0, 7.0 * math.pi / 3.0],
            },
        )
    )


def _rotation_section(
    report: VerificationReport, cfg: RunConfig, rng: np.random.Generator, state: dict
) -> None:
    round_density = state["round_density"]
    north_pole = state["north_chart"].pole
    points = uniform_sphere_samples(cfg.sweep_samples, rng)
    for alpha, label in ((2.0 * math.pi / 3.0, "2pi3"), (4.0 * math.pi / 3.0, "4pi3")):
        usable = [
            p
            for p in points
            if p.angle_to(north_pole) > 1e-3
            and rotate_y(alpha, p).angle_to(north_pole) > 1e-3
        ]
        dev = rotation_pullback_deviation(round_density, rotation_matrix_y(alpha), usable)
        report.add(
            entry(
                f"rotation/pullback-{label}",
                f"y-axis rotation by {label} preserves the round form",
                "the permuting rotations are symplectomorphisms",
                dev < 1e-9,
                {"max_deviation": dev, "samples": len(usable), "angle": alpha},
            )
        )


def _region_section(
    report: VerificationReport, cfg: RunConfig, rng: np.random.Generator, state: dict
) -> None:
    caps = state["caps"]
    sectors = state["sectors"]

    ledger = membership_ledger(default_marked_points(), caps)
    expected = expected_membership_ledger()
    report.add(
        entry(
            "regions/marked-point-ledger",
            "cap memberships of the six marked points match the prescription",
            "cap i contains exactly its own marked point and the preceding rotated one",
            ledger == expected,
            {
                "table": ledger,
                "mismatches": sorted(k for k in ledger if ledger[k] != expected[k]),
            },
        )
    )

    meridians = [math.pi / 3.0, math.pi, 5.0 * math.pi / 3.0]
    bad = 0
    tested = 0
    for p in uniform_sphere_samples(10000, rng):
        if abs(p.z) > 1.0 - 1e-9:
            continue
        theta2 = p.angles()[1]
        if min(abs(theta2 - m) for m in meridians) < 1e-9:
            continue
        tested += 1
        if sum(1 for s in sectors.values() if s.contains(p)) != 1:
            bad += 1
    report.add(
        entry(
            "regions/sector-tiling",
            "away from boundaries, each point lies in exactly one sector",
            "the three sectors tile the sphere",
            bad == 0,
            {"violations": bad, "tested": tested},
        )
    )

    counts_ok = True
    for meridian in meridians:
        probe_pt = SpherePoint.from_angles(math.pi / 2.0, meridian)
        statuses = sorted(sectors[i].classify(probe_pt) for i in (1, 2, 3))
        if statuses != ["boundary", "boundary", "exterior"]:
            counts_ok = False
    pole_probe = SpherePoint(0.0, 0.0, 1.0)
    counts_ok = counts_ok and all(
        sectors[i].classify(pole_probe) == "boundary" for i in (1, 2, 3)
    )
    report.add(
        entry(
            "regions/sector-counts",
            "sector tiling realizes the genus-0 counts: 3 faces, 1 arc per pair, 2 vertices",
            "the sphere decomposes into three sectors meeting along meridians",
            counts_ok,
            {"faces": 3, "arcs_per_pair": 1, "vertices": 2},
        )
    )


def _step1_section(
    report: VerificationReport, cfg: RunConfig, rng: np.random.Generator, state: dict
) -> None:
    caps = state["caps"]
    step1 = configure_step1(cfg.cap_radius)
    state["step1"] = step1
    for i in (1, 2, 3):
        c1 = step1[i]
        found, outcomes = find_critical_points(
            c1.potential, _disk_points(rng, 20, 1.0), chart=c1.chart
        )
        morse_ok = (
            len(found) == 1
            and found[0].index == 0
            and max(abs(e - 2.0) for e in found[0].hessian_eigenvalues) < 1e-6
            and found[0].sphere_location is not None
            and found[0].sphere_location.angle_to(c1.expected_minimum) < 1e-6
        )
        in_next_cap = caps[_next(i)].contains(c1.expected_minimum)
        payload = {
            "found": len(found),
            "converged_seeds": sum(1 for o in outcomes if o.converged),
            "minimum_in_next_cap": in_next_cap,
        }
        if found:
            payload.update(
                {
                    "index": found[0].index,
                    "eigenvalues": list(found[0].hessian_eigenvalues),
                    "gradient_norm": found[0].gradient_norm,
                }
            )
        report.add(
            entry(
                f"step1/piece-{i}",
                f"first-factor potential {i} has one index-0 critical point inside cap {_next(i)}",
                "the next cap is a neighborhood of the unique index-0 critical point",
                morse_ok and in_next_cap,
                payload,
            )
        )

    rot = rotation_matrix_y(CAP_ROTATION_ANGLE)
    equi_points = [
        p
        for p in uniform_sphere_samples(100, rng)
        if all(p.angle_to(step1[k].chart.pole) > 0.2 for k in (1, 2, 3))
        and all(
            rotate_y(CAP_ROTATION_ANGLE, p).angle_to(step1[k].chart.pole) > 0.2
            for k in (1, 2, 3)
        )
    ]
    equi_dev = 0.0
    for i in (1, 2, 3):
        for p in equi_points:
            lhs = step1[_next(i)].field_ambient(SpherePoint.from_array(rot @ p.as_array()))
            rhs = rot @ step1[i].field_ambient(p)
            equi_dev = max(equi_dev, float(np.max(np.abs(lhs - rhs))))
    report.add(
        entry(
            "step1/equivariance",
            "rotating a first-factor configuration gives the next one",
            "the cap potentials are related by the permuting rotation",
            equi_dev < 1e-10,
            {"max_deviation": equi_dev, "samples": len(equi_points)},
        )
    )


def _step2_section(
    report: VerificationReport, cfg: RunConfig, rng: np.random.Generator, state: dict
) -> None:
    sectors = state["sectors"]
    step2_by_mode = {mode: configure_step2(mode) for mode in cfg.step2_modes}
    state["step2_by_mode"] = step2_by_mode
    for mode, step2 in step2_by_mode.items():
        for i in (1, 2, 3):
            c2 = step2[i]
            found, _ = find_critical_points(
                c2.potential, _disk_points(rng, 20, 1.0), chart=c2.chart
            )
            morse_ok = (
                len(found) == 1
                and found[0].index == 0
                and found[0].sphere_location is not None
                and found[0].sphere_location.angle_to(c2.expected_minimum) < 1e-6
            )
            statuses = {str(k): sectors[k].classify(c2.expected_minimum) for k in (1, 2, 3)}
            if mode == PAPER_LITERAL:
                on_vertex = all(s == "boundary" for s in statuses.values())
                report.add(
                    entry(
                        f"step2/{mode}/piece-{i}",
                        "literal second-factor critical point sits on the decomposition vertex",
                        "the sector should be a neighborhood of the critical point",
                        morse_ok and not on_vertex,
                        {"morse_ok": morse_ok, "sector_status": statuses},
                        flag=True,
                    )
                )
            else:
                interior_ok = statuses[str(i)] == "interior"
                report.add(
                    entry(
                        f"step2/{mode}/piece-{i}",
                        f"corrected second-factor critical point lies interior to sector {i}",
                        "the sector is a neighborhood of the unique index-0 critical point",
                        morse_ok and interior_ok,
                        {"morse_ok": morse_ok, "sector_status": statuses},
                    )
                )
    report.add(
        CheckEntry(
            "step2/index-prose",
            "the construction yields one index-0 critical point; no index-2 point exists "
            "on the disk complement, though the prose asks for one in the next sector",
            "second-factor potential is Morse with a single critical point",
            FLAGGED,
            {"critical_points": 1, "indices_present": [0], "prose_requires": [0, 2]},
        )
    )


def _transversality_section(
    report: VerificationReport, cfg: RunConfig, rng: np.random.Generator, state: dict
) -> None:
    step1 = state["step1"]
    for mode, step2 in state["step2_by_mode"].items():
        for i in (1, 2, 3):
            tr = check_transversality(
                i,
                step1[i],
                step2[i],
                cfg.samples_per_stratum,
                cfg.threshold,
                rng,
                partner_count=cfg.partner_samples,
                radius=cfg.cap_radius,
            )
            strata_payload = {
                s.name: {
                    "min_signed": s.min_signed,
                    "max_abs": s.max_abs,
                    "boundary_samples": s.boundary_samples,
                    "argmin_boundary": list(s.argmin_boundary),
                    "argmin_partner": list(s.argmin_partner),
                }
                for s in tr.strata
            }
            tangent = [s for s in tr.strata if s.max_abs < TANGENCY_TOL]
            failing = [
                s for s in tr.strata if not s.passes and s.max_abs >= TANGENCY_TOL
            ]
            if failing:
                ok, flag = False, False
                description = f"product field points inward somewhere on piece {i}"
            elif tangent:
                ok, flag = False, True
                description = (
                    f"product field is tangent to {len(tangent)} sector-boundary "
                    f"strata of piece {i}"
                )
            else:
                ok, flag = True, False
                description = f"product field points outward on every stratum of piece {i}"
            report.add(
                entry(
                    f"transversality/{mode}/piece-{i}",
                    description,
                    "the Liouville field exits every boundary stratum transversally",
                    ok,
                    {"strata": strata_payload, "threshold": tr.threshold},
                    flag=flag,
                )
            )

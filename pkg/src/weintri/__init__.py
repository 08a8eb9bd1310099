"""Trisection combinatorics for surface products and a numerical audit of
the explicit Weinstein structure on the product of two spheres."""

from .combinatorics import (
    SurfaceDecomposition,
    TrisectionData,
    build_surface_decomposition,
    build_trisection_data,
    stabilize,
    validate_decomposition,
    validate_trisection,
)
from .config import RunConfig
from .liouville import (
    CriticalPoint,
    LiouvilleField,
    find_critical_points,
    liouville_field,
    liouville_residual,
)
from .quadrature import area_quadrature, round_form_density
from .regions import (
    CapRegion,
    MarkedPoints,
    SectorRegion,
    default_cap_region,
    default_marked_points,
    default_sector_region,
    sample_boundary,
)
from .report import TOOL_VERSION, CheckEntry, VerificationReport
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
)
from .verify import (
    StepConfig,
    StratumSpec,
    TransversalityReport,
    check_transversality,
    configure_step1,
    configure_step2,
    full_verify,
    stratum_decomposition,
)

__version__ = TOOL_VERSION

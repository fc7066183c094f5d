"""ratdyn: exact and floating-point analysis of the rational difference
equations x(n+1) = q/(p + x(n)**nu) and y(n+1) = q/(-p + y(n)**nu).

The package keeps two numeric planes everywhere: exact rationals
(fractions.Fraction) wherever a statement is an identity, and IEEE floats
for limits and roots that are irrational in general.
"""

from .analysis import (
    Bracket,
    EquilibriumReport,
    PeriodTwoCycle,
    Stability,
    classify_stability,
    equilibria,
    linear_stability_criterion,
    smallest_even_cycle_exponent,
    solve_period_two,
)
from .closed_form import (
    ForbiddenPoint,
    ProductAnalysis,
    Regime,
    RootChoice,
    asymptotic_limit,
    conjugate_orbit_check,
    docagne_product,
    excluded_points,
    fixed_solution,
    forbidden_depth,
    forbidden_points,
    johnson_product,
    near_excluded_point,
    product_analysis,
    product_closed_form,
    reconstruct_horadam,
    solve_closed_form,
)
from .dynamics import (
    BoundsEnvelope,
    Orbit,
    OscillationProfile,
    PeriodDetection,
    Plane,
    Side,
    StatusKind,
    bounds_envelope,
    detect_period,
    iterate,
    oscillation_profile,
    reflected_bounds,
    step,
)
from .equation import Branch, EquationSpec
from .horadam import (
    HoradamSpec,
    IdentityKind,
    QuadraticElement,
    QuadraticRoots,
    binet_roots,
    check_identity,
    horadam_at,
    horadam_range,
    phi_power,
    ratio_estimate,
)

__version__ = "0.1.0"

__all__ = [
    "Branch",
    "Bracket",
    "BoundsEnvelope",
    "EquationSpec",
    "EquilibriumReport",
    "ForbiddenPoint",
    "HoradamSpec",
    "IdentityKind",
    "Orbit",
    "OscillationProfile",
    "PeriodDetection",
    "PeriodTwoCycle",
    "Plane",
    "ProductAnalysis",
    "QuadraticElement",
    "QuadraticRoots",
    "Regime",
    "RootChoice",
    "Side",
    "Stability",
    "StatusKind",
    "asymptotic_limit",
    "binet_roots",
    "bounds_envelope",
    "check_identity",
    "classify_stability",
    "conjugate_orbit_check",
    "detect_period",
    "docagne_product",
    "equilibria",
    "excluded_points",
    "fixed_solution",
    "forbidden_depth",
    "forbidden_points",
    "horadam_at",
    "horadam_range",
    "iterate",
    "johnson_product",
    "linear_stability_criterion",
    "near_excluded_point",
    "oscillation_profile",
    "phi_power",
    "product_analysis",
    "product_closed_form",
    "ratio_estimate",
    "reconstruct_horadam",
    "reflected_bounds",
    "smallest_even_cycle_exponent",
    "solve_closed_form",
    "solve_period_two",
    "step",
]

"""Potential theory in the upper half-space.

Kernels (classical and modified), Poisson integrals and Green potentials,
maximal-function coverings of exceptional sets, growth-ratio scans, and
LP-discretized capacities with their dyadic thinness series.
"""

from .errors import (
    DimensionError,
    DomainError,
    HpotError,
    InfeasibleError,
    IntegrabilityError,
    NumericalError,
    SchemaError,
    SingularityError,
)
from .geometry import Ball, BoundaryPoint, Point, kelvin_distances, reflect, stable_norm
from .gegenbauer import (
    gegenbauer_at_one,
    gegenbauer_eval,
    generating_closed_form,
    generating_partial_sum,
)
from .kernels import (
    KernelConfig,
    fundamental,
    green,
    green_bound_report,
    modified_fundamental,
    modified_green,
    modified_poisson,
    poisson,
)
from .measures import (
    AtomicMeasure,
    BoundaryData,
    ConditionReport,
    check_boundary_condition,
    check_measure_condition,
)
from .potentials import (
    PotentialField,
    boundary_limit_probe,
    dirichlet_field,
    eval_dirichlet,
    eval_green_potential,
    eval_superposition,
    green_field,
)
from .exceptional import (
    CoveringResult,
    GrowthParams,
    MaximalQuery,
    exceptional_membership,
    growth_ratio,
    growth_scan,
    maximal_function,
    vitali_covering,
)
from .capacity import (
    CapacityProblem,
    LPInstance,
    ThinnessReport,
    capacity,
    lp_solve,
    thinness_series,
)
from .diagnostics import laplacian_residual

__version__ = "0.1.0"

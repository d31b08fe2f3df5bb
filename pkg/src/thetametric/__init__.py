"""theta-metric spaces: B-actions, inverse actions, finite-space topology and fixed points."""

__version__ = "0.1.0"

from ._backend import BACKEND
from .actions import (
    Action,
    AxiomReport,
    Sampler,
    action_from_generator,
    catalog,
    check_action_axioms,
    check_eta_properties,
    eta,
    eval_action,
    image_contains,
    make_action,
)
from .errors import (
    DomainError,
    ImageError,
    InputError,
    InvariantError,
    PreconditionError,
    StrictRangeError,
    ThetaMetricError,
)
from .fixedpoint import (
    CaristiData,
    MultiMap,
    PointOracle,
    SolveTrace,
    TableMap,
    banach_solve,
    caristi_fixed_point,
    caristi_order,
    check_gamma,
    check_psi,
    endpoint,
    estimate_contraction,
    minimal_elements,
    psi_from_phi,
)
from .fixtures import bundled_fixtures
from .spaces import (
    FiniteSpace,
    MetricReport,
    SequenceTrace,
    check_limit_behavior,
    is_cauchy,
    open_ball,
    openness_witness,
    separation_witness,
    uniformity_base_index,
    validate_plain_metric,
    validate_theta_metric,
)

"""Numerical laboratory for the Bures geometry of three-level quantum states.

The package parameterizes 3x3 density matrices by SU(3) Euler angles and two
spectral angles, assembles the Bures metric in closed form, differentiates it
to the full Riemann tensor, reads the curvature as a frame two-form, splits
that form under the Spin(7) duality operator, evaluates gauge-invariant wedge
invariants, and integrates them with deterministic Monte-Carlo or lattice
quadrature.  The ``bures`` console script exposes the validation suite,
pointwise evaluation, and table generation.
"""

from .errors import (
    BuresError,
    DegenerateSpectrum,
    DegreeMismatch,
    DegreeOverflow,
    NonFiniteInput,
    OutOfDomain,
    RetryExhausted,
    SingularMetric,
)
from .state_space import (
    COORD_NAMES,
    DOMAIN_BOUNDS,
    ZETA1_MAX,
    ZETA2_MAX,
    HermitianState,
    ParameterPoint,
    Spectrum,
    density,
    density_partials,
    euler_unitary,
    eigenvalues_from_spherical,
    gell_mann_basis,
    spectrum_from_spherical,
)
from .bures_metric import (
    CALIBRATION,
    ClosedFormEntries,
    MetricAtPoint,
    closed_form_AB,
    closed_form_entries,
    closed_form_volume,
    metric,
    metric_batch,
    volume_element,
)
from .curvature import (
    BLOCH_CHART,
    BURES_CHART,
    Chart,
    CurvatureTwoForm,
    FRAME_PAIRS,
    MetricJet,
    RiemannAtPoint,
    bloch_codazzi_residual,
    bloch_riemann,
    codazzi_residual,
    frame_curvature,
    frame_curvature_batch,
    metric_jet,
    riemann,
    scalar_curvature_closed_form,
)
from .spin7 import (
    DualityOperator,
    PAIR_INDEX,
    SET_A,
    SET_B,
    decompose,
    decompose_components,
    duality_flip,
    projectors,
    set_a_basis,
    set_a_residuals,
    set_b_residuals,
)
from .invariants import (
    INVARIANT_NAMES,
    InvariantRow,
    MatrixForm,
    ScalarForm,
    inner,
    invariant_row,
    invariant_entries_batch,
    sigma_invariants,
    trace_form_square,
    wedge,
)
from .quadrature import (
    ACTIVE_COORDS,
    ALPHA_FIXED,
    A_FIXED,
    Estimate,
    FIELD_NAMES,
    QuadratureSpec,
    TableRow,
    V8,
    admissible_point,
    integrate,
    invariant_table,
    lattice_points,
    sample_point,
    table_csv,
    ym_actions,
)
from .acceptance import CheckResult, run_all

__version__ = "0.1.0"

__all__ = [
    "BuresError",
    "DegenerateSpectrum",
    "DegreeMismatch",
    "DegreeOverflow",
    "NonFiniteInput",
    "OutOfDomain",
    "RetryExhausted",
    "SingularMetric",
    "COORD_NAMES",
    "DOMAIN_BOUNDS",
    "ZETA1_MAX",
    "ZETA2_MAX",
    "HermitianState",
    "ParameterPoint",
    "Spectrum",
    "density",
    "density_partials",
    "euler_unitary",
    "eigenvalues_from_spherical",
    "gell_mann_basis",
    "spectrum_from_spherical",
    "CALIBRATION",
    "ClosedFormEntries",
    "MetricAtPoint",
    "closed_form_AB",
    "closed_form_entries",
    "closed_form_volume",
    "metric",
    "metric_batch",
    "volume_element",
    "BLOCH_CHART",
    "BURES_CHART",
    "Chart",
    "CurvatureTwoForm",
    "FRAME_PAIRS",
    "MetricJet",
    "RiemannAtPoint",
    "bloch_codazzi_residual",
    "bloch_riemann",
    "codazzi_residual",
    "frame_curvature",
    "frame_curvature_batch",
    "metric_jet",
    "riemann",
    "scalar_curvature_closed_form",
    "DualityOperator",
    "PAIR_INDEX",
    "SET_A",
    "SET_B",
    "decompose",
    "decompose_components",
    "duality_flip",
    "projectors",
    "set_a_basis",
    "set_a_residuals",
    "set_b_residuals",
    "INVARIANT_NAMES",
    "InvariantRow",
    "MatrixForm",
    "ScalarForm",
    "inner",
    "invariant_row",
    "invariant_entries_batch",
    "sigma_invariants",
    "trace_form_square",
    "wedge",
    "ACTIVE_COORDS",
    "ALPHA_FIXED",
    "A_FIXED",
    "Estimate",
    "FIELD_NAMES",
    "QuadratureSpec",
    "TableRow",
    "V8",
    "admissible_point",
    "integrate",
    "invariant_table",
    "lattice_points",
    "sample_point",
    "table_csv",
    "ym_actions",
    "CheckResult",
    "run_all",
    "__version__",
]

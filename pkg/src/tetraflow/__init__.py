"""Zero-curvature hyper-ideal polyhedral metrics via combinatorial Ricci flow.

The library builds the edge-class structure of a glued tetrahedral complex,
evaluates extended dihedral angles and co-volume functionals, integrates the
extended combinatorial Ricci flow to a zero-curvature metric, and numerically
verifies the per-valence bound constants that certify the solution window.
"""

from .bounds import (
    BoundRow,
    BoundsTable,
    CheckResult,
    TABLE1,
    VerificationReport,
    b_n,
    beta,
    bounds_table,
    eta,
    f_xi,
    grid_monotonicity_suite,
    h1,
    h2,
    h3,
    h4,
    h_function,
    mu_n,
    psi,
    verify_table1,
    xi_infinity,
)
from .flow import (
    FlowConfig,
    FlowTrace,
    RateFit,
    convergence_rate,
    curvature,
    default_initial_metric,
    length_window,
    log_residual_fit,
    run_flow,
    tet_lengths,
)
from .functional import (
    COVOLUME_AT_ZERO,
    CovolumeResult,
    QuadratureError,
    angle_form_integral,
    covolume_tet,
    lobachevsky,
    total_H,
    volume_tet,
)
from .tetra import (
    AngleSet,
    HYPERIDEAL_LENGTH_BOUND,
    angle_cosine,
    dihedral_angles,
    extended_angles,
    is_hyperideal,
    oriented_angle_cosine,
    vertex_angle_sums,
)
from .triangulation import (
    EdgeOrientation,
    FaceGluing,
    LOCAL_EDGES,
    OPPOSITE_EDGE,
    Triangulation,
    TriangulationError,
    build_from_edge_labels,
    build_from_gluings,
    orientation_at,
    valence,
)

__version__ = "0.1.0"

"""Chern-connection curvature of Hermitian metrics in local holomorphic coordinates.

Metrics are written in a small text language (or built with the expression
helpers directly), differentiated exactly by Wirtinger calculus, and fed
through pointwise curvature kernels: the Chern curvature tensor, its four
Ricci traces, torsion, mixed curvature C_{alpha,beta}, conformal
transformation laws, and the surface-only identities.  A verification
battery re-derives the closed-form values of the built-in metrics and checks
every identity numerically; see the `chernkit` command line.
"""

from .catalog import CatalogEntry, ExpectedValue, builtin, names, sample_points
from .conformal import (
    chern_laplacian,
    conformal_constancy_residual,
    conformal_curvature_via_formula,
    conformal_metric,
    surface_scalar_relation_residual,
)
from .dsl import DslError, MetricSpec, parse_expression, parse_metric, print_metric
from .expr import EvaluationError, Expr, evaluate, fd_residual, to_source, wirtinger_diff
from .geometry import (
    ChernCurvature,
    RicciBundle,
    Torsion,
    chern_curvature,
    hermitian_symmetry_residual,
    holomorphic_sectional,
    kahler_defect,
    kahler_like_defect,
    orthonormal_frame,
    ricci_bundle,
    to_unitary_frame,
    torsion,
)
from .jets import FactorJet, MetricError, MetricJet, factor_jet, metric_jet, metric_jets
from .mixed import (
    ExtremumReport,
    MixedParams,
    constancy_tensor_residual,
    extremize,
    mixed_curvature,
    sphere_average_closed_form,
    sphere_average_monte_carlo,
    sphere_average_monte_carlo_many,
    trace_identity_residual,
)
from .surfaces import (
    OneOneForm,
    WeylMinus,
    c1_squared_pointwise_residual,
    form_inner,
    ricci_combination_residual,
    wedge_ratio,
    weyl_minus,
)

__version__ = "0.1.0"

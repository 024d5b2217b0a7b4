"""Constructive extension of isometries in weighted sequence spaces.

A distance-preserving map given on finitely many points of the truncated
space M_a is extended to a linear isometry of the span of those points and
then to an isometry of the whole space.
"""

from .errors import (
    BaseNotInSet,
    DimensionError,
    DuplicatePoint,
    InconsistentPairing,
    IsoextError,
    IsometryViolation,
    MalformedPairing,
    NotAxisAligned,
    NotOrthonormal,
    OutsideDomain,
    RadiusTooSmall,
)
from .space import (
    Weights,
    compensated_sum,
    dist,
    gram,
    inner,
    norm,
    translate,
    unit_basis,
)
from .pointset import (
    CubeReport,
    PairedSample,
    PointSet,
    ValidationReport,
    bounding_radius,
    cube_check,
    validate_isometry,
)
from .span import (
    AffineSpan,
    BasicCylinder,
    IndexSet,
    build_span,
    contains,
    cylinder_index_set,
    cylinder_span,
    gs_power,
    index_set_finite,
    index_set_span,
    project,
    same_subspace,
    subspace_residual,
)
from .extension import (
    SpanIsometry,
    build_extension,
    evaluate,
    evaluate_coordinate_formula,
    image_span,
)
from .completion import (
    DecompositionReport,
    GlobalIsometry,
    apply_global,
    build_axis_extension,
    build_global,
    complete_basis,
    decompose,
)

__version__ = "0.1.0"

"""Upward planar drawings: validation, embedding invariants and deformation equivalence."""

from .embedding import (
    EmbeddingSignature,
    Polarization,
    Rotation,
    check_bimodal,
    extract_polarization,
    extract_rotation,
    extract_rotation_system,
    polarization_to_rotation,
    rotation_to_polarization,
    signature,
    trace_faces,
)
from .equivalence import Verdict, equivalent, make_chain, perturb_step, verify_chain
from .errors import (
    CycleError,
    DomainError,
    InternalError,
    ParseError,
    PreconditionError,
    StructuralError,
    UpwardPlaneError,
)
from .extension import npp_extend, npp_extend_auto, polarization_via_npp, virtualize_drawing
from .geometry import (
    Drawing,
    PlaneBox,
    Point,
    min_clearance,
    mirror_x,
    scale_positive,
    translate,
    validate_drawing,
    validate_progressive,
)
from .graph import (
    DirectedAcyclicGraph,
    Edge,
    check_acyclic,
    classify_vertex,
    is_processive_graph,
    np_extend,
    virtualize_isolated,
)

__version__ = "0.1.0"

from .builders import (
    BUILTIN_NAMES,
    LENS_RANGE,
    build_lens,
    build_rp3,
    build_s3,
    build_s3_heegaard,
    builtin,
    heegaard_lens,
)
from .triangulation import (
    CycleError,
    DualCycle,
    NonManifoldError,
    OrientationError,
    ParseError,
    Triangulation,
    TriangulationError,
    ValidationError,
    load_triangulation,
    loads_triangulation,
    triangulation_from_json,
)

__all__ = [
    "BUILTIN_NAMES", "LENS_RANGE", "build_lens", "build_rp3", "build_s3", "build_s3_heegaard",
    "builtin", "heegaard_lens", "CycleError", "DualCycle", "NonManifoldError", "OrientationError",
    "ParseError", "Triangulation", "TriangulationError", "ValidationError", "load_triangulation",
    "loads_triangulation", "triangulation_from_json",
]

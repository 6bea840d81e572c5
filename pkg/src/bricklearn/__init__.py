"""bricklearn: learn brick construction plans from noisy demonstrations.

The pipeline watches a demonstration through a virtual top-down RGB-D
sensor, detects settled keyframes, extracts a ranked list of candidate brick
operations per step, verifies candidates against a clean shadow simulation,
and emits a machine-readable construction plan plus its reversed
disassembly plan.
"""

from .assembly import (
    DEFAULT_BOUNDS,
    Assembly,
    BrickPlacement,
    Feasibility,
    InfeasiblePlacement,
    build,
    footprint,
    placement_footprint,
)
from .catalog import DEFAULT_CATALOG, PALETTE, BrickCatalog, BrickType, UnknownBrickError
from .extraction import (
    CandidateTask,
    DeltaEstimate,
    ExtractionError,
    estimate_delta,
    position_likelihood,
    rank_candidates,
)
from .keyframes import FrameLabel, KeyframeError, classify_frame, sliding_filter
from .pipeline import (
    LearnReport,
    MetricsReport,
    PipelineConfig,
    STANDARD_NOISE,
    learn,
    run_metrics,
    standard_config,
)
from .plan import (
    ConstructionPlan,
    PlanFormatError,
    StructureCost,
    Task,
    assembly_plan,
    parse,
    replay,
    reverse_plan,
    serialize,
    structure_cost,
)
from .sensor import (
    DemonstrationTrace,
    NoiseConfig,
    ObservationFrame,
    ZERO_NOISE,
    corrupt,
    expand_demo,
    render_clean,
)
from .verification import (
    ShadowState,
    VerificationError,
    VerificationOutcome,
    similarity,
    verify_candidates,
)

__version__ = "0.1.0"

__all__ = [
    "Assembly",
    "BrickCatalog",
    "BrickPlacement",
    "BrickType",
    "CandidateTask",
    "ConstructionPlan",
    "DEFAULT_BOUNDS",
    "DEFAULT_CATALOG",
    "DeltaEstimate",
    "DemonstrationTrace",
    "ExtractionError",
    "Feasibility",
    "FrameLabel",
    "InfeasiblePlacement",
    "KeyframeError",
    "LearnReport",
    "MetricsReport",
    "NoiseConfig",
    "ObservationFrame",
    "PALETTE",
    "PipelineConfig",
    "PlanFormatError",
    "STANDARD_NOISE",
    "ShadowState",
    "StructureCost",
    "Task",
    "UnknownBrickError",
    "VerificationError",
    "VerificationOutcome",
    "ZERO_NOISE",
    "assembly_plan",
    "build",
    "classify_frame",
    "corrupt",
    "estimate_delta",
    "expand_demo",
    "footprint",
    "learn",
    "parse",
    "placement_footprint",
    "position_likelihood",
    "rank_candidates",
    "render_clean",
    "replay",
    "reverse_plan",
    "run_metrics",
    "serialize",
    "similarity",
    "sliding_filter",
    "standard_config",
    "structure_cost",
    "verify_candidates",
]

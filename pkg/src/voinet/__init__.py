"""Value-of-information scoring and dissemination simulation for vehicular networks."""

from .ahp import (
    ConsistencyReport,
    ValidationResult,
    WeightVector,
    consistency,
    principal_eigenvector,
    synthesize,
    validate,
)
from .errors import (
    ConfigError,
    ConvergenceError,
    DomainError,
    StructureError,
    TemporalOrderError,
    UnsupportedDimensionError,
    VoinetError,
)
from .model import (
    Application,
    ApplicationKind,
    Attribute,
    DecayProfile,
    Metadata,
    SourceKind,
    SpaceShape,
    VoiConfig,
    assess,
    effective_voi,
    instantiate_matrix,
    load_voi_config,
    safety_config,
    source_scores,
)
from .sim import (
    GeneratorSpec,
    Message,
    ScenarioConfig,
    SimMetrics,
    TransmissionRecord,
    generate,
    load_scenario,
    run,
    run_logged,
    schedule,
    step,
)

__version__ = "0.1.0"

__all__ = [
    "Application",
    "ApplicationKind",
    "Attribute",
    "ConfigError",
    "ConsistencyReport",
    "ConvergenceError",
    "DecayProfile",
    "DomainError",
    "GeneratorSpec",
    "Message",
    "Metadata",
    "ScenarioConfig",
    "SimMetrics",
    "SourceKind",
    "SpaceShape",
    "StructureError",
    "TemporalOrderError",
    "TransmissionRecord",
    "UnsupportedDimensionError",
    "ValidationResult",
    "VoiConfig",
    "VoinetError",
    "WeightVector",
    "assess",
    "consistency",
    "effective_voi",
    "generate",
    "instantiate_matrix",
    "load_scenario",
    "load_voi_config",
    "principal_eigenvector",
    "run",
    "run_logged",
    "safety_config",
    "schedule",
    "source_scores",
    "step",
    "synthesize",
    "validate",
    "__version__",
]

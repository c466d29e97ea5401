from schema.models import ALL_TARGETS, Backend, ExtremumKind, OutputFormat, TargetKind
from schema.schema import (
    AmplitudeEntry,
    BasisListing,
    BeamSplitterSpec,
    EvolveReport,
    Extremum,
    GridSpec,
    NetworkSpec,
    RunConfig,
    SweepResult,
    VerifyCheck,
    VerifyReport,
)

__all__ = [
    "ALL_TARGETS",
    "AmplitudeEntry",
    "Backend",
    "BasisListing",
    "BeamSplitterSpec",
    "EvolveReport",
    "Extremum",
    "ExtremumKind",
    "GridSpec",
    "NetworkSpec",
    "OutputFormat",
    "RunConfig",
    "SweepResult",
    "TargetKind",
    "VerifyCheck",
    "VerifyReport",
]

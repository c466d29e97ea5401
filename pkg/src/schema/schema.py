import math
from pathlib import Path
from typing import Self

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, computed_field, field_validator, model_validator

from schema.models import Backend, ExtremumKind, OutputFormat, TargetKind


class BeamSplitterSpec(BaseModel):
    """A two-mode beam splitter acting on modes `a < b` with angle `theta`."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    mode_a: int = Field(
        alias="a",
        ge=1,
        description="First mode, 1-based.",
        examples=[1],
    )
    mode_b: int = Field(
        alias="b",
        ge=1,
        description="Second mode, 1-based, greater than `a`.",
        examples=[2],
    )
    theta: float = Field(
        allow_inf_nan=False,
        description="Splitter angle in radians: transmission cos(theta), reflection i sin(theta).",
        examples=[0.7853981633974483],
    )

    @model_validator(mode="after")
    def _ordered_modes(self) -> Self:
        if not self.mode_a < self.mode_b:
            raise ValueError(f"Splitter modes must satisfy a < b, got ({self.mode_a}, {self.mode_b})")
        return self


class NetworkSpec(BaseModel):
    """Ordered list of splitters, applied first to last."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    m: int = Field(
        alias="modes",
        ge=1,
        description="Number of optical modes.",
        examples=[3],
    )
    splitters: tuple[BeamSplitterSpec, ...] = Field(
        default=(),
        description="Splitters in application order.",
    )

    @model_validator(mode="after")
    def _splitters_in_range(self) -> Self:
        for spec in self.splitters:
            if spec.mode_b > self.m:
                raise ValueError(
                    f"Splitter ({spec.mode_a}, {spec.mode_b}) exceeds the mode count {self.m}"
                )
        return self

    @classmethod
    def chain(cls, m: int, theta: float) -> "NetworkSpec":
        """Nearest-neighbour chain (1,2), (2,3), ..., (m-1,m) sharing one angle."""
        return cls(
            m=m,
            splitters=tuple(
                BeamSplitterSpec(mode_a=k, mode_b=k + 1, theta=theta) for k in range(1, m)
            ),
        )

    def with_theta(self, theta: float) -> "NetworkSpec":
        """Same topology with every splitter set to `theta`."""
        return NetworkSpec(
            m=self.m,
            splitters=tuple(s.model_copy(update={"theta": theta}) for s in self.splitters),
        )

    def is_chain(self) -> bool:
        pairs = [(s.mode_a, s.mode_b) for s in self.splitters]
        return pairs == [(k, k + 1) for k in range(1, self.m)]


class GridSpec(BaseModel):
    """Evenly spaced theta grid, endpoints included."""

    model_config = ConfigDict(frozen=True)

    lo: float = Field(allow_inf_nan=False, description="First grid point, radians.")
    hi: float = Field(allow_inf_nan=False, description="Last grid point, radians.")
    count: int = Field(ge=2, description="Number of grid points.", examples=[1001])

    @model_validator(mode="after")
    def _increasing(self) -> Self:
        if not self.hi > self.lo:
            raise ValueError(f"Grid upper bound {self.hi} must exceed lower bound {self.lo}")
        return self

    @classmethod
    def parse(cls, text: str, degrees: bool = False) -> "GridSpec":
        """Parse `lo:hi:count`."""
        parts = text.split(":")
        if len(parts) != 3:
            raise ValueError(f"Grid must look like lo:hi:count, got {text!r}")
        lo, hi = float(parts[0]), float(parts[1])
        if degrees:
            lo, hi = math.radians(lo), math.radians(hi)
        return cls(lo=lo, hi=hi, count=int(parts[2]))

    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.count)


class Extremum(BaseModel):
    """A refined local extremum of one probability column."""

    theta_star: float = Field(description="Location in radians.")
    value: float = Field(description="Probability at `theta_star`.")
    kind: ExtremumKind
    width: float = Field(description="Requested bracket width of the refinement, radians.")


class SweepResult(BaseModel):
    """Probability series of the target states over a theta grid."""

    m: int = Field(description="Number of modes.", examples=[3])
    n: int = Field(description="Number of photons.", examples=[2])
    keep: tuple[int, int] = Field(description="Kept output ports, 1-based.", examples=[(1, 2)])
    network_kind: str = Field(
        description="`chain` for the default nearest-neighbour chain, `custom` otherwise.",
        examples=["chain"],
    )
    network: NetworkSpec | None = Field(
        default=None,
        description="Topology swept with a shared angle; None means the default chain.",
    )
    backend: Backend = Field(description="Lifting backend used for the evolution.")
    noon_photons: int = Field(description="Photon number of the NOON targets.", examples=[2])
    grid: list[float] = Field(description="Theta values, radians, strictly increasing.")
    columns: dict[TargetKind, list[float]] = Field(
        description="Probability series per target, aligned with `grid`."
    )
    extrema: dict[TargetKind, list[Extremum]] = Field(
        default={},
        description="Refined extrema per target, when requested.",
    )

    @field_validator("grid")
    @classmethod
    def _strictly_increasing(cls, grid: list[float]) -> list[float]:
        if len(grid) < 2 or not all(b > a for a, b in zip(grid, grid[1:])):
            raise ValueError("Sweep grid must hold at least two strictly increasing points")
        return grid

    @model_validator(mode="after")
    def _columns_are_probabilities(self) -> Self:
        for kind, series in self.columns.items():
            if len(series) != len(self.grid):
                raise ValueError(f"Column {kind} has {len(series)} values for {len(self.grid)} points")
            if any(not 0.0 <= p <= 1.0 + 1e-10 for p in series):
                raise ValueError(f"Column {kind} holds values outside [0, 1]")
        return self

    @property
    def targets(self) -> list[TargetKind]:
        return list(self.columns)


class VerifyCheck(BaseModel):
    """Outcome of one cross-backend comparison."""

    name: str = Field(examples=["sequential_vs_permanent"])
    max_deviation: float = Field(description="Largest absolute deviation seen.")
    tolerance: float
    passed: bool


class VerifyReport(BaseModel):
    m: int
    n: int
    seed: int
    thetas: list[float] = Field(description="Random angles the checks ran at, radians.")
    checks: list[VerifyCheck]

    @computed_field  # type: ignore[prop-decorator]
    @property
    def passed(self) -> bool:
        return all(check.passed for check in self.checks)


class AmplitudeEntry(BaseModel):
    state: tuple[int, ...]
    real: float
    imag: float


class BasisListing(BaseModel):
    m: int
    n: int
    size: int
    states: list[tuple[int, ...]]
    hardcore: list[bool] = Field(description="Marks states with at most one photon per mode.")


class EvolveReport(BaseModel):
    """Single-angle evolution of a pure occupation vector or of the mixed input."""

    m: int
    n: int
    theta: float | None = Field(description="Shared angle, or None when the network file sets them.")
    backend: Backend
    input_state: tuple[int, ...] | None = Field(
        default=None, description="Evolved occupation vector; None for the mixed input."
    )
    amplitudes: list[AmplitudeEntry] = Field(default=[])
    keep: tuple[int, int] | None = None
    reduced_basis: list[tuple[int, int]] = Field(default=[])
    reduced_real: list[list[float]] = Field(default=[])
    reduced_imag: list[list[float]] = Field(default=[])
    probabilities: dict[TargetKind, float] = Field(default={})


class RunConfig(BaseModel):
    """Validated command-line configuration."""

    modes: int = Field(ge=1, description="Number of modes m.", examples=[3])
    photons: int = Field(ge=0, description="Number of photons n.", examples=[2])
    theta: float | None = Field(default=None, allow_inf_nan=False, description="Radians.")
    grid: GridSpec | None = None
    keep: tuple[int, int] = (1, 2)
    targets: list[TargetKind] = Field(default=[TargetKind.PSI_PLUS])
    noon_photons: int | None = Field(default=None, ge=1)
    backend: Backend = Backend.PERMANENT
    network_path: Path | None = None
    input_state: tuple[int, ...] | None = None
    all_pairs: bool = False
    out: Path | None = None
    format: OutputFormat = OutputFormat.CSV
    seed: int = 0

    @model_validator(mode="after")
    def _consistent(self) -> Self:
        a, b = self.keep
        # single-mode runs never reduce onto a port pair
        if self.modes >= 2 and (a == b or not (1 <= a <= self.modes and 1 <= b <= self.modes)):
            raise ValueError(f"Kept ports {self.keep} must be two distinct modes in 1..{self.modes}")
        if self.input_state is not None:
            if len(self.input_state) != self.modes:
                raise ValueError(
                    f"Input state {self.input_state} must have {self.modes} entries"
                )
            if any(k < 0 for k in self.input_state):
                raise ValueError(f"Input state {self.input_state} has negative occupations")
        return self

    @property
    def effective_noon_photons(self) -> int:
        return self.noon_photons or max(self.photons, 1)

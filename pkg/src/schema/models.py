from enum import StrEnum, auto


class Backend(StrEnum):
    """Ways of lifting a transfer matrix onto the Fock space."""

    PERMANENT = auto()
    SEQUENTIAL = auto()
    SYMBOLIC = auto()


class TargetKind(StrEnum):
    """Two-mode target states scored on the kept output ports."""

    PSI_PLUS = "psi+"
    PSI_MINUS = "psi-"
    PHI_PLUS = "phi+"
    PHI_MINUS = "phi-"
    NOON_PLUS = "noon+"
    NOON_MINUS = "noon-"

    @property
    def column(self) -> str:
        """CSV column holding this target's probability series."""
        return f"p_{self.name.lower()}"

    @property
    def is_noon(self) -> bool:
        return self in (TargetKind.NOON_PLUS, TargetKind.NOON_MINUS)

    @property
    def sign(self) -> int:
        return 1 if self.value.endswith("+") else -1


class OutputFormat(StrEnum):
    CSV = auto()
    JSON = auto()


class ExtremumKind(StrEnum):
    MAX = auto()
    MIN = auto()


ALL_TARGETS: tuple[TargetKind, ...] = tuple(TargetKind)

"""
Input mixtures, two-port reductions and target-state scoring.
"""

import logging
import math
from dataclasses import dataclass, field
from functools import cache
from typing import Self

import numpy as np

from optics.fock import FockBasis, enumerate_basis, hardcore_vectors
from schema import TargetKind

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ReducedBasis:
    """Two-mode occupations with total 0..n, ordered by total and then descending."""

    n: int
    states: tuple[tuple[int, int], ...]
    index: dict[tuple[int, int], int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)


@cache
def reduced_basis(n: int) -> ReducedBasis:
    if n < 0:
        raise ValueError(f"Photon number must be non-negative, got {n}")
    states: list[tuple[int, int]] = []
    for total in range(n + 1):
        states.extend((a, b) for a, b in enumerate_basis(2, total).states)
    return ReducedBasis(n=n, states=tuple(states), index={s: p for p, s in enumerate(states)})


@dataclass(frozen=True)
class DensityOperator:
    basis: FockBasis | ReducedBasis
    matrix: np.ndarray

    def __post_init__(self) -> None:
        dim = len(self.basis)
        if self.matrix.shape != (dim, dim):
            raise ValueError(f"Density matrix shape {self.matrix.shape} does not match basis size {dim}")

    @classmethod
    def from_state(cls, basis: FockBasis, amplitudes: np.ndarray) -> Self:
        return cls(basis=basis, matrix=np.outer(amplitudes, amplitudes.conj()))

    @property
    def trace(self) -> complex:
        return complex(np.trace(self.matrix))

    def checks(self) -> tuple[float, float, float]:
        """(Hermiticity error, trace error, smallest eigenvalue)."""
        hermiticity = float(np.max(np.abs(self.matrix - self.matrix.conj().T), initial=0.0))
        trace_error = abs(self.trace - 1.0)
        eigenvalues = np.linalg.eigvalsh((self.matrix + self.matrix.conj().T) / 2)
        return hermiticity, trace_error, float(eigenvalues.min())


@dataclass(frozen=True)
class TargetState:
    kind: TargetKind
    photons: int
    components: tuple[tuple[tuple[int, int], complex], ...]

    def vector(self, basis: ReducedBasis) -> np.ndarray:
        """Amplitudes over `basis`; components the basis cannot hold are dropped."""
        vec = np.zeros(len(basis), dtype=np.complex128)
        for occ, amplitude in self.components:
            if occ in basis.index:
                vec[basis.index[occ]] = amplitude
            else:
                logger.warning(
                    f"Target {self.kind} component {occ} lies outside the reduced basis "
                    f"of {basis.n} photons and scores zero"
                )
        return vec


def mixed_input(m: int, n: int) -> DensityOperator:
    """Uniform mixture over the hard-core placements of `n` photons in `m` modes."""
    vectors = hardcore_vectors(m, n)
    basis = enumerate_basis(m, n)
    matrix = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    weight = 1.0 / math.comb(m, n)
    for occ in vectors:
        p = basis.index[occ]
        matrix[p, p] = weight
    return DensityOperator(basis=basis, matrix=matrix)


def _check_pair(m: int, keep: tuple[int, int]) -> tuple[int, int]:
    a, b = keep
    if a == b:
        raise ValueError(f"Kept modes must differ, got {keep}")
    if not (1 <= a <= m and 1 <= b <= m):
        raise ValueError(f"Kept modes {keep} are out of range for {m} modes")
    return a - 1, b - 1


def partial_trace(rho: DensityOperator, keep: tuple[int, int]) -> DensityOperator:
    """Trace out every mode except `keep`; the kept order follows the pair."""
    basis = rho.basis
    if not isinstance(basis, FockBasis):
        raise ValueError("Partial trace needs an operator on a full Fock basis")
    a, b = _check_pair(basis.m, keep)
    reduced = reduced_basis(basis.n)
    occ = basis.occupations
    kept = [reduced.index[(int(x), int(y))] for x, y in occ[:, [a, b]]]
    environment = np.delete(occ, [a, b], axis=1)

    groups: dict[tuple[int, ...], list[int]] = {}
    for p, env in enumerate(map(tuple, environment)):
        groups.setdefault(env, []).append(p)

    matrix = np.zeros((len(reduced), len(reduced)), dtype=np.complex128)
    for members in groups.values():
        rows = [kept[p] for p in members]
        matrix[np.ix_(rows, rows)] += rho.matrix[np.ix_(members, members)]
    return DensityOperator(basis=reduced, matrix=matrix)


def sector_leakage(rho_red: DensityOperator) -> float:
    """Largest coherence between different kept-mode photon totals."""
    totals = np.array([sum(s) for s in rho_red.basis.states])
    mask = totals[:, None] != totals[None, :]
    return float(np.max(np.abs(rho_red.matrix[mask]), initial=0.0))


def swap_pair(rho_red: DensityOperator) -> DensityOperator:
    """Conjugate a two-port state by the mode swap."""
    basis = rho_red.basis
    if not isinstance(basis, ReducedBasis):
        raise ValueError("Mode swap needs an operator on a reduced basis")
    perm = [basis.index[(y, x)] for x, y in basis.states]
    return DensityOperator(basis=basis, matrix=rho_red.matrix[np.ix_(perm, perm)])


def target_state(kind: TargetKind, n: int = 1) -> TargetState:
    """Bell states ignore `n`; NOON states put all `n` photons in one port."""
    amp = 1 / math.sqrt(2)
    sign = kind.sign
    match kind:
        case TargetKind.PSI_PLUS | TargetKind.PSI_MINUS:
            photons, first, second = 1, (1, 0), (0, 1)
        case TargetKind.PHI_PLUS | TargetKind.PHI_MINUS:
            photons, first, second = 2, (0, 0), (1, 1)
        case TargetKind.NOON_PLUS | TargetKind.NOON_MINUS:
            if n < 1:
                raise ValueError(f"NOON targets need at least one photon, got {n}")
            photons, first, second = n, (n, 0), (0, n)
        case _:
            raise ValueError(f"Unknown target kind: {kind}")
    return TargetState(
        kind=kind,
        photons=photons,
        components=((first, complex(amp)), (second, complex(sign * amp))),
    )


def probability(rho_red: DensityOperator, target: TargetState) -> float:
    """Fidelity <t|rho|t> of the reduced state with the pure target."""
    if not isinstance(rho_red.basis, ReducedBasis):
        raise ValueError("Target probabilities need a reduced two-port density operator")
    t = target.vector(rho_red.basis)
    value = complex(t.conj() @ rho_red.matrix @ t)
    if abs(value.imag) > 1e-12:
        raise ValueError(f"Expectation of {target.kind} has imaginary part {value.imag:.3e}")
    if not -1e-10 <= value.real <= 1 + 1e-10:
        raise ValueError(f"Expectation of {target.kind} is not a probability: {value.real}")
    return min(max(value.real, 0.0), 1.0)

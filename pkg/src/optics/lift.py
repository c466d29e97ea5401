"""
Lifting transfer matrices onto the fixed-photon-number Fock space.

Two independent backends live here: matrix permanents (Ryser's formula with
Gray-code updates) and sequential two-mode updates that re-expand each
splitter's substitution with binomial coefficients. A third, symbolic
backend lives in `optics.symop`.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass
from typing import overload

import numpy as np

from core.settings import settings
from optics.fock import FockBasis, index_of
from optics.mesh import TransferMatrix, compose_chain
from optics.states import DensityOperator
from schema import Backend, BeamSplitterSpec, NetworkSpec

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class StateVector:
    basis: FockBasis
    amplitudes: np.ndarray

    def __post_init__(self) -> None:
        if self.amplitudes.shape != (len(self.basis),):
            raise ValueError(
                f"Amplitude vector of shape {self.amplitudes.shape} does not match basis size {len(self.basis)}"
            )

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def amplitude(self, occ: Sequence[int]) -> complex:
        return complex(self.amplitudes[index_of(self.basis, occ)])


@dataclass(frozen=True)
class FockOperator:
    basis: FockBasis
    matrix: np.ndarray

    def unitarity_error(self) -> float:
        dim = len(self.basis)
        return float(np.max(np.abs(self.matrix @ self.matrix.conj().T - np.eye(dim)), initial=0.0))


def basis_state(basis: FockBasis, occ: Sequence[int]) -> StateVector:
    amplitudes = np.zeros(len(basis), dtype=np.complex128)
    amplitudes[index_of(basis, occ)] = 1.0
    return StateVector(basis=basis, amplitudes=amplitudes)


def permanent(matrix: np.ndarray) -> complex:
    """Ryser's formula, visiting column subsets in Gray-code order."""
    A = np.asarray(matrix, dtype=np.complex128)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"Permanent needs a square matrix, got shape {A.shape}")
    k = A.shape[0]
    if k == 0:
        return 1.0 + 0.0j

    row_sums = np.zeros(k, dtype=np.complex128)
    total = 0.0 + 0.0j
    subset = 0
    for step in range(1, 1 << k):
        j = (step & -step).bit_length() - 1
        subset ^= 1 << j
        if subset >> j & 1:
            row_sums += A[:, j]
        else:
            row_sums -= A[:, j]
        term = complex(np.prod(row_sums))
        total += -term if subset.bit_count() % 2 else term
    return -total if k % 2 else total


def _replicated_modes(occ: Sequence[int]) -> np.ndarray:
    return np.repeat(np.arange(len(occ)), np.asarray(occ, dtype=np.int64))


def transition_amplitude(T: TransferMatrix, in_occ: Sequence[int], out_occ: Sequence[int]) -> complex:
    """<out|U|in> = perm(T[in modes, out modes]) / sqrt(prod in! prod out!)."""
    if sum(in_occ) != sum(out_occ):
        return 0.0 + 0.0j
    rows, cols = _replicated_modes(in_occ), _replicated_modes(out_occ)
    norm = math.prod(math.factorial(k) for k in in_occ) * math.prod(math.factorial(k) for k in out_occ)
    return permanent(T[np.ix_(rows, cols)]) / math.sqrt(norm)


def _ryser_columns(T: TransferMatrix, basis: FockBasis, columns: Sequence[int]) -> np.ndarray:
    """
    Columns of the lifted unitary. For a fixed input the Gray-code sweep runs
    over subsets of the replicated input rows once, and every output
    occupation is scored from the same running row sum.
    """
    outputs = basis.occupations
    norms = basis.factorial_norms
    result = np.zeros((len(basis), len(columns)), dtype=np.complex128)
    for c, p in enumerate(columns):
        rows = _replicated_modes(basis.states[p])
        n = len(rows)
        if n == 0:
            result[:, c] = 1.0
            continue
        acc = np.zeros(len(basis), dtype=np.complex128)
        partial = np.zeros(basis.m, dtype=np.complex128)
        subset = 0
        for step in range(1, 1 << n):
            j = (step & -step).bit_length() - 1
            subset ^= 1 << j
            if subset >> j & 1:
                partial += T[rows[j]]
            else:
                partial -= T[rows[j]]
            term = np.prod(partial[None, :] ** outputs, axis=1)
            if subset.bit_count() % 2:
                acc -= term
            else:
                acc += term
        if n % 2:
            acc = -acc
        result[:, c] = acc / (norms[p] * norms)
    return result


def lift_unitary(T: TransferMatrix, basis: FockBasis) -> FockOperator:
    if T.shape != (basis.m, basis.m):
        raise ValueError(f"Transfer matrix of shape {T.shape} does not act on {basis.m} modes")
    return FockOperator(basis=basis, matrix=_ryser_columns(T, basis, range(len(basis))))


def bs_fock_matrix(basis: FockBasis, spec: BeamSplitterSpec) -> np.ndarray:
    """
    One splitter on the Fock basis: a_a^dagger -> cos a_a^dagger + i sin a_b^dagger and
    a_b^dagger -> i sin a_a^dagger + cos a_b^dagger, re-expanded binomially.
    """
    if not 1 <= spec.mode_a < spec.mode_b <= basis.m:
        raise ValueError(
            f"Splitter ({spec.mode_a}, {spec.mode_b}) is out of range for {basis.m} modes"
        )
    a, b = spec.mode_a - 1, spec.mode_b - 1
    c, r = math.cos(spec.theta), 1j * math.sin(spec.theta)
    M = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for p, occ in enumerate(basis.states):
        na, nb = occ[a], occ[b]
        norm = math.sqrt(math.factorial(na) * math.factorial(nb))
        out = list(occ)
        for j in range(na + 1):
            from_a = math.comb(na, j) * c**j * r ** (na - j)
            for k in range(nb + 1):
                coef = from_a * math.comb(nb, k) * r**k * c ** (nb - k)
                x = j + k
                y = na + nb - x
                out[a], out[b] = x, y
                q = basis.index[tuple(out)]
                M[q, p] += coef * math.sqrt(math.factorial(x) * math.factorial(y)) / norm
    return M


def apply_bs_sequential(state: StateVector, spec: BeamSplitterSpec) -> StateVector:
    """One splitter applied to a pure state."""
    amplitudes = bs_fock_matrix(state.basis, spec) @ state.amplitudes
    return StateVector(basis=state.basis, amplitudes=amplitudes)


def propagator(
    network: NetworkSpec,
    basis: FockBasis,
    backend: Backend | None = None,
    columns: Sequence[int] | None = None,
) -> np.ndarray:
    """Selected columns (all by default) of the network's Fock-space unitary."""
    if network.m != basis.m:
        raise ValueError(f"Network on {network.m} modes cannot act on a basis of {basis.m} modes")
    backend = backend or settings.DEFAULT_BACKEND
    cols = list(range(len(basis))) if columns is None else list(columns)
    match backend:
        case Backend.PERMANENT:
            return _ryser_columns(compose_chain(network), basis, cols)
        case Backend.SEQUENTIAL:
            U = np.eye(len(basis), dtype=np.complex128)[:, cols]
            for spec in network.splitters:
                U = bs_fock_matrix(basis, spec) @ U
            return U
        case Backend.SYMBOLIC:
            from optics.symop import symbolic_columns

            return symbolic_columns(compose_chain(network), basis, cols)
        case _:
            raise ValueError(f"Unknown backend: {backend}")


@overload
def evolve_network(
    operand: StateVector, network: NetworkSpec, backend: Backend | None = None
) -> StateVector: ...


@overload
def evolve_network(
    operand: DensityOperator, network: NetworkSpec, backend: Backend | None = None
) -> DensityOperator: ...


def evolve_network(
    operand: StateVector | DensityOperator,
    network: NetworkSpec,
    backend: Backend | None = None,
) -> StateVector | DensityOperator:
    """U psi or U rho U^dagger, lifting only the columns the operand is supported on."""
    basis = operand.basis
    if not isinstance(basis, FockBasis):
        raise ValueError("Network evolution needs an operand on a full Fock basis")
    if isinstance(operand, StateVector):
        if (backend or settings.DEFAULT_BACKEND) == Backend.SEQUENTIAL:
            if network.m != basis.m:
                raise ValueError(
                    f"Network on {network.m} modes cannot act on a basis of {basis.m} modes"
                )
            state = operand
            for spec in network.splitters:
                state = apply_bs_sequential(state, spec)
            return state
        support = np.flatnonzero(operand.amplitudes)
        U = propagator(network, basis, backend, support)
        return StateVector(basis=basis, amplitudes=U @ operand.amplitudes[support])

    matrix = operand.matrix
    support = np.flatnonzero(np.any(matrix != 0, axis=0) | np.any(matrix != 0, axis=1))
    U = propagator(network, basis, backend, support)
    block = matrix[np.ix_(support, support)]
    logger.debug(f"Evolving density operator on {len(support)} of {len(basis)} basis states")
    return DensityOperator(basis=basis, matrix=U @ block @ U.conj().T)

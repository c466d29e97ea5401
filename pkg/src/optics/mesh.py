"""
Single-particle transfer matrices.

Row convention: a_k^dagger -> sum_p T[k, p] a_p^dagger. Applying splitter A
and then splitter B substitutes B's rows into A's, so the chain matrix is
T_A @ T_B.
"""

import logging
from dataclasses import dataclass
from typing import TypeAlias

import numpy as np
from numpy.typing import NDArray

from schema import BeamSplitterSpec, NetworkSpec

logger = logging.getLogger(__name__)

TransferMatrix: TypeAlias = NDArray[np.complex128]

# Coefficients below this are treated as exact zeros in labelled decompositions
PRUNE_THRESHOLD = 1e-15


def unitarity_error(T: np.ndarray) -> float:
    """Max-norm of T T^dagger - I."""
    return float(np.max(np.abs(T @ T.conj().T - np.eye(T.shape[0]))))


def bs_transfer(m: int, spec: BeamSplitterSpec) -> TransferMatrix:
    if not 1 <= spec.mode_a < spec.mode_b <= m:
        raise ValueError(
            f"Splitter ({spec.mode_a}, {spec.mode_b}) is out of range for {m} modes"
        )
    a, b = spec.mode_a - 1, spec.mode_b - 1
    c, r = np.cos(spec.theta), 1j * np.sin(spec.theta)
    T = np.eye(m, dtype=np.complex128)
    T[a, a], T[a, b] = c, r
    T[b, a], T[b, b] = r, c
    return T


def compose_chain(network: NetworkSpec) -> TransferMatrix:
    T = np.eye(network.m, dtype=np.complex128)
    for spec in network.splitters:
        T = T @ bs_transfer(network.m, spec)
    return T


def _check_mode(m: int, k: int) -> None:
    if not 1 <= k <= m:
        raise ValueError(f"Mode {k} is out of range for {m} modes")


def closed_form_column(m: int, k: int, theta: float) -> np.ndarray:
    """
    Coefficients of the transformed a_k^dagger through the default chain, written
    out term by term: one reflected term from mode k-1, the transmitted cascade
    over modes k..m-1 and the last mode. Terms naming mode 0 or an empty range
    vanish.
    """
    _check_mode(m, k)
    c, r = np.cos(theta), 1j * np.sin(theta)
    first = 1 if k == 1 else 0
    column = np.zeros(m, dtype=np.complex128)
    if k >= 2:
        column[k - 2] += r
    for p in range(k, m):
        column[p - 1] += r ** (p - k) * c ** (2 - first)
    column[m - 1] += r ** (m - k) * c ** (1 - first)
    return column


@dataclass(frozen=True)
class CoefficientSum:
    """Sum of the coefficients of one a_k^dagger across all transformed creators.

    `terms` pairs each contribution with the label of the transformed creator
    it comes from.
    """

    k: int
    terms: tuple[tuple[int, complex], ...]

    @property
    def total(self) -> complex:
        return complex(sum(value for _, value in self.terms))

    @property
    def labels(self) -> tuple[int, ...]:
        return tuple(label for label, _ in self.terms)


def closed_form_F(m: int, k: int, theta: float) -> CoefficientSum:
    _check_mode(m, k)
    c, r = np.cos(theta), 1j * np.sin(theta)
    last = 1 if k == m else 0
    terms: list[tuple[int, complex]] = []
    for j in range(1, k + 1):
        first = 1 if j == 1 else 0
        terms.append((j, complex(r ** (k - j) * c ** (2 - first - last))))
    # label k+1 does not exist for the last mode
    if k + 1 <= m:
        terms.append((k + 1, complex(r ** (1 - last))))
    kept = tuple((label, value) for label, value in terms if abs(value) > PRUNE_THRESHOLD)
    return CoefficientSum(k=k, terms=kept)

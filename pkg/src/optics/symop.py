"""
Normal-ordered bosonic operator algebra at fixed numeric theta.

A polynomial maps (creation exponents, annihilation exponents) to a complex
coefficient and always stores the normal-ordered form. Multiplying two
polynomials moves annihilators right past creators with
a^b (a^dagger)^g = sum_k C(b,k) C(g,k) k! (a^dagger)^(g-k) a^(b-k), mode by mode.
Each transformed operator enters a product once, so the algebra drops
repeated-label terms without any label bookkeeping.
"""

import logging
import math
from collections import defaultdict
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from functools import cache
from itertools import combinations, product
from typing import TypeAlias

import numpy as np

from optics.fock import FockBasis, enumerate_basis
from optics.lift import StateVector
from optics.mesh import PRUNE_THRESHOLD, TransferMatrix, closed_form_column
from optics.states import DensityOperator

logger = logging.getLogger(__name__)

Monomial: TypeAlias = tuple[tuple[int, ...], tuple[int, ...]]


def _prune(terms: dict[Monomial, complex]) -> dict[Monomial, complex]:
    return {mono: coef for mono, coef in terms.items() if abs(coef) > PRUNE_THRESHOLD}


@cache
def _contractions(b: int, g: int) -> tuple[tuple[int, int], ...]:
    """(k, weight) pairs normal-ordering a^b (a^dagger)^g in one mode."""
    return tuple(
        (k, math.comb(b, k) * math.comb(g, k) * math.factorial(k)) for k in range(min(b, g) + 1)
    )


@dataclass(frozen=True)
class OperatorPolynomial:
    m: int
    terms: dict[Monomial, complex]

    @classmethod
    def identity(cls, m: int) -> "OperatorPolynomial":
        zero = (0,) * m
        return cls(m=m, terms={(zero, zero): 1.0 + 0.0j})

    def __mul__(self, other: "OperatorPolynomial") -> "OperatorPolynomial":
        if self.m != other.m:
            raise ValueError(f"Cannot multiply operators on {self.m} and {other.m} modes")
        out: dict[Monomial, complex] = defaultdict(complex)
        for (alpha, beta), left in self.terms.items():
            for (gamma, delta), right in other.terms.items():
                for choice in product(*(_contractions(b, g) for b, g in zip(beta, gamma))):
                    ks = [k for k, _ in choice]
                    weight = math.prod(w for _, w in choice)
                    creation = tuple(x + y - k for x, y, k in zip(alpha, gamma, ks))
                    annihilation = tuple(x - k + y for x, y, k in zip(beta, delta, ks))
                    out[(creation, annihilation)] += left * right * weight
        return OperatorPolynomial(m=self.m, terms=_prune(out))

    def coefficient(self, creation: Sequence[int], annihilation: Sequence[int] | None = None) -> complex:
        ann = tuple(annihilation) if annihilation is not None else (0,) * self.m
        return self.terms.get((tuple(creation), ann), 0.0 + 0.0j)

    def vacuum_amplitudes(self, basis: FockBasis) -> StateVector:
        """Apply to |0...0>; each surviving (a^dagger)^alpha yields sqrt(alpha!) |alpha>."""
        if basis.m != self.m:
            raise ValueError(f"Basis of {basis.m} modes does not match operator on {self.m}")
        amplitudes = np.zeros(len(basis), dtype=np.complex128)
        for (alpha, beta), coef in self.terms.items():
            if any(beta):
                continue
            if alpha not in basis.index:
                raise ValueError(
                    f"Term {alpha} leaves the {basis.n}-photon sector; the operator is not homogeneous"
                )
            p = basis.index[alpha]
            amplitudes[p] += coef * basis.factorial_norms[p]
        return StateVector(basis=basis, amplitudes=amplitudes)


def _unit(m: int, p: int) -> tuple[int, ...]:
    return tuple(1 if q == p else 0 for q in range(m))


def creation_polynomial(coefficients: Sequence[complex]) -> OperatorPolynomial:
    """sum_p c_p a_p^dagger."""
    m = len(coefficients)
    zero = (0,) * m
    return OperatorPolynomial(
        m=m,
        terms=_prune({(_unit(m, p), zero): complex(c) for p, c in enumerate(coefficients)}),
    )


def annihilation_polynomial(coefficients: Sequence[complex]) -> OperatorPolynomial:
    """sum_p c_p a_p."""
    m = len(coefficients)
    zero = (0,) * m
    return OperatorPolynomial(
        m=m,
        terms=_prune({(zero, _unit(m, p)): complex(c) for p, c in enumerate(coefficients)}),
    )


def transformed_creation(m: int, k: int, theta: float) -> OperatorPolynomial:
    return creation_polynomial(closed_form_column(m, k, theta))


def transformed_annihilation(m: int, k: int, theta: float) -> OperatorPolynomial:
    # reflection phases flip sign: i sin -> -i sin
    return annihilation_polynomial(np.conj(closed_form_column(m, k, theta)))


def expand_product(factors: Iterable[OperatorPolynomial]) -> OperatorPolynomial:
    """Normal-ordered product, left to right."""
    ordered = list(factors)
    if not ordered:
        raise ValueError("Cannot expand an empty product")
    result = ordered[0]
    for factor in ordered[1:]:
        result = result * factor
    return result


def zero_channel_sets(m: int, n: int) -> list[tuple[int, ...]]:
    """Increasing 1-based channel tuples left empty by the hard-core input."""
    if not 0 <= n <= m:
        raise ValueError(f"Need 0 <= n <= m, got m={m}, n={n}")
    return list(combinations(range(1, m + 1), m - n))


def _check_channels(m: int, n: int, zero_channels: Sequence[int]) -> None:
    if not 0 <= n <= m:
        raise ValueError(f"Need 0 <= n <= m, got m={m}, n={n}")
    if len(zero_channels) != m - n:
        raise ValueError(f"Expected {m - n} empty channels, got {len(zero_channels)}")
    if any(not 1 <= k <= m for k in zero_channels):
        raise ValueError(f"Channels {tuple(zero_channels)} are out of range for {m} modes")
    if any(b <= a for a, b in zip(zero_channels, zero_channels[1:])):
        raise ValueError(f"Channels {tuple(zero_channels)} must be strictly increasing")


def general_output_state(
    m: int, n: int, zero_channels: Sequence[int], theta: float
) -> StateVector:
    """
    Transform of a_{k_1} ... a_{k_{m-n}} a_1^dagger ... a_m^dagger |0> through the
    default chain, i.e. the hard-core input with the listed channels empty.
    """
    _check_channels(m, n, zero_channels)
    factors = [transformed_annihilation(m, k, theta) for k in zero_channels]
    factors += [transformed_creation(m, k, theta) for k in range(1, m + 1)]
    return expand_product(factors).vacuum_amplitudes(enumerate_basis(m, n))


def general_output_density(m: int, n: int, theta: float) -> DensityOperator:
    """Uniform mixture of the transformed states over every choice of empty channels."""
    channel_sets = zero_channel_sets(m, n)
    basis = enumerate_basis(m, n)
    matrix = np.zeros((len(basis), len(basis)), dtype=np.complex128)
    for channels in channel_sets:
        psi = general_output_state(m, n, channels, theta).amplitudes
        matrix += np.outer(psi, psi.conj())
    logger.debug(f"Summed {len(channel_sets)} channel choices for m={m} n={n}")
    return DensityOperator(basis=basis, matrix=matrix / len(channel_sets))


def symbolic_columns(T: TransferMatrix, basis: FockBasis, columns: Sequence[int]) -> np.ndarray:
    """Columns of the lifted unitary by expanding products of transformed creators."""
    creators = [creation_polynomial(T[k]) for k in range(basis.m)]
    result = np.zeros((len(basis), len(columns)), dtype=np.complex128)
    for c, p in enumerate(columns):
        occ = basis.states[p]
        factors = [creators[k] for k, count in enumerate(occ) for _ in range(count)]
        poly = expand_product(factors) if factors else OperatorPolynomial.identity(basis.m)
        state = poly.vacuum_amplitudes(basis)
        result[:, c] = state.amplitudes / basis.factorial_norms[p]
    return result

"""
Occupation-number bases for a fixed total photon number.

A state labelled by the occupation vector v stands for
prod_k (a_k^dagger)^{v_k} / sqrt(v_k!) applied to the vacuum, so hard-core
vectors (entries in {0, 1}) carry no factorial factors.
"""

import logging
import math
from collections.abc import Sequence
from dataclasses import dataclass, field
from functools import cache, cached_property
from itertools import combinations, combinations_with_replacement
from typing import TypeAlias

import numpy as np

from core.settings import settings

logger = logging.getLogger(__name__)

OccupationVector: TypeAlias = tuple[int, ...]


def _check_size(m: int, n: int) -> None:
    if m < 1:
        raise ValueError(f"Mode count must be at least 1, got {m}")
    if n < 0:
        raise ValueError(f"Photon number must be non-negative, got {n}")
    if m + n > settings.MAX_SIZE:
        raise ValueError(f"m + n = {m + n} exceeds the supported size {settings.MAX_SIZE}")


def basis_dimension(m: int, n: int) -> int:
    """C(n + m - 1, m - 1), exact."""
    _check_size(m, n)
    return math.comb(n + m - 1, m - 1)


def is_hardcore(occ: Sequence[int]) -> bool:
    return all(k in (0, 1) for k in occ)


@dataclass(frozen=True)
class FockBasis:
    """All occupation vectors of `m` modes holding `n` photons, in lexicographic descending order."""

    m: int
    n: int
    states: tuple[OccupationVector, ...]
    index: dict[OccupationVector, int] = field(repr=False, compare=False)

    def __len__(self) -> int:
        return len(self.states)

    def __contains__(self, occ: object) -> bool:
        return occ in self.index

    @cached_property
    def occupations(self) -> np.ndarray:
        """States as a (dim, m) integer array."""
        return np.array(self.states, dtype=np.int64).reshape(len(self.states), self.m)

    @cached_property
    def factorial_norms(self) -> np.ndarray:
        """sqrt(prod_k occ_k!) per state."""
        return np.sqrt(
            np.array([math.prod(math.factorial(k) for k in occ) for occ in self.states], dtype=float)
        )


@cache
def enumerate_basis(m: int, n: int) -> FockBasis:
    _check_size(m, n)
    states = sorted(
        (
            tuple(int(k) for k in np.bincount(np.array(modes, dtype=np.int64), minlength=m))
            for modes in combinations_with_replacement(range(m), n)
        ),
        reverse=True,
    )
    logger.debug(f"Built Fock basis m={m} n={n} with {len(states)} states")
    return FockBasis(m=m, n=n, states=tuple(states), index={s: p for p, s in enumerate(states)})


@cache
def hardcore_vectors(m: int, n: int) -> tuple[OccupationVector, ...]:
    """The C(m, n) vectors with entries in {0, 1} summing to `n`."""
    _check_size(m, n)
    if n > m:
        raise ValueError(f"Cannot place {n} photons in {m} modes with at most one per mode")
    vectors = []
    for modes in combinations(range(m), n):
        occ = [0] * m
        for k in modes:
            occ[k] = 1
        vectors.append(tuple(occ))
    return tuple(sorted(vectors, reverse=True))


def index_of(basis: FockBasis, occ: Sequence[int]) -> int:
    key = tuple(int(k) for k in occ)
    try:
        return basis.index[key]
    except KeyError:
        raise KeyError(
            f"Occupation {key} is not in the basis of {basis.m} modes and {basis.n} photons"
        ) from None

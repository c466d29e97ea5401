import math
from collections import defaultdict

import numpy as np
import pytest

from optics.fock import enumerate_basis
from optics.lift import evolve_network, propagator
from optics.mesh import closed_form_column
from optics.states import mixed_input
from optics.symop import (
    OperatorPolynomial,
    annihilation_polynomial,
    creation_polynomial,
    expand_product,
    general_output_density,
    general_output_state,
    transformed_annihilation,
    transformed_creation,
    zero_channel_sets,
)
from schema import NetworkSpec


def ladder(state: dict, coefficients, create: bool) -> dict:
    """Apply sum_p c_p a_p^dagger (or a_p) to a sparse Fock state."""
    out: dict = defaultdict(complex)
    for occ, amp in state.items():
        for p, coef in enumerate(coefficients):
            if coef == 0:
                continue
            new = list(occ)
            if create:
                new[p] += 1
                factor = math.sqrt(new[p])
            else:
                if occ[p] == 0:
                    continue
                factor = math.sqrt(occ[p])
                new[p] -= 1
            out[tuple(new)] += amp * coef * factor
    return dict(out)


def test_single_mode_commutator() -> None:
    product = annihilation_polynomial([1]) * creation_polynomial([1])
    assert product.terms == {((1,), (1,)): 1, ((0,), (0,)): 1}


def test_double_contraction() -> None:
    a, ad = annihilation_polynomial([1]), creation_polynomial([1])
    product = expand_product([a, a, ad, ad])
    assert product.coefficient((2,), (2,)) == 1
    assert product.coefficient((1,), (1,)) == 4
    assert product.coefficient((0,), (0,)) == 2


def test_modes_commute() -> None:
    a1 = annihilation_polynomial([1, 0])
    ad2 = creation_polynomial([0, 1])
    assert (a1 * ad2).terms == {((0, 1), (1, 0)): 1}


def test_normal_ordering_matches_ladder_operators(rng: np.random.Generator) -> None:
    m = 3
    factors, steps = [], []
    for create in (False, True, False, True, True, True):
        coefficients = rng.normal(size=m) + 1j * rng.normal(size=m)
        factors.append(creation_polynomial(coefficients) if create else annihilation_polynomial(coefficients))
        steps.append((coefficients, create))

    state = {(0,) * m: 1.0 + 0j}
    for coefficients, create in reversed(steps):
        state = ladder(state, coefficients, create)

    basis = enumerate_basis(m, 2)
    amplitudes = expand_product(factors).vacuum_amplitudes(basis).amplitudes
    for p, occ in enumerate(basis.states):
        assert amplitudes[p] == pytest.approx(state.get(occ, 0), abs=1e-12)


def test_transformed_annihilator_is_conjugate() -> None:
    theta = 0.8
    for k in range(1, 4):
        creator = transformed_creation(3, k, theta)
        annihilator = transformed_annihilation(3, k, theta)
        for (alpha, _), coef in creator.terms.items():
            assert annihilator.coefficient((0, 0, 0), alpha) == pytest.approx(coef.conjugate())


def test_two_mode_annihilator_on_vacuum() -> None:
    theta = 0.3
    annihilator = transformed_annihilation(2, 1, theta)
    assert annihilator.coefficient((0, 0), (1, 0)) == pytest.approx(math.cos(theta))
    assert annihilator.coefficient((0, 0), (0, 1)) == pytest.approx(-1j * math.sin(theta))


def test_zero_channel_sets() -> None:
    assert zero_channel_sets(3, 2) == [(1,), (2,), (3,)]
    assert zero_channel_sets(2, 0) == [(1, 2)]
    assert zero_channel_sets(4, 4) == [()]
    with pytest.raises(ValueError):
        zero_channel_sets(2, 3)


@pytest.mark.parametrize(("m", "n"), [(m, n) for m in range(1, 6) for n in range(m + 1)])
def test_general_output_states_match_permanent(m: int, n: int, random_thetas: np.ndarray) -> None:
    basis = enumerate_basis(m, n)
    for theta in random_thetas[:10]:
        for channels in zero_channel_sets(m, n):
            occ = tuple(0 if k + 1 in channels else 1 for k in range(m))
            column = propagator(NetworkSpec.chain(m, theta), basis, columns=[basis.index[occ]])
            state = general_output_state(m, n, channels, theta)
            np.testing.assert_allclose(state.amplitudes, column[:, 0], atol=1e-10)


@pytest.mark.parametrize(("m", "n"), [(1, 1), (2, 0), (3, 2), (3, 3), (4, 2), (5, 2), (5, 5)])
def test_general_output_density_matches_evolution(m: int, n: int, random_thetas: np.ndarray) -> None:
    for theta in random_thetas[:2]:
        expected = evolve_network(mixed_input(m, n), NetworkSpec.chain(m, theta))
        np.testing.assert_allclose(general_output_density(m, n, theta).matrix, expected.matrix, atol=1e-10)


@pytest.mark.parametrize(
    ("m", "n", "channels"),
    [(3, 2, (1, 2)), (3, 2, (0,)), (3, 2, (4,)), (4, 2, (3, 1)), (4, 2, (2, 2)), (2, 3, ())],
)
def test_general_output_state_rejects_channels(m: int, n: int, channels: tuple[int, ...]) -> None:
    with pytest.raises(ValueError):
        general_output_state(m, n, channels, 0.1)


def test_vacuum_amplitudes_rejects_mixed_photon_numbers() -> None:
    poly = creation_polynomial([1.0, 0.5])
    with pytest.raises(ValueError, match="not homogeneous"):
        poly.vacuum_amplitudes(enumerate_basis(2, 2))


def test_product_mode_mismatch() -> None:
    with pytest.raises(ValueError, match="Cannot multiply"):
        OperatorPolynomial.identity(2) * OperatorPolynomial.identity(3)


def test_empty_product() -> None:
    with pytest.raises(ValueError, match="empty"):
        expand_product([])


def test_creation_polynomial_prunes_zeros() -> None:
    poly = creation_polynomial(closed_form_column(3, 3, 0.4))
    assert len(poly.terms) == 2

from optics.fock import FockBasis, basis_dimension, enumerate_basis, hardcore_vectors, index_of
from optics.lift import StateVector, evolve_network, lift_unitary, permanent, propagator
from optics.mesh import closed_form_column, closed_form_F, compose_chain
from optics.states import (
    DensityOperator,
    mixed_input,
    partial_trace,
    probability,
    reduced_basis,
    target_state,
)
from optics.sweep import find_extrema, sweep_theta
from optics.symop import general_output_density, general_output_state

__all__ = [
    "DensityOperator",
    "FockBasis",
    "StateVector",
    "basis_dimension",
    "closed_form_F",
    "closed_form_column",
    "compose_chain",
    "enumerate_basis",
    "evolve_network",
    "find_extrema",
    "general_output_density",
    "general_output_state",
    "hardcore_vectors",
    "index_of",
    "lift_unitary",
    "mixed_input",
    "partial_trace",
    "permanent",
    "probability",
    "propagator",
    "reduced_basis",
    "sweep_theta",
    "target_state",
]

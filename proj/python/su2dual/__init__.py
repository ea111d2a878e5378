"""SU(2) lattice gauge theory on the 2x2 periodic torus in the dual loop basis."""

from ._core import (
    basis_labels,
    clebsch_gordan,
    gauss_laws_reduce,
    ground_state,
    haar_weight,
    hamiltonian,
    initial_ansatz,
    log_grid,
    operator_table,
    optimize,
    radial_levels,
    spherical_harmonic,
    sweep,
    torus_dof,
    wigner_eckart_max_deviation,
)

__version__ = "0.1.0"

__all__ = [
    "basis_labels",
    "clebsch_gordan",
    "gauss_laws_reduce",
    "ground_state",
    "haar_weight",
    "hamiltonian",
    "initial_ansatz",
    "log_grid",
    "operator_table",
    "optimize",
    "radial_levels",
    "spherical_harmonic",
    "sweep",
    "torus_dof",
    "wigner_eckart_max_deviation",
]

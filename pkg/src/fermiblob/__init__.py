"""Symplectic capacities, Williamson normal forms and Fermi ellipsoids of Gaussian states."""

from .capacity import (
    PhaseSpaceEllipsoid,
    QuantumBlob,
    block_capacity,
    capacity,
    eh_capacities,
    inscribed_quantum_blob,
    is_quantum_blob,
    plane_section_area,
    plane_section_symplectic_area,
)
from .config import RunConfig, get_config, set_config, using
from .errors import FermiBlobError, InputError, NumericalError
from .gaussian import (
    FermiForm,
    GaussianState,
    covariance,
    fermi_capacity,
    fermi_factorization,
    fermi_form,
    fermi_function,
    rs_check,
    wigner_closed_form,
    wigner_matrix,
)
from .oscillator import QuadraticHamiltonian, claim_check, energy_level, hermite_function
from .symplectic import standard_form, symplectic_spectrum, williamson

__all__ = [
    "FermiBlobError",
    "FermiForm",
    "GaussianState",
    "InputError",
    "NumericalError",
    "PhaseSpaceEllipsoid",
    "QuadraticHamiltonian",
    "QuantumBlob",
    "RunConfig",
    "block_capacity",
    "capacity",
    "claim_check",
    "covariance",
    "eh_capacities",
    "energy_level",
    "fermi_capacity",
    "fermi_factorization",
    "fermi_form",
    "fermi_function",
    "get_config",
    "hermite_function",
    "inscribed_quantum_blob",
    "is_quantum_blob",
    "plane_section_area",
    "plane_section_symplectic_area",
    "rs_check",
    "set_config",
    "standard_form",
    "symplectic_spectrum",
    "using",
    "wigner_closed_form",
    "wigner_matrix",
    "williamson",
]

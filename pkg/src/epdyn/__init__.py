"""Time evolution of a two-level non-Hermitian model near exceptional points."""

__version__ = "0.1.0"

from .errors import (  # noqa: E402
    DefectiveSpectrumError,
    DegenerateParametersError,
    EPDynError,
    InvalidArgumentError,
)
from .model import PAPER_PARAMS, ModelParams, StateVector, hamiltonian, rotated_hamiltonian  # noqa: E402
from .spectral import critical_lambda, eigenvalues, eigenvectors, exceptional_points  # noqa: E402
from .evolution import evolve_at_ep, evolve_auto, evolve_closed  # noqa: E402

__all__ = [
    "DefectiveSpectrumError",
    "DegenerateParametersError",
    "EPDynError",
    "InvalidArgumentError",
    "ModelParams",
    "PAPER_PARAMS",
    "StateVector",
    "critical_lambda",
    "eigenvalues",
    "eigenvectors",
    "evolve_at_ep",
    "evolve_auto",
    "evolve_closed",
    "exceptional_points",
    "hamiltonian",
    "rotated_hamiltonian",
]

"""Entanglement laboratory for variable-range Ising weighted graph states."""

from .chain import Boundary, ChainSpec, PhaseModel, coupling, phase
from .errors import DomainError, NumericalError, ResourceLimitError
from .measures import (
    block_entropy,
    ggm,
    ggm_edge,
    mutual_information,
    time_average,
    u_l_bound,
)
from .rdm import build_rdm, entropy, rdm_entry, spectrum

__version__ = "0.1.0"

__all__ = [
    "Boundary",
    "ChainSpec",
    "PhaseModel",
    "DomainError",
    "NumericalError",
    "ResourceLimitError",
    "coupling",
    "phase",
    "build_rdm",
    "rdm_entry",
    "spectrum",
    "entropy",
    "block_entropy",
    "u_l_bound",
    "mutual_information",
    "ggm",
    "ggm_edge",
    "time_average",
    "__version__",
]

"""Chain configuration and pairwise interaction phases.

A chain is a 1D open-boundary lattice of ``n_sites`` qudits with
variable-range couplings ``g(i, j) = 1 / |i - j|**alpha``.  Evolving for a
time ``t`` accumulates the pairwise phase ``phi(i, j) = g(i, j) * t`` that
every reduced-density-matrix kernel in this package consumes.  Couplings are
always computed on demand from ``(alpha, |i - j|)``; no N x N matrix is ever
stored, so chains with thousands of sites stay cheap.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

# Largest Hermitian eigenproblem we allow by default is 4096 x 4096.
_DEFAULT_DIM_CAP = 4096


class Boundary(enum.Enum):
    OPEN = "open"


@dataclass(frozen=True)
class ChainSpec:
    """Physical configuration of the qudit chain.

    ``max_range`` truncates the interaction to distances ``|i - j| <=
    max_range`` (``None`` means full variable range).  The truncated variant
    with ``max_range=1`` realizes the nearest-neighbour limit exactly, which
    is otherwise only approached as ``alpha -> inf``.
    """

    n_sites: int
    local_dim: int
    alpha: float
    boundary: Boundary = Boundary.OPEN
    max_range: int | None = None

    def __post_init__(self) -> None:
        if self.n_sites < 2:
            raise DomainError(f"n_sites must be >= 2, got {self.n_sites}")
        if self.local_dim < 2:
            raise DomainError(f"local_dim must be >= 2, got {self.local_dim}")
        if self.alpha < 0:
            raise DomainError(f"alpha must be >= 0, got {self.alpha}")
        if self.boundary is not Boundary.OPEN:
            raise DomainError("only open boundary conditions are supported")
        if self.max_range is not None and self.max_range < 1:
            raise DomainError(f"max_range must be >= 1, got {self.max_range}")

    def _check_site(self, i: int) -> None:
        if not 1 <= i <= self.n_sites:
            raise DomainError(f"site index {i} outside [1, {self.n_sites}]")

    def coupling(self, i: int, j: int) -> float:
        """Interaction strength ``1 / |i - j|**alpha`` (0 beyond max_range)."""
        self._check_site(i)
        self._check_site(j)
        if i == j:
            raise DomainError("coupling is undefined for i == j")
        r = abs(i - j)
        if self.max_range is not None and r > self.max_range:
            return 0.0
        return float(r) ** (-self.alpha)

    def coupling_profile(self, site: int, others: np.ndarray) -> np.ndarray:
        """Vector of couplings between ``site`` and each entry of ``others``."""
        self._check_site(site)
        dist = np.abs(np.asarray(others, dtype=float) - site)
        if np.any(dist == 0):
            raise DomainError("coupling is undefined for i == j")
        g = dist ** (-self.alpha)
        if self.max_range is not None:
            g[dist > self.max_range] = 0.0
        return g


@dataclass(frozen=True)
class PhaseModel:
    """A chain together with the (dimensionless) evolution time."""

    chain: ChainSpec
    time: float

    def __post_init__(self) -> None:
        if self.time < 0:
            raise DomainError(f"time must be >= 0, got {self.time}")

    def phase(self, i: int, j: int) -> float:
        """Accumulated pairwise phase ``g(i, j) * t``; symmetric in (i, j)."""
        return self.chain.coupling(i, j) * self.time


def coupling(chain: ChainSpec, i: int, j: int) -> float:
    return chain.coupling(i, j)


def phase(model: PhaseModel, i: int, j: int) -> float:
    return model.phase(i, j)


def subsystem_size_limit(local_dim: int, dim_cap: int = _DEFAULT_DIM_CAP) -> int:
    """Largest subsystem size whose RDM dimension stays within ``dim_cap``.

    Gives 12, 7, 6, 5 for d = 2, 3, 4, 5 with the default cap.
    """
    return max(1, int(math.floor(math.log(dim_cap) / math.log(local_dim) + 1e-9)))

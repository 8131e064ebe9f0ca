"""Scalar entanglement measures of the weighted graph state.

Block entropy, the strong-subadditivity upper bound built from sub-blocks,
two-site mutual information, edge-site genuine multipartite entanglement,
and trapezoidal time averages of any of them.  All entropies are base-2.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import exact
from .chain import ChainSpec, PhaseModel, subsystem_size_limit
from .errors import DomainError
from .rdm import build_rdm, entropy, rdm_series, spectrum

# Edge-site GGM is a provably good proxy only from these sizes upward
# (approximation error stays below 1e-3 at smaller N, checked separately).
EDGE_GGM_MIN_SITES = {2: 12, 3: 9, 4: 7}
_EDGE_GGM_DEFAULT_MIN = 7

CONVERGENCE_TOL = 1e-4


class MeasureKind(enum.Enum):
    ENTROPY = "entropy"
    MI = "mi"
    GGM = "ggm"


@dataclass(frozen=True)
class TimeSeries:
    times: np.ndarray
    values: np.ndarray
    kind: MeasureKind


@dataclass(frozen=True)
class AveragedValue:
    value: float
    t0: float
    quadrature_step: float
    half_step_delta: float

    @property
    def converged(self) -> bool:
        return self.half_step_delta < CONVERGENCE_TOL


def default_quadrature_step(local_dim: int) -> float:
    """Resolves the fastest integrand oscillation with >= 32 points/period.

    The quickest phase in any RDM entry advances as (d-1)^2 * g_max * t with
    g_max = 1 at unit distance.
    """
    return np.pi / (16 * (local_dim - 1) ** 2)


def _time_grid(t0: float, step: float) -> np.ndarray:
    if t0 <= 0 or step <= 0:
        raise DomainError("t0 and step must be positive")
    n = max(1, int(round(t0 / step)))
    return np.linspace(0.0, t0, n + 1)


def block_entropy(model: PhaseModel, block_len: int) -> float:
    """Entropy (bits) of the first ``block_len`` sites."""
    sites = tuple(range(1, block_len + 1))
    return float(entropy(spectrum(build_rdm(model, sites))))


def u_l_bound(model: PhaseModel, block_len: int, sub_len: int) -> float:
    """Sub-block upper bound on the block entropy.

    Splits the first ``block_len`` sites into contiguous sub-blocks of length
    ``sub_len`` and returns the strong-subadditivity chain
    ``sum_j S(block_j + block_{j+1}) - sum_{interior j} S(block_j)``.
    Degenerates to the block entropy itself when ``sub_len == block_len``.
    """
    if block_len % sub_len != 0:
        raise DomainError(f"sub_len {sub_len} must divide block length {block_len}")
    limit = subsystem_size_limit(model.chain.local_dim)
    n_blocks = block_len // sub_len
    if n_blocks == 1:
        return block_entropy(model, block_len)
    if 2 * sub_len > limit:
        raise DomainError(
            f"adjacent sub-block pairs of {2 * sub_len} sites exceed the "
            f"size limit {limit}"
        )
    blocks = [
        tuple(range(j * sub_len + 1, (j + 1) * sub_len + 1)) for j in range(n_blocks)
    ]
    total = 0.0
    for j in range(n_blocks - 1):
        total += float(entropy(spectrum(build_rdm(model, blocks[j] + blocks[j + 1]))))
    for j in range(1, n_blocks - 1):
        total -= float(entropy(spectrum(build_rdm(model, blocks[j]))))
    return total


def mi_site_pair(chain: ChainSpec, separation: int, anchor: int | None = None) -> tuple[int, int]:
    """The (i, i + r) pair used for mutual information.

    The pair is centered in the chain to minimize edge effects; pass
    ``anchor`` to pin the left site instead (e.g. 1 for edge-anchored runs).
    """
    n = chain.n_sites
    if not 1 <= separation <= n - 1:
        raise DomainError(f"separation {separation} outside [1, {n - 1}]")
    i = anchor if anchor is not None else (n - separation) // 2 + 1
    j = i + separation
    if not (1 <= i < j <= n):
        raise DomainError(f"pair ({i}, {j}) does not fit in the chain")
    return i, j


def mutual_information(
    model: PhaseModel, separation: int, anchor: int | None = None
) -> float:
    """Total correlation S(i) + S(j) - S(ij) between sites at distance r."""
    values = mi_series(
        model.chain, separation, np.array([model.time]), anchor=anchor
    ).values
    return float(values[0])


def mi_series(
    chain: ChainSpec,
    separation: int,
    times: np.ndarray,
    anchor: int | None = None,
) -> TimeSeries:
    """Mutual information sampled on a time grid (vectorized)."""
    i, j = mi_site_pair(chain, separation, anchor)
    times = np.asarray(times, dtype=float)
    s_i = entropy(spectrum(rdm_series(chain, (i,), times)))
    s_j = entropy(spectrum(rdm_series(chain, (j,), times)))
    s_ij = entropy(spectrum(rdm_series(chain, (i, j), times)))
    return TimeSeries(times=times, values=s_i + s_j - s_ij, kind=MeasureKind.MI)


def ggm_edge(model: PhaseModel) -> float:
    """1 - lambda_max of the first site's RDM; the large-N GGM proxy."""
    return float(ggm_edge_series(model.chain, np.array([model.time])).values[0])


def ggm_edge_series(chain: ChainSpec, times: np.ndarray) -> TimeSeries:
    times = np.asarray(times, dtype=float)
    lam = spectrum(rdm_series(chain, (1,), times))
    return TimeSeries(times=times, values=1.0 - lam[:, 0], kind=MeasureKind.GGM)


def ggm(model: PhaseModel) -> float:
    """GGM with automatic edge-site/exhaustive dispatch by system size."""
    d = model.chain.local_dim
    threshold = EDGE_GGM_MIN_SITES.get(d, _EDGE_GGM_DEFAULT_MIN)
    if model.chain.n_sites >= threshold:
        return ggm_edge(model)
    return exact.exact_ggm(exact.build_state(model))


def _trapezoid_average(values: np.ndarray, times: np.ndarray) -> float:
    return float(np.trapezoid(values, times) / (times[-1] - times[0]))


def _averaged_from_fine_grid(
    values: np.ndarray, times: np.ndarray, t0: float, step: float
) -> AveragedValue:
    """Build the stated-step average plus its half-step certificate.

    ``values`` must be sampled on the half-step grid; the stated-step
    estimate uses every other point.
    """
    coarse = _trapezoid_average(values[::2], times[::2])
    fine = _trapezoid_average(values, times)
    return AveragedValue(
        value=coarse, t0=t0, quadrature_step=step, half_step_delta=abs(fine - coarse)
    )


def time_average(
    f: Callable[[float], float], t0: float, step: float
) -> AveragedValue:
    """Trapezoidal time average of a scalar measure closure over [0, t0]."""
    fine_times = _time_grid(t0, step / 2.0)
    values = np.array([f(t) for t in fine_times])
    return _averaged_from_fine_grid(values, fine_times, t0, step)


def mi_time_average(
    chain: ChainSpec,
    separation: int,
    t0: float,
    step: float | None = None,
    anchor: int | None = None,
) -> AveragedValue:
    """Time-averaged mutual information over [0, t0] (vectorized grid)."""
    step = step if step is not None else default_quadrature_step(chain.local_dim)
    fine_times = _time_grid(t0, step / 2.0)
    series = mi_series(chain, separation, fine_times, anchor=anchor)
    return _averaged_from_fine_grid(series.values, fine_times, t0, step)


def ggm_edge_time_average(
    chain: ChainSpec, t0: float, step: float | None = None
) -> AveragedValue:
    """Time-averaged edge-site GGM over [0, t0] (vectorized grid)."""
    step = step if step is not None else default_quadrature_step(chain.local_dim)
    fine_times = _time_grid(t0, step / 2.0)
    series = ggm_edge_series(chain, fine_times)
    return _averaged_from_fine_grid(series.values, fine_times, t0, step)


def entropy_profile(
    model: PhaseModel, block_lengths: Sequence[int]
) -> list[float]:
    """Block entropies for several block lengths at one time."""
    return [block_entropy(model, length) for length in block_lengths]

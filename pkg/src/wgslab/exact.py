"""Brute-force statevector oracle for small chains.

Builds the full weighted-graph-state amplitude vector, takes partial traces
and Schmidt spectra over arbitrary bipartitions, enumerates every
bipartition for the exact genuine-multipartite-entanglement value, and
implements the single-site generalized-Z measurement that reduces an N-qudit
state to a locally-equivalent (N-1)-qudit one.  Everything here is the
independent cross-check for the closed-form kernels in :mod:`wgslab.rdm`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from .chain import ChainSpec, PhaseModel
from .errors import DomainError, NumericalError, ResourceLimitError

AMPLITUDE_CAP = 2_000_000

# Exhaustive bipartition scans stay tractable up to these sizes.
EXACT_GGM_SITE_CAP = {2: 12, 3: 11, 4: 7}
_EXACT_GGM_DEFAULT_CAP = 7


@dataclass(frozen=True)
class ExactState:
    """Full amplitude vector, indexed by the base-d digits of eta."""

    chain: ChainSpec
    time: float
    amplitudes: np.ndarray

    @property
    def digits(self) -> np.ndarray:
        """(d^N, N) array of computational-basis digits."""
        return _digits(self.chain.local_dim, self.chain.n_sites)


@dataclass(frozen=True)
class Bipartition:
    part_a: tuple[int, ...]
    part_b: tuple[int, ...]

    @classmethod
    def of(cls, n_sites: int, part_a: Sequence[int]) -> "Bipartition":
        a = tuple(sorted(set(part_a)))
        b = tuple(s for s in range(1, n_sites + 1) if s not in set(a))
        if not a or not b:
            raise DomainError("both parts of a bipartition must be non-empty")
        if any(not 1 <= s <= n_sites for s in a):
            raise DomainError(f"sites {a} outside [1, {n_sites}]")
        return cls(a, b)


@dataclass(frozen=True)
class MeasurementReduction:
    """Outcome of a generalized-Z measurement on one site.

    ``local_phases[i]`` is the diagonal of the leftover single-site unitary
    on remaining site ``i`` (entry mu -> exp(i mu m phi_ik)); applying the
    inverses maps ``residual`` onto the (N-1)-qudit weighted graph state.
    """

    measured_site: int
    outcome: int
    probability: float
    residual: ExactState
    local_phases: dict[int, np.ndarray]


def _digits(d: int, n: int) -> np.ndarray:
    eta = np.arange(d**n)
    powers = d ** np.arange(n - 1, -1, -1)
    return (eta[:, None] // powers[None, :]) % d


def _pairwise_phase_exponent(chain: ChainSpec, digits: np.ndarray) -> np.ndarray:
    """sum_{i<j} a_i a_j g_ij for every basis state; multiply by t for phases."""
    n = chain.n_sites
    expo = np.zeros(digits.shape[0])
    for i in range(1, n + 1):
        for j in range(i + 1, n + 1):
            g = chain.coupling(i, j)
            if g != 0.0:
                expo += g * digits[:, i - 1] * digits[:, j - 1]
    return expo


def build_state(model: PhaseModel) -> ExactState:
    """Weighted graph state amplitudes d^{-N/2} * exp(i t sum a_i a_j g_ij)."""
    chain = model.chain
    d, n = chain.local_dim, chain.n_sites
    if d**n > AMPLITUDE_CAP:
        raise ResourceLimitError(
            f"statevector of d^N = {d}^{n} entries exceeds the cap {AMPLITUDE_CAP}"
        )
    digits = _digits(d, n)
    expo = _pairwise_phase_exponent(chain, digits)
    amps = np.exp(1j * model.time * expo) * d ** (-n / 2)
    return ExactState(chain=chain, time=model.time, amplitudes=amps)


def _amplitude_matrix(state: ExactState, part_a: Sequence[int]) -> np.ndarray:
    """Amplitudes reshaped to (d^|A|, d^|B|) with A's sites leading."""
    d, n = state.chain.local_dim, state.chain.n_sites
    a = tuple(sorted(set(part_a)))
    if not a or any(not 1 <= s <= n for s in a):
        raise DomainError(f"invalid subsystem {part_a}")
    b = [s for s in range(1, n + 1) if s not in set(a)]
    if not b:
        raise DomainError("subsystem must be a proper subset of the chain")
    tensor = state.amplitudes.reshape((d,) * n)
    order = [s - 1 for s in a] + [s - 1 for s in b]
    return tensor.transpose(order).reshape(d ** len(a), d ** len(b))


def partial_trace(state: ExactState, sites: Sequence[int]) -> np.ndarray:
    """rho_A by explicit summation over the complement's indices."""
    mat = _amplitude_matrix(state, sites)
    return mat @ mat.conj().T


def schmidt_spectrum(state: ExactState, cut: Bipartition) -> np.ndarray:
    """Squared Schmidt coefficients across the cut, non-increasing."""
    mat = _amplitude_matrix(state, cut.part_a)
    try:
        sing = np.linalg.svd(mat, compute_uv=False)
    except np.linalg.LinAlgError as exc:
        raise NumericalError(f"SVD failed on a {mat.shape} amplitude matrix") from exc
    lam = np.clip(sing, 0.0, None) ** 2
    total = lam.sum()
    if abs(total - 1.0) > 1e-9:
        raise NumericalError(f"Schmidt spectrum sums to {total}, expected 1")
    return np.sort(lam)[::-1]


def bipartitions(n_sites: int) -> Iterator[Bipartition]:
    """All 2^{N-1} - 1 bipartitions, deduplicated by keeping site 1 in A."""
    rest = list(range(2, n_sites + 1))
    for mask in range(2 ** (n_sites - 1) - 1):
        part_a = [1] + [rest[k] for k in range(n_sites - 1) if mask >> k & 1]
        yield Bipartition.of(n_sites, part_a)


def _max_schmidt_sq(state: ExactState, part_a: Sequence[int]) -> float:
    """Largest squared Schmidt coefficient via the smaller side's Gram matrix."""
    d, n = state.chain.local_dim, state.chain.n_sites
    a = part_a if len(part_a) * 2 <= n else [
        s for s in range(1, n + 1) if s not in set(part_a)
    ]
    mat = _amplitude_matrix(state, a)
    gram = mat @ mat.conj().T
    return float(np.linalg.eigvalsh(gram)[-1])


def exact_ggm(state: ExactState) -> float:
    """1 minus the largest squared Schmidt coefficient over all bipartitions."""
    d, n = state.chain.local_dim, state.chain.n_sites
    cap = EXACT_GGM_SITE_CAP.get(d, _EXACT_GGM_DEFAULT_CAP)
    if n > cap:
        raise ResourceLimitError(
            f"exhaustive bipartition scan capped at N <= {cap} for d = {d}"
        )
    best = max(_max_schmidt_sq(state, cut.part_a) for cut in bipartitions(n))
    return 1.0 - best


def measure_reduce(state: ExactState, site: int, outcome: int) -> MeasurementReduction:
    """Project ``site`` onto computational-basis state ``outcome``.

    Asserts the flat-amplitude consequence that every outcome occurs with
    probability exactly 1/d before renormalizing.
    """
    chain = state.chain
    d, n = chain.local_dim, chain.n_sites
    if not 1 <= site <= n:
        raise DomainError(f"site {site} outside [1, {n}]")
    if not 0 <= outcome < d:
        raise DomainError(f"outcome {outcome} outside [0, {d - 1}]")
    if n < 3:
        raise DomainError("residual chain must keep at least 2 sites")

    tensor = state.amplitudes.reshape((d,) * n)
    projected = np.moveaxis(tensor, site - 1, 0)[outcome].ravel()
    prob = float(np.vdot(projected, projected).real)
    if abs(prob - 1.0 / d) > 1e-12:
        raise NumericalError(
            f"outcome probability {prob} deviates from 1/d = {1.0 / d}"
        )
    residual_amps = projected * np.sqrt(d)

    remaining = [s for s in range(1, n + 1) if s != site]
    reduced_chain = _restricted_chain(chain, remaining)
    residual = ExactState(
        chain=reduced_chain, time=state.time, amplitudes=residual_amps
    )
    mu = np.arange(d)
    local_phases = {
        s: np.exp(1j * mu * outcome * chain.coupling(s, site) * state.time)
        for s in remaining
    }
    return MeasurementReduction(
        measured_site=site,
        outcome=outcome,
        probability=prob,
        residual=residual,
        local_phases=local_phases,
    )


def _restricted_chain(chain: ChainSpec, remaining: Sequence[int]) -> ChainSpec:
    """Descriptor for the residual lattice (couplings keep original distances).

    Removing an interior site leaves non-uniform distances, which ChainSpec
    cannot represent directly; callers compare against a reference state built
    on the restricted phase model instead (see restricted_state).
    """
    return ChainSpec(
        n_sites=len(remaining),
        local_dim=chain.local_dim,
        alpha=chain.alpha,
        max_range=chain.max_range,
    )


def restricted_state(model: PhaseModel, keep: Sequence[int]) -> ExactState:
    """WGS on a site subset, with couplings inherited from original positions."""
    chain = model.chain
    d = chain.local_dim
    keep = sorted(set(keep))
    if len(keep) < 2 or any(not 1 <= s <= chain.n_sites for s in keep):
        raise DomainError(f"invalid site subset {keep}")
    m = len(keep)
    if d**m > AMPLITUDE_CAP:
        raise ResourceLimitError("restricted statevector exceeds the cap")
    digits = _digits(d, m)
    expo = np.zeros(digits.shape[0])
    for ki in range(m):
        for kj in range(ki + 1, m):
            g = chain.coupling(keep[ki], keep[kj])
            if g != 0.0:
                expo += g * digits[:, ki] * digits[:, kj]
    amps = np.exp(1j * model.time * expo) * d ** (-m / 2)
    return ExactState(
        chain=_restricted_chain(chain, keep), time=model.time, amplitudes=amps
    )

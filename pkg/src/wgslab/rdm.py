"""Closed-form reduced density matrices of the weighted graph state.

Every RDM entry factorizes into an intra-subsystem phase and a product of
environment factors, one per traced-out site:

    rho[a, b] = (1/d^m) * w(a) * conj(w(b)) * prod_l f_l(a - b)

with ``w(a) = prod_{k<k'} exp(i a_k a_k' phi_kk')`` over pairs inside the
subsystem and ``f_l(x) = (1/d) sum_p exp(i p x)`` evaluated at
``x = sum_k (a_k - b_k) phi_kl``.  This costs O(d^{2m} * N) per matrix and
never builds the global statevector, which is what makes thousand-site
sweeps affordable.

The environment factor only depends on the component-wise difference
``a - b``, so it is evaluated once per distinct difference vector
((2d-1)^m of them) and gathered into the d^m x d^m matrix.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .chain import ChainSpec, PhaseModel, subsystem_size_limit
from .errors import DomainError, NumericalError, ResourceLimitError

# Delta-vector chunking keeps the (chunk x N) phase workspaces below ~100 MB.
_DELTA_CHUNK = 8192
_TIME_CHUNK = 64

PSD_TOL = 1e-10


@dataclass(frozen=True)
class SubsystemSpec:
    """A strictly increasing tuple of 1-based site indices within a chain."""

    sites: tuple[int, ...]
    chain: ChainSpec

    def __post_init__(self) -> None:
        if len(self.sites) < 1:
            raise DomainError("subsystem must contain at least one site")
        if any(not 1 <= s <= self.chain.n_sites for s in self.sites):
            raise DomainError(f"site indices {self.sites} outside chain")
        if any(b <= a for a, b in zip(self.sites, self.sites[1:])):
            raise DomainError("site indices must be strictly increasing")
        limit = subsystem_size_limit(self.chain.local_dim)
        if len(self.sites) > limit:
            raise ResourceLimitError(
                f"subsystem of {len(self.sites)} sites exceeds the size limit "
                f"{limit} for local dimension {self.chain.local_dim}"
            )

    @property
    def dim(self) -> int:
        return self.chain.local_dim ** len(self.sites)


def coherence_factor(x: np.ndarray, d: int) -> np.ndarray:
    """Environment factor ``(1/d) sum_{p=0}^{d-1} exp(i p x)`` for array x.

    Evaluated through the closed geometric form
    ``exp(i (d-1) x / 2) * sin(d x / 2) / (d sin(x / 2))`` with the limit 1
    taken at multiples of 2*pi.
    """
    x = np.asarray(x, dtype=float)
    half = 0.5 * x
    num = np.sin(d * half)
    den = d * np.sin(half)
    singular = np.abs(den) < 1e-9 * d
    with np.errstate(invalid="ignore", divide="ignore"):
        mag = np.where(singular, np.cos(d * half) / np.cos(half), num / den)
    return np.exp(1j * (d - 1) * half) * mag


def _multi_indices(d: int, m: int) -> np.ndarray:
    """All d^m digit tuples as an (d^m, m) array, most-significant first."""
    grids = np.meshgrid(*([np.arange(d)] * m), indexing="ij")
    return np.stack([g.ravel() for g in grids], axis=1)


def _intra_phase_coeffs(chain: ChainSpec, sites: Sequence[int], idx: np.ndarray) -> np.ndarray:
    """q[a] with w(a, t) = exp(i t q[a]) from couplings inside the subsystem."""
    m = len(sites)
    q = np.zeros(idx.shape[0])
    for k in range(m):
        for kp in range(k + 1, m):
            q += idx[:, k] * idx[:, kp] * chain.coupling(sites[k], sites[kp])
    return q


def _environment_couplings(chain: ChainSpec, sites: Sequence[int]) -> np.ndarray:
    """(m, n_env) matrix of couplings between subsystem and environment sites."""
    inside = set(sites)
    env = np.array([s for s in range(1, chain.n_sites + 1) if s not in inside])
    if env.size == 0:
        return np.zeros((len(sites), 0))
    return np.stack([chain.coupling_profile(s, env) for s in sites])


def rdm_series(
    chain: ChainSpec, sites: Sequence[int], times: np.ndarray
) -> np.ndarray:
    """Subsystem RDMs at each time, shape (len(times), d^m, d^m).

    Vectorized over the time grid; this is the workhorse behind every
    time-averaged measure.
    """
    spec = SubsystemSpec(tuple(sites), chain)
    d = chain.local_dim
    m = len(spec.sites)
    dim = spec.dim
    times = np.atleast_1d(np.asarray(times, dtype=float))
    n_t = times.size

    idx = _multi_indices(d, m)
    q = _intra_phase_coeffs(chain, spec.sites, idx)
    g_env = _environment_couplings(chain, spec.sites)

    # Environment product per distinct difference vector a - b.
    n_delta = (2 * d - 1) ** m
    deltas = _multi_indices(2 * d - 1, m) - (d - 1)
    theta = deltas @ g_env  # (n_delta, n_env)

    # key[a, b] = mixed-radix code of (a - b), used to gather env products.
    radix = (2 * d - 1) ** np.arange(m - 1, -1, -1)
    key = ((idx[:, None, :] - idx[None, :, :]) + (d - 1)) @ radix

    rho = np.empty((n_t, dim, dim), dtype=complex)
    for s in range(0, n_t, _TIME_CHUNK):
        ts = times[s : s + _TIME_CHUNK]
        env = np.ones((ts.size, n_delta), dtype=complex)
        for c in range(0, n_delta, _DELTA_CHUNK):
            th = theta[c : c + _DELTA_CHUNK]
            x = ts[:, None, None] * th[None, :, :]
            env[:, c : c + _DELTA_CHUNK] = np.prod(coherence_factor(x, d), axis=2)
        w = np.exp(1j * np.outer(ts, q))
        block = (w[:, :, None] * w[:, None, :].conj()) * env[:, key] / dim
        rho[s : s + _TIME_CHUNK] = block

    # Enforce exact Hermiticity and a flat diagonal: mirror the upper triangle.
    upper = np.triu_indices(dim, k=1)
    rho[:, upper[1], upper[0]] = rho[:, upper[0], upper[1]].conj()
    rho[:, np.arange(dim), np.arange(dim)] = 1.0 / dim
    return rho


def build_rdm(model: PhaseModel, sites: Sequence[int]) -> np.ndarray:
    """Closed-form RDM of ``sites`` at the model's time, shape (d^m, d^m)."""
    return rdm_series(model.chain, sites, np.array([model.time]))[0]


def rdm_entry(
    model: PhaseModel,
    sites: Sequence[int],
    a: Sequence[int],
    b: Sequence[int],
) -> complex:
    """Single RDM entry without assembling the full matrix."""
    spec = SubsystemSpec(tuple(sites), model.chain)
    d = model.chain.local_dim
    m = len(spec.sites)
    a = np.asarray(a, dtype=int)
    b = np.asarray(b, dtype=int)
    if a.shape != (m,) or b.shape != (m,):
        raise DomainError(f"multi-indices must have length {m}")
    if np.any((a < 0) | (a >= d)) or np.any((b < 0) | (b >= d)):
        raise DomainError(f"multi-index components must lie in [0, {d - 1}]")

    t = model.time
    intra = 0.0
    for k in range(m):
        for kp in range(k + 1, m):
            g = model.chain.coupling(spec.sites[k], spec.sites[kp])
            intra += (a[k] * a[kp] - b[k] * b[kp]) * g
    g_env = _environment_couplings(model.chain, spec.sites)
    theta = (a - b) @ g_env
    env = np.prod(coherence_factor(t * theta, d)) if theta.size else 1.0
    return complex(np.exp(1j * t * intra) * env / spec.dim)


def spectrum(rho: np.ndarray, psd_tol: float = PSD_TOL) -> np.ndarray:
    """Eigenvalues of a Hermitian density matrix, non-increasing, clamped.

    Raises NumericalError if the matrix fails the PSD tolerance check before
    clamping round-off negatives to zero.
    """
    rho = np.asarray(rho)
    try:
        eigs = np.linalg.eigvalsh(rho)
    except np.linalg.LinAlgError as exc:
        diag = np.abs(np.diagonal(rho, axis1=-2, axis2=-1))
        raise NumericalError(
            f"eigendecomposition failed (dim={rho.shape[-1]}, "
            f"max |diag|={diag.max():.3e})"
        ) from exc
    if eigs.min() < -psd_tol:
        raise NumericalError(
            f"density matrix not positive semidefinite: min eigenvalue "
            f"{eigs.min():.3e} below -{psd_tol:.0e}"
        )
    return np.clip(eigs[..., ::-1], 0.0, 1.0)


def entropy(eigenvalues: np.ndarray) -> float | np.ndarray:
    """Von Neumann entropy in bits, with 0 * log 0 := 0.

    Accepts a batch of spectra (entropy taken over the last axis).
    """
    lam = np.clip(np.asarray(eigenvalues, dtype=float), 0.0, 1.0)
    with np.errstate(divide="ignore", invalid="ignore"):
        terms = np.where(lam > 0.0, lam * np.log2(lam), 0.0)
    result = -terms.sum(axis=-1)
    return float(result) if result.ndim == 0 else result

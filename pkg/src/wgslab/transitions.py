"""Fall-off-rate transition detectors.

Locates the non-local to quasi-local transition alpha*_d two independent
ways: the quadratic coefficient of the time-averaged mutual-information
scaling fit, and discontinuous jumps in the alpha- or time-derivative of the
edge-site GGM at t = 2*pi.  Also quantifies the quasi-local to local
crossover through saturation of the time-averaged GGM with system size.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import exact
from .chain import ChainSpec, PhaseModel
from .errors import DomainError
from .measures import (
    default_quadrature_step,
    ggm_edge,
    ggm_edge_time_average,
    mi_time_average,
)
from .rdm import coherence_factor, spectrum

MI_FLOOR = 1e-14
FIT_DEPARTURE_THRESHOLD = 0.02
JUMP_NOISE_FACTOR = 5.0


@dataclass(frozen=True)
class FitResult:
    """Coefficients of log2<I> = -a (log2 r)^2 - b (log2 r) + c."""

    a_tilde: float
    b_tilde: float
    c_tilde: float
    residual_rms: float
    r_range: tuple[int, int]
    n_excluded: int = 0


class DerivativeKind(enum.Enum):
    ALPHA = "alpha"
    TIME = "time"


@dataclass(frozen=True)
class DerivativeSeries:
    alphas: np.ndarray
    values: np.ndarray
    kind: DerivativeKind
    local_dim: int = 0


@dataclass(frozen=True)
class TransitionReport:
    local_dim: int
    alpha_star: float
    method: str
    jump_magnitude: float
    grid_resolution: float
    found: bool = True


@dataclass(frozen=True)
class SaturationReport:
    local_dim: int
    alphas: np.ndarray
    g_avg: np.ndarray
    plateau_value: float
    alpha_plateau: float
    n_sat_table: list[tuple[float, float, int | None]]
    alpha_sat_estimate: float | None


@dataclass(frozen=True)
class NSatResult:
    n_sat: int | None
    literal_n_sat: int | None
    saturated: bool


def fit_mi_scaling(
    points: Sequence[tuple[float, float]], r_min: int = 1, r_max: int = 15
) -> FitResult:
    """Least squares of the averaged-MI scaling on the quadratic log model.

    Averages at or below the floor 1e-14 are dropped (logs would inject fake
    curvature); fewer than 4 usable points is a domain error.
    """
    usable = [(r, v) for r, v in points if r_min <= r <= r_max and v > MI_FLOOR]
    n_excluded = sum(1 for r, v in points if r_min <= r <= r_max) - len(usable)
    if len(usable) < 4:
        raise DomainError(f"need >= 4 usable points, got {len(usable)}")
    r = np.array([p[0] for p in usable], dtype=float)
    y = np.log2(np.array([p[1] for p in usable]))
    x = np.log2(r)
    design = np.stack([x**2, x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    resid = y - design @ coef
    return FitResult(
        a_tilde=-coef[0],
        b_tilde=-coef[1],
        c_tilde=coef[2],
        residual_rms=float(np.sqrt(np.mean(resid**2))),
        r_range=(r_min, r_max),
        n_excluded=n_excluded,
    )


def mi_scaling_points(
    chain: ChainSpec,
    t0: float,
    r_values: Sequence[int] = range(1, 16),
    step: float | None = None,
    anchor: int | None = 1,
) -> list[tuple[float, float]]:
    """(r, <I>_t) pairs for the scaling fit.

    Pairs are edge-anchored by default: the centered-pair convention produces
    a spurious quadratic coefficient well below the transition (checked at
    both N = 1000 and N = 4000), while anchored pairs reproduce the known
    vanishing-coefficient regime.
    """
    return [
        (float(r), mi_time_average(chain, r, t0, step=step, anchor=anchor).value)
        for r in r_values
    ]


def a_tilde(
    chain: ChainSpec,
    t0: float = 15 * np.pi,
    r_values: Sequence[int] = range(1, 16),
    step: float | None = None,
    anchor: int | None = 1,
) -> float:
    """Quadratic fit coefficient for one chain configuration."""
    points = mi_scaling_points(chain, t0, r_values, step=step, anchor=anchor)
    return fit_mi_scaling(points, int(min(r_values)), int(max(r_values))).a_tilde


def alpha_star_from_fit(
    n_sites: int,
    local_dim: int,
    alphas: Sequence[float],
    t0: float = 15 * np.pi,
    threshold: float = FIT_DEPARTURE_THRESHOLD,
    refine_to: float | None = None,
    **kwargs,
) -> TransitionReport:
    """alpha* as the departure point of the fit coefficient from zero.

    Takes the largest grid alpha with |a_tilde| below ``threshold`` followed
    only by above-threshold values, optionally bisecting the bracketing
    interval down to ``refine_to``.
    """
    alphas = np.asarray(sorted(alphas), dtype=float)
    if alphas.size < 2:
        raise DomainError("alpha grid must contain at least 2 points")
    values = np.array(
        [a_tilde(ChainSpec(n_sites, local_dim, a), t0, **kwargs) for a in alphas]
    )
    below = np.abs(values) < threshold
    if below.all() or not below.any():
        return TransitionReport(
            local_dim=local_dim,
            alpha_star=float("nan"),
            method="fit_coefficient",
            jump_magnitude=0.0,
            grid_resolution=float(np.diff(alphas).max()),
            found=False,
        )
    last_below = int(np.max(np.nonzero(below)[0]))
    if last_below == alphas.size - 1:
        return TransitionReport(
            local_dim=local_dim,
            alpha_star=float("nan"),
            method="fit_coefficient",
            jump_magnitude=0.0,
            grid_resolution=float(np.diff(alphas).max()),
            found=False,
        )
    lo, hi = alphas[last_below], alphas[last_below + 1]
    if refine_to is not None:
        while hi - lo > refine_to:
            mid = 0.5 * (lo + hi)
            v = a_tilde(ChainSpec(n_sites, local_dim, mid), t0, **kwargs)
            if abs(v) < threshold:
                lo = mid
            else:
                hi = mid
    return TransitionReport(
        local_dim=local_dim,
        alpha_star=float(lo),
        method="fit_coefficient",
        jump_magnitude=float(abs(values[last_below + 1]) - abs(values[last_below])),
        grid_resolution=float(hi - lo),
    )


def central_difference(f, x: float, h: float) -> float:
    """Second-order central difference (f(x + h) - f(x - h)) / 2h."""
    return (f(x + h) - f(x - h)) / (2.0 * h)


def ggm_derivative(
    kind: DerivativeKind,
    n_sites: int,
    local_dim: int,
    alphas: Sequence[float],
    h: float = 1e-3,
    t: float = 2 * np.pi,
    time_step: float = 1e-4,
) -> DerivativeSeries:
    """Central-difference derivative of the edge GGM on an alpha grid.

    ALPHA differentiates with respect to the fall-off rate at fixed t;
    TIME differentiates with respect to time at t per grid point.
    """
    alphas = np.asarray(alphas, dtype=float)
    if kind is DerivativeKind.ALPHA and h > 1e-3:
        raise DomainError("alpha-derivative step must be <= 1e-3")
    values = np.empty_like(alphas)
    for i, a in enumerate(alphas):
        if kind is DerivativeKind.ALPHA:
            hi = ggm_edge(PhaseModel(ChainSpec(n_sites, local_dim, a + h), t))
            lo = ggm_edge(PhaseModel(ChainSpec(n_sites, local_dim, max(a - h, 0.0)), t))
            values[i] = (hi - lo) / (h + min(h, a))
        else:
            chain = ChainSpec(n_sites, local_dim, a)
            hi = ggm_edge(PhaseModel(chain, t + time_step))
            lo = ggm_edge(PhaseModel(chain, t - time_step))
            values[i] = (hi - lo) / (2 * time_step)
    return DerivativeSeries(alphas=alphas, values=values, kind=kind, local_dim=local_dim)


def detect_jump(
    series: DerivativeSeries, noise_factor: float = JUMP_NOISE_FACTOR
) -> TransitionReport:
    """Locate the discontinuity of a derivative series on a uniform grid.

    Picks the interval with the largest forward difference in magnitude and
    requires it to clear ``noise_factor`` times the median forward
    difference; otherwise the no-transition flag is set.  (The jump at
    alpha*_d is downward -- the derivative drops from positive to negative --
    so magnitude, not sign, is what identifies it.)
    """
    alphas, values = series.alphas, series.values
    if alphas.size < 10:
        raise DomainError("derivative series must have >= 10 points")
    steps = np.diff(alphas)
    if not np.allclose(steps, steps[0], rtol=1e-6, atol=1e-12):
        raise DomainError("derivative series must sit on a uniform grid")
    fd = np.diff(values)
    i = int(np.argmax(np.abs(fd)))
    magnitude = float(np.abs(fd[i]))
    noise_floor = float(np.median(np.abs(fd)))
    local_dim = series.local_dim
    method = (
        "alpha_derivative_jump"
        if series.kind is DerivativeKind.ALPHA
        else "time_derivative_jump"
    )
    if magnitude <= noise_factor * noise_floor:
        return TransitionReport(
            local_dim=local_dim,
            alpha_star=float("nan"),
            method=method,
            jump_magnitude=magnitude,
            grid_resolution=float(steps[0]),
            found=False,
        )
    return TransitionReport(
        local_dim=local_dim,
        alpha_star=float(0.5 * (alphas[i] + alphas[i + 1])),
        method=method,
        jump_magnitude=magnitude,
        grid_resolution=float(steps[0]),
    )


def alpha_star_scan(
    n_sites: int,
    local_dim: int,
    kind: DerivativeKind = DerivativeKind.ALPHA,
    alpha_min: float = 0.2,
    alpha_max: float = 3.5,
    coarse_step: float = 0.05,
    fine_step: float = 0.005,
    window: float = 0.2,
) -> TransitionReport:
    """Coarse scan for the derivative jump, then a fine rescan around it."""
    coarse_grid = _uniform_grid(alpha_min, coarse_step, alpha_max)
    coarse = detect_jump(ggm_derivative(kind, n_sites, local_dim, coarse_grid))
    if not coarse.found:
        return TransitionReport(
            local_dim=local_dim,
            alpha_star=float("nan"),
            method=coarse.method,
            jump_magnitude=coarse.jump_magnitude,
            grid_resolution=coarse_step,
            found=False,
        )
    lo = max(alpha_min, coarse.alpha_star - window)
    fine_grid = _uniform_grid(lo, fine_step, coarse.alpha_star + window)
    report = detect_jump(ggm_derivative(kind, n_sites, local_dim, fine_grid))
    return TransitionReport(
        local_dim=local_dim,
        alpha_star=report.alpha_star,
        method=report.method,
        jump_magnitude=report.jump_magnitude,
        grid_resolution=fine_step,
        found=report.found,
    )


def _uniform_grid(start: float, step: float, stop: float) -> np.ndarray:
    """Grid defined by (start, step, count); never floating accumulation."""
    count = int(np.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def scaling_law_fit(
    points: Sequence[tuple[int, float]],
) -> tuple[float, float, float]:
    """Least squares of detected alpha* on log2(d): (slope, intercept, rms)."""
    if len(points) < 4:
        raise DomainError(f"need >= 4 (d, alpha*) pairs, got {len(points)}")
    d = np.array([p[0] for p in points], dtype=float)
    if np.unique(d).size < 2:
        raise DomainError("degenerate input: all local dimensions equal")
    alpha = np.array([p[1] for p in points], dtype=float)
    x = np.log2(d)
    design = np.stack([x, np.ones_like(x)], axis=1)
    coef, *_ = np.linalg.lstsq(design, alpha, rcond=None)
    resid = alpha - design @ coef
    return float(coef[0]), float(coef[1]), float(np.sqrt(np.mean(resid**2)))


def avg_ggm_vs_n(
    local_dim: int,
    alpha: float,
    n_max: int,
    t0: float = 3 * np.pi,
    step: float | None = None,
    max_range: int | None = None,
) -> np.ndarray:
    """Time-averaged edge GGM for every N in [2, n_max], shape (n_max + 1,).

    Grows the chain one site at a time, updating the running environment
    product of the edge site's RDM; cost O(d * n_t) per added site, which is
    what makes the N_sat scans cheap.  Entries 0 and 1 are NaN.
    """
    d = local_dim
    step = step if step is not None else default_quadrature_step(d)
    n_t = max(1, int(round(t0 / step)))
    times = np.linspace(0.0, t0, n_t + 1)
    deltas = np.arange(1, d, dtype=float)
    running = np.ones((d - 1, times.size), dtype=complex)
    out = np.full(n_max + 1, np.nan)
    rho = np.empty((times.size, d, d), dtype=complex)
    rows, cols = np.indices((d, d))
    offset = rows - cols  # Toeplitz structure: entries depend on k - l only
    for n in range(2, n_max + 1):
        dist = n - 1
        g = 0.0 if (max_range is not None and dist > max_range) else float(dist) ** -alpha
        running *= coherence_factor(np.outer(deltas * g, times), d)
        c = np.concatenate([np.ones((1, times.size)), running], axis=0) / d
        rho[:] = c[np.abs(offset)].transpose(2, 0, 1)
        lower = offset < 0
        rho[:, lower] = np.conj(rho[:, lower])
        lam = spectrum(rho)[:, 0]
        out[n] = np.trapezoid(1.0 - lam, times) / t0
    return out


def n_sat_from_sequence(
    g_avg: np.ndarray,
    epsilon: float,
    window: int = 5,
    n_min: int = 10,
) -> NSatResult:
    """Saturation size from a <G>(N) sequence indexed by N.

    ``n_sat`` is the smallest N >= n_min whose next ``window`` successive
    differences all stay below epsilon (the literal single-difference
    definition is fragile under oscillation and reported alongside).
    """
    if window < 1:
        raise DomainError("window must be >= 1")
    diffs = np.abs(np.diff(g_avg))  # diffs[n] = |<G>(n+1) - <G>(n)|
    literal = None
    n_sat = None
    for n in range(n_min, diffs.size):
        if literal is None and diffs[n] < epsilon:
            literal = n
        if n + window <= diffs.size and np.all(diffs[n : n + window] < epsilon):
            n_sat = n
            break
    return NSatResult(n_sat=n_sat, literal_n_sat=literal, saturated=n_sat is not None)


def n_sat(
    local_dim: int,
    alpha: float,
    epsilon: float,
    t0: float = 3 * np.pi,
    window: int = 5,
    n_min: int = 10,
    n_cap: int = 400,
    step: float | None = None,
) -> NSatResult:
    """Smallest chain size beyond which <G>_t stops changing by epsilon."""
    g_avg = avg_ggm_vs_n(local_dim, alpha, n_cap, t0=t0, step=step)
    return n_sat_from_sequence(g_avg, epsilon, window=window, n_min=n_min)


def saturation_report(
    local_dim: int,
    alphas: Sequence[float],
    n_sites: int = 1000,
    t0: float = 3 * np.pi,
    epsilons: Sequence[float] = (1e-2, 1e-3, 1e-4, 1e-5),
    plateau_tol: float = 1e-3,
    n_cap: int = 400,
    step: float | None = None,
) -> SaturationReport:
    """<G>_t(alpha) curve, its plateau, and the N_sat table per epsilon."""
    alphas = np.asarray(sorted(alphas), dtype=float)
    chain_avg = [
        ggm_edge_time_average(ChainSpec(n_sites, local_dim, a), t0, step=step).value
        for a in alphas
    ]
    g_avg = np.array(chain_avg)
    plateau_value = float(g_avg[-1])
    alpha_plateau = float(alphas[-1])
    for i in range(alphas.size - 1):
        if np.all(np.abs(np.diff(g_avg[i:])) < plateau_tol):
            alpha_plateau = float(alphas[i])
            break

    table: list[tuple[float, float, int | None]] = []
    per_alpha: dict[float, list[int | None]] = {}
    for a in alphas:
        seq = avg_ggm_vs_n(local_dim, float(a), n_cap, t0=t0, step=step)
        sats = [n_sat_from_sequence(seq, eps).n_sat for eps in epsilons]
        per_alpha[float(a)] = sats
        table.extend((float(a), float(eps), s) for eps, s in zip(epsilons, sats))

    eps_independent = [
        None not in per_alpha[float(a)] and len(set(per_alpha[float(a)])) == 1
        for a in alphas
    ]
    alpha_sat = None
    for i, a in enumerate(alphas):
        if all(eps_independent[i:]):
            alpha_sat = float(a)
            break
    return SaturationReport(
        local_dim=local_dim,
        alphas=alphas,
        g_avg=g_avg,
        plateau_value=plateau_value,
        alpha_plateau=alpha_plateau,
        n_sat_table=table,
        alpha_sat_estimate=alpha_sat,
    )


def ggm_approx_error(
    local_dim: int,
    n_values: Sequence[int],
    alpha: float,
    t0: float = 3 * np.pi,
    step: float = np.pi / 16,
) -> list[tuple[int, float]]:
    """Time-averaged |exact GGM - edge GGM| per system size.

    The exact value scans every bipartition of the statevector; the step
    default trades quadrature resolution for the heavy exhaustive scans
    (halving it moves the averages by well under the 1e-3 scale of
    interest).
    """
    n_t = max(1, int(round(t0 / step)))
    times = np.linspace(0.0, t0, n_t + 1)
    out = []
    for n in n_values:
        diffs = np.empty(times.size)
        for k, t in enumerate(times):
            state = exact.build_state(PhaseModel(ChainSpec(n, local_dim, alpha), t))
            g_exact = exact.exact_ggm(state)
            rho1 = exact.partial_trace(state, (1,))
            g_edge = 1.0 - float(np.linalg.eigvalsh(rho1)[-1])
            diffs[k] = abs(g_exact - g_edge)
        out.append((int(n), float(np.trapezoid(diffs, times) / t0)))
    return out

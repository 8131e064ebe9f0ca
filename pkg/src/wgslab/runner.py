"""Configuration-driven experiment sweeps with CSV + JSON persistence.

Each experiment evaluates a grid of chain configurations, gathers rows in a
deterministic order (parallel workers write into indexed slots, never
append), and persists a CSV data table plus a JSON sidecar carrying the full
config echo, derived scalars, and convergence flags.  Identical config and
code version reruns are served from a content-addressed cache.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Callable, Sequence

import numpy as np

from . import __version__, exact
from .chain import ChainSpec, PhaseModel, subsystem_size_limit
from .errors import DomainError, ResourceLimitError
from .measures import (
    block_entropy,
    default_quadrature_step,
    ggm_edge_series,
    mi_series,
    mi_time_average,
    u_l_bound,
)
from .rdm import build_rdm
from .transitions import (
    DerivativeKind,
    a_tilde,
    alpha_star_from_fit,
    alpha_star_scan,
    ggm_approx_error,
    n_sat,
    saturation_report,
)

EXPERIMENTS = (
    "entropy",
    "mi-time",
    "mi-average",
    "ggm-time",
    "alpha-star-fit",
    "alpha-star-jump",
    "saturation",
    "nsat",
    "approx-error",
    "validate",
)

# Sub-block lengths used for the entropy upper bound per local dimension.
_U_L_SUB_LEN = {2: 5, 3: 3, 4: 2}

_DEFAULT_T0 = {
    "mi-average": 15 * np.pi,
    "alpha-star-fit": 15 * np.pi,
    "saturation": 3 * np.pi,
    "nsat": 3 * np.pi,
    "approx-error": 3 * np.pi,
    "ggm-time": 2.5 * np.pi,
    "mi-time": 2.5 * np.pi,
}


@dataclass
class SweepConfig:
    experiment: str
    n_sites: int = 1000
    local_dim: int = 2
    alpha: tuple[float, float, int] = (0.5, 2.0, 3)  # (start, step, count)
    t0: float | None = None
    time_step: float | None = None
    r_values: tuple[int, ...] = tuple(range(1, 16))
    block_lengths: tuple[int, ...] = ()
    sub_len: int | None = None
    fixed_time: float = 0.5
    epsilons: tuple[float, ...] = (1e-2, 1e-3, 1e-4, 1e-5)
    n_values: tuple[int, ...] = ()
    n_trials: int = 200
    out_dir: str = "results"
    jobs: int = 1
    seed: int = 0
    use_cache: bool = True

    def __post_init__(self) -> None:
        if self.experiment not in EXPERIMENTS:
            raise DomainError(
                f"unknown experiment {self.experiment!r}; choose from {EXPERIMENTS}"
            )
        if self.alpha[2] < 1:
            raise DomainError("alpha grid must contain at least one point")
        if self.jobs < 1:
            raise DomainError("jobs must be >= 1")

    @property
    def alphas(self) -> np.ndarray:
        start, step, count = self.alpha
        return start + step * np.arange(count)

    def resolved_t0(self) -> float:
        if self.t0 is not None:
            return self.t0
        return _DEFAULT_T0.get(self.experiment, 2.5 * np.pi)

    def canonical(self) -> dict:
        raw = asdict(self)
        raw["t0"] = self.resolved_t0()
        return raw


@dataclass
class ResultTable:
    experiment: str
    columns: list[str]
    rows: list[tuple]
    derived: dict = field(default_factory=dict)
    incomplete: bool = False


def _fmt(value) -> str:
    if isinstance(value, float):
        return format(value, ".17g")
    if value is None:
        return ""
    return str(value)


def config_hash(config: SweepConfig) -> str:
    payload = json.dumps(
        {"config": config.canonical(), "version": __version__}, sort_keys=True
    )
    return hashlib.sha256(payload.encode()).hexdigest()


def _indexed_map(fn: Callable, items: Sequence, jobs: int) -> list:
    """Parallel map with a deterministic gather into indexed slots."""
    if jobs <= 1 or len(items) <= 1:
        return [fn(item) for item in items]
    results = [None] * len(items)
    with ThreadPoolExecutor(max_workers=jobs) as pool:
        futures = {pool.submit(fn, item): i for i, item in enumerate(items)}
        for future, i in futures.items():
            results[i] = future.result()
    return results


def _time_grid(t0: float, step: float) -> np.ndarray:
    n = max(1, int(round(t0 / step)))
    return np.linspace(0.0, t0, n + 1)


def _run_entropy(config: SweepConfig) -> ResultTable:
    d = config.local_dim
    lengths = config.block_lengths or tuple(range(1, subsystem_size_limit(d) - 1))
    sub_len = config.sub_len or _U_L_SUB_LEN.get(d, 1)
    t = config.fixed_time

    def one(alpha: float) -> list[tuple]:
        model = PhaseModel(ChainSpec(config.n_sites, d, float(alpha)), t)
        rows = []
        for length in lengths:
            s = block_entropy(model, length)
            u = u_l_bound(model, length, sub_len) if length % sub_len == 0 else None
            rows.append((float(alpha), int(length), s, u))
        return rows

    chunks = _indexed_map(one, list(config.alphas), config.jobs)
    return ResultTable(
        experiment=config.experiment,
        columns=["alpha", "block_len", "entropy_bits", "u_l_bound_bits"],
        rows=[row for chunk in chunks for row in chunk],
        derived={"time": t, "sub_len": sub_len},
    )


def _run_mi_time(config: SweepConfig) -> ResultTable:
    d = config.local_dim
    step = config.time_step or default_quadrature_step(d)
    times = _time_grid(config.resolved_t0(), step)
    chain_of = lambda a: ChainSpec(config.n_sites, d, float(a))

    tasks = [(a, r) for a in config.alphas for r in config.r_values]

    def one(task):
        a, r = task
        series = mi_series(chain_of(a), int(r), times)
        return [(float(a), int(r), float(t), float(v)) for t, v in zip(times, series.values)]

    chunks = _indexed_map(one, tasks, config.jobs)
    return ResultTable(
        experiment=config.experiment,
        columns=["alpha", "r", "t", "mutual_information_bits"],
        rows=[row for chunk in chunks for row in chunk],
    )


def _run_mi_average(config: SweepConfig) -> ResultTable:
    d = config.local_dim
    t0 = config.resolved_t0()
    tasks = [(a, r) for a in config.alphas for r in config.r_values]

    def one(task):
        a, r = task
        avg = mi_time_average(
            ChainSpec(config.n_sites, d, float(a)), int(r), t0,
            step=config.time_step, anchor=1,
        )
        return (float(a), int(r), avg.value, avg.half_step_delta, avg.converged)

    rows = _indexed_map(one, tasks, config.jobs)
    return ResultTable(
        experiment=config.experiment,
        columns=["alpha", "r", "mi_time_avg_bits", "half_step_delta", "converged"],
        rows=rows,
        derived={"t0": t0, "anchor": 1},
    )


def _run_ggm_time(config: SweepConfig) -> ResultTable:
    d = config.local_dim
    step = config.time_step or default_quadrature_step(d)
    times = _time_grid(config.resolved_t0(), step)

    def one(alpha: float) -> list[tuple]:
        series = ggm_edge_series(ChainSpec(config.n_sites, d, float(alpha)), times)
        return [(float(alpha), float(t), float(v)) for t, v in zip(times, series.values)]

    chunks = _indexed_map(one, list(config.alphas), config.jobs)
    rows = [row for chunk in chunks for row in chunk]
    peak = max(rows, key=lambda row: row[2]) if rows else None
    return ResultTable(
        experiment=config.experiment,
        columns=["alpha", "t", "ggm"],
        rows=rows,
        derived={"max_ggm": peak[2] if peak else None, "argmax_t": peak[1] if peak else None},
    )


def _run_alpha_star_fit(config: SweepConfig) -> ResultTable:
    d = config.local_dim
    t0 = config.resolved_t0()

    def one(alpha: float):
        value = a_tilde(
            ChainSpec(config.n_sites, d, float(alpha)), t0,
            r_values=config.r_values, step=config.time_step,
        )
        return (float(alpha), value)

    rows = _indexed_map(one, list(config.alphas), config.jobs)
    alphas = [r[0] for r in rows]
    values = {a: v for a, v in rows}
    report = None
    below = [a for a, v in rows if abs(v) < 0.02]
    above = [a for a, v in rows if abs(v) >= 0.02]
    if below and above and max(below) < min(above):
        report = max(below)
    return ResultTable(
        experiment=config.experiment,
        columns=["alpha", "a_tilde"],
        rows=rows,
        derived={"alpha_star": report, "t0": t0},
    )


def _run_alpha_star_jump(config: SweepConfig) -> ResultTable:
    d = config.local_dim
    report_a = alpha_star_scan(config.n_sites, d, DerivativeKind.ALPHA)
    report_t = alpha_star_scan(config.n_sites, d, DerivativeKind.TIME)
    rows = [
        (report_a.method, report_a.alpha_star, report_a.jump_magnitude, report_a.found),
        (report_t.method, report_t.alpha_star, report_t.jump_magnitude, report_t.found),
    ]
    return ResultTable(
        experiment=config.experiment,
        columns=["method", "alpha_star", "jump_magnitude", "found"],
        rows=rows,
        derived={"alpha_star": report_a.alpha_star},
    )


def _run_saturation(config: SweepConfig) -> ResultTable:
    report = saturation_report(
        config.local_dim,
        list(config.alphas),
        n_sites=config.n_sites,
        t0=config.resolved_t0(),
        epsilons=config.epsilons,
        step=config.time_step,
    )
    rows = [(float(a), float(g)) for a, g in zip(report.alphas, report.g_avg)]
    return ResultTable(
        experiment=config.experiment,
        columns=["alpha", "ggm_time_avg"],
        rows=rows,
        derived={
            "plateau_value": report.plateau_value,
            "alpha_plateau": report.alpha_plateau,
            "alpha_sat_estimate": report.alpha_sat_estimate,
            "n_sat_table": [
                {"alpha": a, "epsilon": e, "n_sat": s} for a, e, s in report.n_sat_table
            ],
        },
    )


def _run_nsat(config: SweepConfig) -> ResultTable:
    tasks = [(a, eps) for a in config.alphas for eps in config.epsilons]

    def one(task):
        a, eps = task
        result = n_sat(
            config.local_dim, float(a), float(eps),
            t0=config.resolved_t0(), step=config.time_step,
        )
        return (float(a), float(eps), result.n_sat, result.literal_n_sat, result.saturated)

    rows = _indexed_map(one, tasks, config.jobs)
    return ResultTable(
        experiment=config.experiment,
        columns=["alpha", "epsilon", "n_sat", "literal_n_sat", "saturated"],
        rows=rows,
    )


def _run_approx_error(config: SweepConfig) -> ResultTable:
    n_values = config.n_values or tuple(range(5, 12))
    alpha = float(config.alphas[0])
    pairs = ggm_approx_error(
        config.local_dim, n_values, alpha, t0=config.resolved_t0()
    )
    return ResultTable(
        experiment=config.experiment,
        columns=["n_sites", "mean_abs_error"],
        rows=[(n, e) for n, e in pairs],
        derived={"alpha": alpha},
    )


def _run_validate(config: SweepConfig) -> ResultTable:
    """Random-instance cross-check of analytic RDMs against the statevector."""
    rng = np.random.default_rng(config.seed)
    size_cap = {2: 8, 3: 6, 4: 5}
    rows = []
    worst = 0.0
    for trial in range(config.n_trials):
        d = int(rng.choice([2, 3, 4]))
        n = int(rng.integers(3, size_cap[d] + 1))
        alpha = float(rng.uniform(0.0, 5.0))
        t = float(rng.uniform(0.0, 2 * np.pi))
        m = int(rng.integers(1, n))
        sites = tuple(
            sorted(rng.choice(np.arange(1, n + 1), size=m, replace=False).tolist())
        )
        model = PhaseModel(ChainSpec(n, d, alpha), t)
        analytic = build_rdm(model, sites)
        reference = exact.partial_trace(exact.build_state(model), sites)
        err = float(np.abs(analytic - reference).max())
        worst = max(worst, err)
        rows.append((trial, d, n, alpha, t, "+".join(map(str, sites)), err))
    return ResultTable(
        experiment=config.experiment,
        columns=["trial", "d", "n_sites", "alpha", "t", "subsystem", "max_abs_error"],
        rows=rows,
        derived={"worst_error": worst, "passed": worst < 1e-9, "seed": config.seed},
    )


_RUNNERS = {
    "entropy": _run_entropy,
    "mi-time": _run_mi_time,
    "mi-average": _run_mi_average,
    "ggm-time": _run_ggm_time,
    "alpha-star-fit": _run_alpha_star_fit,
    "alpha-star-jump": _run_alpha_star_jump,
    "saturation": _run_saturation,
    "nsat": _run_nsat,
    "approx-error": _run_approx_error,
    "validate": _run_validate,
}


def csv_body(table: ResultTable) -> str:
    lines = [",".join(table.columns)]
    for row in table.rows:
        lines.append(",".join(_fmt(v) for v in row))
    return "\n".join(lines) + "\n"


def cache_lookup(config: SweepConfig) -> ResultTable | None:
    """Prior result for an identical config + code version, if cached."""
    path = _cache_path(config)
    if not path.exists():
        return None
    try:
        blob = json.loads(path.read_text())
        return ResultTable(
            experiment=blob["experiment"],
            columns=blob["columns"],
            rows=[tuple(row) for row in blob["rows"]],
            derived=blob["derived"],
            incomplete=blob.get("incomplete", False),
        )
    except (json.JSONDecodeError, KeyError, TypeError) as exc:
        print(f"warning: ignoring corrupt cache entry {path}: {exc}")
        return None


def _cache_path(config: SweepConfig) -> Path:
    return Path(config.out_dir) / ".cache" / f"{config_hash(config)}.json"


def _cache_store(config: SweepConfig, table: ResultTable) -> None:
    path = _cache_path(config)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(
        json.dumps(
            {
                "experiment": table.experiment,
                "columns": table.columns,
                "rows": [list(row) for row in table.rows],
                "derived": table.derived,
                "incomplete": table.incomplete,
            }
        )
    )


def run(config: SweepConfig) -> ResultTable:
    """Execute the configured experiment and persist CSV + JSON sidecar."""
    started = time.time()
    table = cache_lookup(config) if config.use_cache else None
    cache_hit = table is not None
    if table is None:
        try:
            table = _RUNNERS[config.experiment](config)
        except ResourceLimitError:
            raise
        if config.use_cache and not table.incomplete:
            _cache_store(config, table)

    out_dir = Path(config.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    stem = config.experiment
    (out_dir / f"{stem}.csv").write_text(csv_body(table))
    sidecar = {
        "experiment": config.experiment,
        "config": config.canonical(),
        "config_hash": config_hash(config),
        "code_version": __version__,
        "derived": table.derived,
        "incomplete": table.incomplete,
        "cache_hit": cache_hit,
        "wall_clock_s": time.time() - started,
        "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S", time.gmtime()),
    }
    (out_dir / f"{stem}.json").write_text(json.dumps(sidecar, indent=2, default=_json_default))
    return table


def _json_default(value):
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    raise TypeError(f"not JSON serializable: {type(value)}")

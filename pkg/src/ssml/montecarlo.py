"""Batch experiment harness reproducing the stopping-time experiments.

Each sweep cell runs independent trials whose random streams derive from
(seed, cell_index, trial_index), so results are bit-reproducible regardless
of scheduling or worker count. Aggregation consumes per-trial records in
trial order.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from .core import SsmlConfig, bestcase_certification_trial, run_trial
from .errors import BudgetExceededError
from .qstate import basis_state, unitary_with_fidelity
from .runstats import RunQuery, run_mean

KINDS = (
    "learning_prob",
    "accuracy_scaling",
    "noise_collapse",
    "cert_bernoulli",
    "run_length_histogram",
)

DEFAULT_SHOT_BUDGET = 4_000_000_000
WORKERS_ENV_VAR = "SSML_WORKERS"

# Quantile levels of the halted stopping times used when no explicit shot
# grid is configured.
_AUTO_GRID_LEVELS = np.linspace(0.05, 0.95, 19)

# CDF points at or beyond this are useless for the log-survival fit.
_FIT_SATURATION = 1.0 - 1e-9


@dataclass(frozen=True)
class ExperimentSpec:
    """One experiment: kind, base trial configuration, and sweep lists.

    Sweep lists that do not apply to the kind are ignored; missing ones
    fall back to the base configuration values. trials is the number of
    independent trials per sweep cell.
    """

    kind: str
    base: SsmlConfig
    trials: int
    mh_list: tuple[int, ...] = ()
    d_list: tuple[int, ...] = ()
    q_list: tuple[float, ...] = ()
    p_list: tuple[float, ...] = ()
    n_grid: tuple[int, ...] = ()
    eps_levels: tuple[float, ...] = ()
    shot_budget: int = DEFAULT_SHOT_BUDGET
    workers: int | None = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown experiment kind {self.kind!r}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        if self.shot_budget < 1:
            raise ValueError(f"shot_budget must be >= 1, got {self.shot_budget}")
        object.__setattr__(self, "mh_list", tuple(int(v) for v in self.mh_list))
        object.__setattr__(self, "d_list", tuple(int(v) for v in self.d_list))
        object.__setattr__(self, "q_list", tuple(float(v) for v in self.q_list))
        object.__setattr__(self, "p_list", tuple(float(v) for v in self.p_list))
        object.__setattr__(self, "n_grid", tuple(sorted({int(v) for v in self.n_grid})))
        object.__setattr__(self, "eps_levels", tuple(float(v) for v in self.eps_levels))
        if self.kind == "noise_collapse" and not self.q_list:
            raise ValueError("noise_collapse requires a q sweep list")
        if self.kind in ("cert_bernoulli", "run_length_histogram") and not self.p_list:
            raise ValueError(f"{self.kind} requires a p sweep list")
        if self.kind == "run_length_histogram":
            for p in self.p_list:
                if not 0.0 < p < 1.0:
                    raise ValueError(
                        f"run_length_histogram needs frozen fidelity in (0, 1), got {p!r}")
        # Validate every swept cell eagerly so a bad sweep fails before any
        # trial runs.
        for cell in cell_parameter_grid(self):
            _cell_config(self, cell)


@dataclass(frozen=True, eq=False)
class CellSummary:
    """Aggregate of one sweep cell.

    Means and standard errors are over halted trials only; censored trials
    are counted in censored_fraction and contribute to no CDF point below
    the cap. extras carries kind-specific values (exact references, noise
    load, run-length histogram).
    """

    params: dict
    trials: int
    censored_fraction: float
    mean_shots: float
    se_shots: float
    mean_infidelity: float
    se_infidelity: float
    cdf: tuple[tuple[int, float], ...]
    fit_nc: float | None
    fit_residual_rms: float | None
    shots_values: np.ndarray = field(repr=False)
    halted_flags: np.ndarray = field(repr=False)
    extras: dict = field(default_factory=dict, repr=False)

    def quantile(self, delta: float) -> int | None:
        return empirical_quantile(self.shots_values, self.halted_flags, delta)


@dataclass(frozen=True)
class ExponentialFit:
    """Origin-constrained fit of -log(1 - P) against N."""

    n_c: float
    residual_rms: float
    n_points: int


@dataclass(frozen=True)
class PowerLawFit:
    """Least-squares line through (log x, log y) pairs."""

    slope: float
    intercept: float
    slope_se: float
    intercept_se: float


@dataclass(frozen=True)
class NoiseCollapseRow:
    """One (q, halt_threshold) cell of the noise-collapse table."""

    q: float
    halt_threshold: int
    noise_load: float
    trials: int
    scaled_mean_mc: float | None
    scaled_se: float | None
    scaled_mean_exact: float
    asymptote: float
    censored_fraction: float | None
    skipped: bool


def resolve_workers(explicit: int | None = None) -> int:
    """Worker count: explicit argument, else the env var, else CPU count."""
    if explicit is not None:
        return max(1, int(explicit))
    env = os.environ.get(WORKERS_ENV_VAR)
    if env:
        return max(1, int(env))
    return os.cpu_count() or 1


def cell_parameter_grid(spec: ExperimentSpec) -> list[dict]:
    """Sweep cells in deterministic order (row-major over the sweep lists)."""
    kind = spec.kind
    if kind in ("learning_prob", "accuracy_scaling"):
        ds = spec.d_list or (spec.base.dim,)
        mhs = spec.mh_list or (spec.base.halt_threshold,)
        return [{"d": d, "mh": mh} for d in ds for mh in mhs]
    if kind == "cert_bernoulli":
        mhs = spec.mh_list or (spec.base.halt_threshold,)
        return [{"p": p, "mh": mh} for p in spec.p_list for mh in mhs]
    if kind == "noise_collapse":
        mhs = spec.mh_list or (spec.base.halt_threshold,)
        return [{"q": q, "mh": mh} for q in spec.q_list for mh in mhs]
    return [{"p": p} for p in spec.p_list]  # run_length_histogram


def _cell_config(spec: ExperimentSpec, cell: dict) -> SsmlConfig:
    """Resolve the trial configuration for one cell (validates the cell)."""
    kind = spec.kind
    if kind in ("learning_prob", "accuracy_scaling"):
        return replace(spec.base, dim=cell["d"], halt_threshold=cell["mh"])
    if kind in ("cert_bernoulli", "noise_collapse"):
        p = cell["p"] if kind == "cert_bernoulli" else 1.0 - cell["q"]
        RunQuery(p=p, k=cell["mh"])  # range validation
        return spec.base
    # run_length_histogram: a frozen-control trial that never halts within
    # the cap (halting would need the whole budget in one run).
    return replace(spec.base, halt_threshold=spec.base.max_shots)


def estimate_cell_shots(spec: ExperimentSpec, cell: dict) -> float:
    """Projected shot consumption of one cell, used for budget checks."""
    if spec.kind in ("cert_bernoulli", "noise_collapse"):
        p = cell["p"] if spec.kind == "cert_bernoulli" else 1.0 - cell["q"]
        expected = run_mean(RunQuery(p=p, k=cell["mh"]))
        return spec.trials * min(expected, float(spec.base.max_shots))
    return spec.trials * float(spec.base.max_shots)


def _one_trial(spec: ExperimentSpec, cell_index: int, cell: dict, index: int):
    rng = np.random.default_rng((spec.base.seed, cell_index, index))
    kind = spec.kind
    if kind in ("cert_bernoulli", "noise_collapse"):
        p = cell["p"] if kind == "cert_bernoulli" else 1.0 - cell["q"]
        res = bestcase_certification_trial(cell["mh"], p, spec.base.max_shots, rng)
        return (res.shots, res.halted, res.infidelity, (), None)
    if kind == "run_length_histogram":
        cfg = _cell_config(spec, cell)
        res = run_trial(
            cfg,
            psi=basis_state(cfg.dim, 0),
            rng=rng,
            initial_unitary=unitary_with_fidelity(cfg.dim, cell["p"]),
            freeze_control=True,
        )
        return (res.shots, res.halted, res.infidelity, (), res.run_lengths)
    cfg = _cell_config(spec, cell)
    res = run_trial(cfg, eps_levels=spec.eps_levels, rng=rng)
    hits = tuple(res.hitting_times[lvl] for lvl in spec.eps_levels)
    return (res.shots, res.halted, res.infidelity, hits, None)


def _trial_batch(args):
    spec, cell_index, cell, lo, hi = args
    return [_one_trial(spec, cell_index, cell, t) for t in range(lo, hi)]


def _run_cell(spec: ExperimentSpec, cell_index: int, cell: dict,
              workers: int) -> list:
    trials = spec.trials
    if workers <= 1 or trials < 2 * workers:
        return _trial_batch((spec, cell_index, cell, 0, trials))
    chunk = math.ceil(trials / (4 * workers))
    tasks = [(spec, cell_index, cell, lo, min(lo + chunk, trials))
             for lo in range(0, trials, chunk)]
    records: list = []
    with ProcessPoolExecutor(max_workers=workers) as pool:
        for batch in pool.map(_trial_batch, tasks):
            records.extend(batch)
    return records


def _mean_se(values: np.ndarray) -> tuple[float, float]:
    if values.size == 0:
        return (math.nan, math.nan)
    if values.size == 1:
        return (float(values[0]), 0.0)
    return (float(values.mean()),
            float(values.std(ddof=1) / math.sqrt(values.size)))


def _auto_grid(halted_shots: np.ndarray) -> tuple[int, ...]:
    if halted_shots.size == 0:
        return ()
    marks = np.quantile(halted_shots, _AUTO_GRID_LEVELS, method="higher")
    return tuple(int(v) for v in np.unique(marks))


def _summarize_cell(spec: ExperimentSpec, cell: dict, records: list) -> CellSummary:
    shots = np.array([r[0] for r in records], dtype=np.int64)
    halted = np.array([r[1] for r in records], dtype=bool)
    infid = np.array([r[2] for r in records], dtype=float)
    censored_fraction = float(1.0 - halted.mean()) if shots.size else math.nan
    halted_shots = shots[halted]
    mean_shots, se_shots = _mean_se(halted_shots.astype(float))
    mean_eps, se_eps = _mean_se(infid[halted])

    grid = spec.n_grid or _auto_grid(halted_shots)
    cdf = tuple((int(n), float(np.mean(halted & (shots <= n)))) for n in grid)

    fit_nc = None
    fit_rms = None
    if spec.kind in ("learning_prob", "cert_bernoulli") and cdf:
        try:
            fit = fit_exponential_cdf(cdf)
        except ValueError:
            pass
        else:
            fit_nc = fit.n_c
            fit_rms = fit.residual_rms

    extras: dict = {}
    if spec.kind in ("learning_prob", "accuracy_scaling") and spec.eps_levels:
        hits = np.array(
            [[math.nan if h is None else float(h) for h in r[3]] for r in records],
            dtype=float,
        )
        extras["hit_times"] = hits
    if spec.kind == "cert_bernoulli":
        extras["exact_mean"] = run_mean(RunQuery(p=cell["p"], k=cell["mh"]))
    if spec.kind == "noise_collapse":
        q, mh = cell["q"], cell["mh"]
        extras["noise_load"] = q * mh
        extras["scaled_mean_exact"] = q * run_mean(RunQuery(p=1.0 - q, k=mh))
        extras["asymptote"] = math.expm1(q * mh)
        extras["skipped"] = False
    if spec.kind == "run_length_histogram":
        runs = np.concatenate([np.asarray(r[4], dtype=np.int64) for r in records]) \
            if records else np.zeros(0, dtype=np.int64)
        extras["run_lengths"] = runs
        extras["n_runs"] = int(runs.size)
        extras["mean_run"], extras["se_run"] = _mean_se(runs.astype(float))
        extras["eps"] = 1.0 - cell["p"]

    return CellSummary(
        params=dict(cell),
        trials=len(records),
        censored_fraction=censored_fraction,
        mean_shots=mean_shots,
        se_shots=se_shots,
        mean_infidelity=mean_eps,
        se_infidelity=se_eps,
        cdf=cdf,
        fit_nc=fit_nc,
        fit_residual_rms=fit_rms,
        shots_values=shots,
        halted_flags=halted,
        extras=extras,
    )


def _skipped_summary(spec: ExperimentSpec, cell: dict) -> CellSummary:
    q, mh = cell["q"], cell["mh"]
    extras = {
        "noise_load": q * mh,
        "scaled_mean_exact": q * run_mean(RunQuery(p=1.0 - q, k=mh)),
        "asymptote": math.expm1(q * mh),
        "skipped": True,
    }
    return CellSummary(
        params=dict(cell),
        trials=0,
        censored_fraction=math.nan,
        mean_shots=math.nan,
        se_shots=math.nan,
        mean_infidelity=math.nan,
        se_infidelity=math.nan,
        cdf=(),
        fit_nc=None,
        fit_residual_rms=None,
        shots_values=np.zeros(0, dtype=np.int64),
        halted_flags=np.zeros(0, dtype=bool),
        extras=extras,
    )


def run_experiment(spec: ExperimentSpec) -> list[CellSummary]:
    """Run every sweep cell and aggregate per-cell summaries.

    Budget policy: noise_collapse cells are estimated individually (via the
    exact waiting-time mean) and cells that would push the running total
    past the budget are skipped with analytic values only. All other kinds
    refuse to run outright when the projected total exceeds the budget.
    """
    cells = cell_parameter_grid(spec)
    workers = resolve_workers(spec.workers)

    if spec.kind != "noise_collapse":
        total = sum(estimate_cell_shots(spec, cell) for cell in cells)
        if total > spec.shot_budget:
            raise BudgetExceededError(
                f"projected {total:.3g} shots exceeds budget {spec.shot_budget}; "
                f"reduce trials, max_shots or the sweep",
                estimate=int(total),
                budget=spec.shot_budget,
            )

    summaries: list[CellSummary] = []
    running = 0.0
    for cell_index, cell in enumerate(cells):
        if spec.kind == "noise_collapse":
            cost = estimate_cell_shots(spec, cell)
            if running + cost > spec.shot_budget:
                summaries.append(_skipped_summary(spec, cell))
                continue
            running += cost
        records = _run_cell(spec, cell_index, cell, workers)
        summaries.append(_summarize_cell(spec, cell, records))
    return summaries


def empirical_quantile(shots: np.ndarray, halted: np.ndarray,
                       delta: float) -> int | None:
    """Smallest observed shot count with empirical CDF >= 1 - delta.

    Censored trials enter the denominator but never the numerator, so the
    quantile is identified only while the censored fraction stays below
    delta; otherwise None is returned rather than a number.
    """
    if not 0.0 < delta < 1.0:
        raise ValueError(f"delta must lie in (0, 1), got {delta!r}")
    shots = np.asarray(shots)
    halted = np.asarray(halted, dtype=bool)
    if shots.size == 0 or shots.shape != halted.shape:
        raise ValueError("need matching nonempty sample and censoring arrays")
    n = shots.size
    censored_fraction = 1.0 - float(halted.mean())
    if censored_fraction >= delta:
        return None
    ordered = np.sort(shots[halted])
    rank = math.ceil(n * (1.0 - delta))
    return int(ordered[rank - 1])


def fit_exponential_cdf(cdf_points) -> ExponentialFit:
    """Fit P(N) = 1 - exp(-N / n_c) through the origin in log-survival space.

    Points with P outside (0, 1 - 1e-9) are excluded; at least 3 must
    survive. The residual RMS is reported in log-survival units.
    """
    ns = []
    ys = []
    for n, p in cdf_points:
        if 0.0 < p < _FIT_SATURATION and n > 0:
            ns.append(float(n))
            ys.append(-math.log1p(-p))
    if len(ns) < 3:
        raise ValueError(
            f"exponential fit needs at least 3 usable CDF points, got {len(ns)}")
    ns_arr = np.array(ns)
    ys_arr = np.array(ys)
    slope = float(ns_arr @ ys_arr / (ns_arr @ ns_arr))
    residuals = ys_arr - slope * ns_arr
    rms = float(np.sqrt(np.mean(residuals ** 2)))
    return ExponentialFit(n_c=1.0 / slope, residual_rms=rms, n_points=len(ns))


def loglog_slope(pairs) -> PowerLawFit:
    """Ordinary least squares on (log mean_shots, log mean_infidelity)."""
    pts = [(float(a), float(b)) for a, b in pairs]
    if len(pts) < 3:
        raise ValueError(f"slope fit needs at least 3 pairs, got {len(pts)}")
    if any(a <= 0.0 or b <= 0.0 for a, b in pts):
        raise ValueError("slope fit needs strictly positive pairs")
    x = np.log([a for a, _ in pts])
    y = np.log([b for _, b in pts])
    n = x.size
    xbar = x.mean()
    sxx = float(np.sum((x - xbar) ** 2))
    if sxx == 0.0:
        raise ValueError("slope fit needs at least two distinct x values")
    slope = float(np.sum((x - xbar) * (y - y.mean())) / sxx)
    intercept = float(y.mean() - slope * xbar)
    residuals = y - (intercept + slope * x)
    sigma_sq = float(np.sum(residuals ** 2) / (n - 2)) if n > 2 else 0.0
    slope_se = math.sqrt(sigma_sq / sxx)
    intercept_se = math.sqrt(sigma_sq * (1.0 / n + xbar ** 2 / sxx))
    return PowerLawFit(slope=slope, intercept=intercept,
                       slope_se=slope_se, intercept_se=intercept_se)


def noise_collapse_table(q_list, mh_list, trials, *, seed,
                         max_shots: int = 10_000_000,
                         shot_budget: int = DEFAULT_SHOT_BUDGET,
                         workers: int | None = None) -> list[NoiseCollapseRow]:
    """Scaled-mean table over the (q, halt_threshold) grid.

    Each row pairs the Monte-Carlo scaled mean q * mean(T) with the exact
    value from the waiting-time mean at success probability 1 - q and the
    small-q asymptote exp(q * threshold) - 1. Cells whose projected cost
    exceeds the budget are skipped and report analytic values only.
    """
    base = SsmlConfig(dim=2, halt_threshold=1, seed=seed, max_shots=max_shots)
    spec = ExperimentSpec(
        kind="noise_collapse",
        base=base,
        trials=trials,
        mh_list=tuple(mh_list),
        q_list=tuple(q_list),
        shot_budget=shot_budget,
        workers=workers,
    )
    rows = []
    for summary in run_experiment(spec):
        q = summary.params["q"]
        mh = summary.params["mh"]
        skipped = summary.extras["skipped"]
        rows.append(NoiseCollapseRow(
            q=q,
            halt_threshold=mh,
            noise_load=summary.extras["noise_load"],
            trials=summary.trials,
            scaled_mean_mc=None if skipped else q * summary.mean_shots,
            scaled_se=None if skipped else q * summary.se_shots,
            scaled_mean_exact=summary.extras["scaled_mean_exact"],
            asymptote=summary.extras["asymptote"],
            censored_fraction=None if skipped else summary.censored_fraction,
            skipped=skipped,
        ))
    return rows

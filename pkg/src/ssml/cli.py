"""Command-line interface: single trials, closed-form analytics, experiments.

Output policy: everything printed to stdout and written to files is a pure
function of the invocation, so repeated runs are byte-identical. Timing goes
to stderr only. Machine-readable files carry floats at 17 significant
digits; console tables use 6.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import __version__
from .core import SsmlConfig, run_trial
from .errors import BudgetExceededError, NumericIntegrityError
from .montecarlo import (
    DEFAULT_SHOT_BUDGET,
    KINDS,
    ExperimentSpec,
    loglog_slope,
    run_experiment,
)
from .noise import NoiseModel
from .runstats import (
    CertificateQuery,
    RunQuery,
    effective_success,
    eps_cert,
    noise_blowup_asymptote,
    noise_blowup_mean,
    noise_cert_eps,
    quantile_sufficient_shots,
    run_mean,
    run_tail_bound,
)

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_RUNTIME = 4


class UsageError(ValueError):
    """Invalid flags, config values or out-of-domain parameters."""


class ConfigParseError(UsageError):
    """Config file syntax error; message carries line and column."""


@dataclass
class ResultEnvelope:
    """Everything one invocation produced.

    spec_echo holds the fully resolved parameters (defaults applied, seed
    included) and suffices to reproduce rows bit-exactly. timing is never
    serialized into the output files.
    """

    tool_version: str
    spec_echo: dict
    rows: list
    fieldnames: list
    derived: dict = field(default_factory=dict)
    timing: dict = field(default_factory=dict)


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, BudgetExceededError):
        return EXIT_BUDGET
    if isinstance(exc, (UsageError, ValueError)):
        return EXIT_USAGE
    return EXIT_RUNTIME


# ---------------------------------------------------------------------------
# Deterministic serialization


def _file_num(value: float) -> str:
    return format(value, ".17g")


def cell_text(value) -> str:
    """CSV cell rendering; non-finite floats and None become empty cells."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return _file_num(v) if math.isfinite(v) else ""
    return str(value)


def console_text(value) -> str:
    if isinstance(value, (float, np.floating)):
        v = float(value)
        return format(v, ".6g") if math.isfinite(v) else "-"
    return cell_text(value) or "-"


def rows_to_csv_text(rows: list, fieldnames: list) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([cell_text(row.get(name)) for name in fieldnames])
    return buf.getvalue()


def json_text(obj) -> str:
    """JSON with floats at 17 significant digits (stdlib json hardwires repr)."""
    out: list[str] = []
    _dump_json(obj, out, 0)
    out.append("\n")
    return "".join(out)


def _dump_json(obj, out: list, depth: int) -> None:
    pad = "  " * depth
    inner = "  " * (depth + 1)
    if obj is None:
        out.append("null")
    elif isinstance(obj, (bool, np.bool_)):
        out.append("true" if obj else "false")
    elif isinstance(obj, str):
        out.append(json.dumps(obj))
    elif isinstance(obj, (int, np.integer)):
        out.append(str(int(obj)))
    elif isinstance(obj, (float, np.floating)):
        v = float(obj)
        out.append(_file_num(v) if math.isfinite(v) else "null")
    elif isinstance(obj, dict):
        if not obj:
            out.append("{}")
            return
        out.append("{\n")
        for i, (key, value) in enumerate(obj.items()):
            out.append(f"{inner}{json.dumps(str(key))}: ")
            _dump_json(value, out, depth + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "}")
    elif isinstance(obj, (list, tuple)):
        if not len(obj):
            out.append("[]")
            return
        out.append("[\n")
        for i, value in enumerate(obj):
            out.append(inner)
            _dump_json(value, out, depth + 1)
            out.append(",\n" if i + 1 < len(obj) else "\n")
        out.append(pad + "]")
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")


def render_table(rows: list, fieldnames: list) -> str:
    cells = [[console_text(row.get(name)) for name in fieldnames] for row in rows]
    widths = [max(len(name), *(len(r[i]) for r in cells)) if cells else len(name)
              for i, name in enumerate(fieldnames)]
    lines = ["  ".join(name.ljust(widths[i]) for i, name in enumerate(fieldnames))]
    for r in cells:
        lines.append("  ".join(r[i].ljust(widths[i]) for i in range(len(fieldnames))))
    return "\n".join(lines)


# ---------------------------------------------------------------------------
# Config files (flat key = value, '#' comments, comma-separated lists)

_SSML_KINDS = ("learning_prob", "accuracy_scaling")
_BERNOULLI_KINDS = ("cert_bernoulli", "noise_collapse")

_CONFIG_KEYS = ("kind", "seed", "trials", "d", "mh", "alpha", "beta", "noise",
                "q", "p", "max_shots", "multi_failure", "n_grid", "eps_levels",
                "budget")


def parse_config_text(text: str) -> dict:
    values: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        if "=" not in line:
            col = len(line) - len(line.lstrip()) + 1
            raise ConfigParseError(
                f"line {lineno}, column {col}: expected 'key = value'")
        key, _, value = line.partition("=")
        key_stripped = key.strip()
        value_stripped = value.strip()
        if not key_stripped:
            raise ConfigParseError(f"line {lineno}, column 1: missing key before '='")
        if not value_stripped:
            col = len(key) + 2
            raise ConfigParseError(
                f"line {lineno}, column {col}: missing value for {key_stripped!r}")
        if key_stripped in values:
            raise ConfigParseError(
                f"line {lineno}, column 1: duplicate key {key_stripped!r}")
        values[key_stripped] = value_stripped
    return values


def _want_int(key: str, text: str) -> int:
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"config key {key!r}: expected integer, got {text!r}") from None


def _want_float(key: str, text: str) -> float:
    try:
        return float(text)
    except ValueError:
        raise UsageError(f"config key {key!r}: expected number, got {text!r}") from None


def _want_bool(key: str, text: str) -> bool:
    low = text.strip().lower()
    if low in ("true", "1", "yes", "on"):
        return True
    if low in ("false", "0", "no", "off"):
        return False
    raise UsageError(f"config key {key!r}: expected boolean, got {text!r}")


def _want_int_list(key: str, text: str) -> tuple[int, ...]:
    return tuple(_want_int(key, part.strip()) for part in text.split(","))


def _want_float_list(key: str, text: str) -> tuple[float, ...]:
    return tuple(_want_float(key, part.strip()) for part in text.split(","))


def experiment_spec_from_config(values: dict) -> tuple[ExperimentSpec, dict]:
    """Resolve a parsed config into a validated spec plus its echo dict."""
    unknown = sorted(set(values) - set(_CONFIG_KEYS))
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(unknown)}")
    if "kind" not in values:
        raise UsageError("config key 'kind' is required")
    kind = values["kind"]
    if kind not in KINDS:
        raise UsageError(f"unknown experiment kind {kind!r}; expected one of {', '.join(KINDS)}")
    if "seed" not in values:
        raise UsageError("config key 'seed' is required (no wall-clock default)")
    seed = _want_int("seed", values["seed"])

    trials_default = 500 if kind in _SSML_KINDS else 10_000
    trials = _want_int("trials", values["trials"]) if "trials" in values else trials_default
    d_list = _want_int_list("d", values["d"]) if "d" in values else (2,)
    mh_list = _want_int_list("mh", values["mh"]) if "mh" in values else ()
    if kind != "run_length_histogram" and not mh_list:
        raise UsageError(f"config key 'mh' is required for kind {kind!r}")
    alpha = _want_float("alpha", values["alpha"]) if "alpha" in values else 0.3
    beta = _want_float("beta", values["beta"]) if "beta" in values else 0.5
    try:
        noise = NoiseModel.parse(values.get("noise", "none"))
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    q_list = _want_float_list("q", values["q"]) if "q" in values else ()
    p_list = _want_float_list("p", values["p"]) if "p" in values else ()
    max_shots_default = 1_000_000 if kind in _SSML_KINDS else 10_000_000
    max_shots = (_want_int("max_shots", values["max_shots"])
                 if "max_shots" in values else max_shots_default)
    multi_failure = (_want_bool("multi_failure", values["multi_failure"])
                     if "multi_failure" in values else False)
    n_grid = _want_int_list("n_grid", values["n_grid"]) if "n_grid" in values else ()
    eps_levels = (_want_float_list("eps_levels", values["eps_levels"])
                  if "eps_levels" in values else ())
    budget = _want_int("budget", values["budget"]) if "budget" in values else DEFAULT_SHOT_BUDGET

    try:
        base = SsmlConfig(
            dim=d_list[0],
            halt_threshold=min(mh_list) if mh_list else 1,
            alpha=alpha,
            beta=beta,
            noise=noise,
            max_shots=max_shots,
            seed=seed,
            multi_failure=multi_failure,
        )
        spec = ExperimentSpec(
            kind=kind,
            base=base,
            trials=trials,
            mh_list=mh_list,
            d_list=d_list,
            q_list=q_list,
            p_list=p_list,
            n_grid=n_grid,
            eps_levels=eps_levels,
            shot_budget=budget,
        )
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None

    echo = {
        "kind": kind,
        "seed": seed,
        "trials": trials,
        "d": list(d_list),
        "mh": list(mh_list),
        "alpha": alpha,
        "beta": beta,
        "noise": noise.describe(),
        "q": list(q_list),
        "p": list(p_list),
        "max_shots": max_shots,
        "multi_failure": multi_failure,
        "n_grid": list(spec.n_grid),
        "eps_levels": list(eps_levels),
        "budget": budget,
    }
    return spec, echo


def config_text_from_echo(echo: dict) -> str:
    """Inverse of parsing: a config file that reproduces the echoed run."""
    lines = []
    for key in _CONFIG_KEYS:
        if key not in echo:
            continue
        value = echo[key]
        if isinstance(value, list):
            if not value:
                continue
            text = ",".join(cell_text(v) for v in value)
        else:
            text = cell_text(value)
        lines.append(f"{key} = {text}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# Row builders


def _cell_meta(echo: dict, summary) -> dict:
    return {
        "d": summary.params.get("d", echo["d"][0]),
        "mh": summary.params["mh"],
        "alpha": echo["alpha"],
        "beta": echo["beta"],
        "noise": echo["noise"],
        "trials": summary.trials,
        "censored_fraction": summary.censored_fraction,
        "mean_shots": summary.mean_shots,
        "se_shots": summary.se_shots,
        "mean_infidelity": summary.mean_infidelity,
        "se_infidelity": summary.se_infidelity,
    }


def build_rows(spec: ExperimentSpec, echo: dict, summaries: list):
    """Rows, column order, derived values, and console rows for one kind."""
    kind = spec.kind
    derived: dict = {}
    if kind == "learning_prob":
        fields = ["d", "mh", "alpha", "beta", "noise", "trials",
                  "censored_fraction", "mean_shots", "se_shots",
                  "mean_infidelity", "se_infidelity", "fit_nc",
                  "fit_residual_rms", "n", "p_hat"]
        rows = []
        console = []
        for s in summaries:
            meta = _cell_meta(echo, s)
            meta["fit_nc"] = s.fit_nc
            meta["fit_residual_rms"] = s.fit_residual_rms
            console.append(meta)
            if s.cdf:
                for n, p_hat in s.cdf:
                    rows.append({**meta, "n": n, "p_hat": p_hat})
            else:
                rows.append({**meta, "n": None, "p_hat": None})
        return rows, fields, derived, console

    if kind == "accuracy_scaling":
        fields = ["d", "mh", "alpha", "beta", "noise", "trials",
                  "censored_fraction", "mean_shots", "se_shots",
                  "mean_infidelity", "se_infidelity"]
        rows = [_cell_meta(echo, s) for s in summaries]
        fits = []
        for d in sorted({row["d"] for row in rows}):
            pairs = [(row["mean_shots"], row["mean_infidelity"])
                     for row in rows if row["d"] == d
                     and math.isfinite(row["mean_shots"])
                     and row["mean_infidelity"] > 0.0]
            if len(pairs) >= 3:
                fit = loglog_slope(pairs)
                fits.append({"d": d, "slope": fit.slope, "slope_se": fit.slope_se,
                             "intercept": fit.intercept, "intercept_se": fit.intercept_se})
        if fits:
            derived["loglog_slope"] = fits
        return rows, fields, derived, rows

    if kind == "noise_collapse":
        fields = ["q", "mh", "q_mh", "trials", "censored_fraction",
                  "scaled_mean_mc", "scaled_se", "scaled_mean_exact",
                  "asymptote", "skipped"]
        rows = []
        for s in summaries:
            q = s.params["q"]
            skipped = s.extras["skipped"]
            rows.append({
                "q": q,
                "mh": s.params["mh"],
                "q_mh": s.extras["noise_load"],
                "trials": s.trials,
                "censored_fraction": None if skipped else s.censored_fraction,
                "scaled_mean_mc": None if skipped else q * s.mean_shots,
                "scaled_se": None if skipped else q * s.se_shots,
                "scaled_mean_exact": s.extras["scaled_mean_exact"],
                "asymptote": s.extras["asymptote"],
                "skipped": skipped,
            })
        return rows, fields, derived, rows

    if kind == "cert_bernoulli":
        fields = ["p", "mh", "trials", "censored_fraction", "mean_shots",
                  "se_shots", "exact_mean", "fit_nc", "fit_residual_rms"]
        rows = [{
            "p": s.params["p"],
            "mh": s.params["mh"],
            "trials": s.trials,
            "censored_fraction": s.censored_fraction,
            "mean_shots": s.mean_shots,
            "se_shots": s.se_shots,
            "exact_mean": s.extras["exact_mean"],
            "fit_nc": s.fit_nc,
            "fit_residual_rms": s.fit_residual_rms,
        } for s in summaries]
        return rows, fields, derived, rows

    # run_length_histogram
    fields = ["p", "eps", "n_runs", "mean_run", "se_run", "geom_mean",
              "run_length", "count", "pmf_hat", "pmf_geometric"]
    rows = []
    console = []
    for s in summaries:
        p = s.params["p"]
        eps = s.extras["eps"]
        runs = s.extras["run_lengths"]
        n_runs = s.extras["n_runs"]
        meta = {
            "p": p,
            "eps": eps,
            "n_runs": n_runs,
            "mean_run": s.extras["mean_run"],
            "se_run": s.extras["se_run"],
            "geom_mean": 1.0 / eps - 1.0,
        }
        console.append(meta)
        counts = np.bincount(runs) if n_runs else np.zeros(0, dtype=np.int64)
        for length, count in enumerate(counts):
            rows.append({
                **meta,
                "run_length": length,
                "count": int(count),
                "pmf_hat": count / n_runs,
                "pmf_geometric": (1.0 - eps) ** length * eps,
            })
    return rows, fields, derived, console


# ---------------------------------------------------------------------------
# Subcommands


def cmd_simulate(args) -> ResultEnvelope:
    try:
        noise = NoiseModel.parse(args.noise)
        cfg = SsmlConfig(
            dim=args.d,
            halt_threshold=args.mh,
            alpha=args.alpha,
            beta=args.beta,
            noise=noise,
            max_shots=args.max_shots,
            seed=args.seed,
            multi_failure=args.multi_failure,
        )
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None
    if args.trials < 1:
        raise UsageError(f"trials must be >= 1, got {args.trials}")

    started = time.perf_counter()
    rows = []
    for t in range(args.trials):
        rng = np.random.default_rng((cfg.seed, 0, t))
        res = run_trial(cfg, rng=rng)
        rows.append({
            "trial": t,
            "shots": res.shots,
            "infidelity": res.infidelity,
            "halted": res.halted,
        })
    echo = {
        "command": "simulate",
        "d": cfg.dim,
        "mh": cfg.halt_threshold,
        "alpha": cfg.alpha,
        "beta": cfg.beta,
        "noise": noise.describe(),
        "max_shots": cfg.max_shots,
        "seed": cfg.seed,
        "trials": args.trials,
        "multi_failure": cfg.multi_failure,
    }
    return ResultEnvelope(
        tool_version=__version__,
        spec_echo=echo,
        rows=rows,
        fieldnames=["trial", "shots", "infidelity", "halted"],
        timing={"elapsed_s": time.perf_counter() - started},
    )


def _print_simulate(envelope: ResultEnvelope) -> None:
    echo = envelope.spec_echo
    print("# " + " ".join(f"{k}={cell_text(v)}" for k, v in echo.items() if k != "command"))
    print(render_table(envelope.rows, envelope.fieldnames))
    shots = np.array([r["shots"] for r in envelope.rows], dtype=float)
    halted = np.array([r["halted"] for r in envelope.rows], dtype=bool)
    infid = np.array([r["infidelity"] for r in envelope.rows], dtype=float)
    n_halted = int(halted.sum())
    parts = [f"trials {len(envelope.rows)}", f"halted {n_halted}",
             f"censored_fraction {console_text(1.0 - halted.mean())}"]
    if n_halted:
        hs = shots[halted]
        se = hs.std(ddof=1) / math.sqrt(n_halted) if n_halted > 1 else 0.0
        parts += [f"mean_shots {console_text(hs.mean())}",
                  f"se_shots {console_text(se)}",
                  f"mean_infidelity {console_text(infid[halted].mean())}"]
    print("# " + " ".join(parts))


def cmd_analytic(args) -> ResultEnvelope:
    lines: list[tuple[str, object]] = []
    try:
        if args.run_mean is not None:
            p, k = args.run_mean
            lines.append(("run_mean", run_mean(RunQuery(p=p, k=int(k)))))
        elif args.tail is not None:
            p, k, n = args.tail
            lines.append(("run_tail_bound", run_tail_bound(RunQuery(p=p, k=int(k)), int(n))))
        elif args.eps_cert is not None:
            vals = args.eps_cert
            if len(vals) not in (2, 3):
                raise UsageError("--eps-cert takes MH DELTA [Q]")
            mh, delta = int(vals[0]), vals[1]
            q = vals[2] if len(vals) == 3 else 0.0
            query = CertificateQuery(halt_threshold=mh, delta=delta, q=q)
            scale = eps_cert(query) if q == 0.0 else noise_cert_eps(query)
            lines.append(("eps_cert", scale.value))
            lines.append(("large_mh_approx", scale.approx))
            lines.append(("ceiling", scale.ceiling))
        elif args.blowup is not None:
            q, mh = args.blowup
            lines.append(("noise_blowup_mean", noise_blowup_mean(q, int(mh))))
            lines.append(("asymptote", noise_blowup_asymptote(q, int(mh))))
        elif args.quantile_shots is not None:
            p, k, delta = args.quantile_shots
            lines.append(("quantile_sufficient_shots",
                          quantile_sufficient_shots(RunQuery(p=p, k=int(k)), delta)))
        else:
            f_text, kind, q_text = args.effective_f
            if kind not in ("bsc", "fn"):
                raise UsageError(f"--effective-f channel must be bsc or fn, got {kind!r}")
            noise = NoiseModel(kind, float(q_text))
            lines.append(("effective_success", effective_success(float(f_text), noise)))
    except UsageError:
        raise
    except (ValueError, TypeError) as exc:
        raise UsageError(str(exc)) from None

    rows = [{"name": name, "value": value} for name, value in lines]
    return ResultEnvelope(
        tool_version=__version__,
        spec_echo={"command": "analytic"},
        rows=rows,
        fieldnames=["name", "value"],
    )


def _print_analytic(envelope: ResultEnvelope) -> None:
    for row in envelope.rows:
        value = row["value"]
        if isinstance(value, bool):
            text = "true" if value else "false"
        elif isinstance(value, float):
            text = _file_num(value)
        else:
            text = str(value)
        print(f"{row['name']} {text}")


def cmd_experiment(args) -> tuple[ResultEnvelope, Path, Path]:
    config_path = Path(args.config)
    if not config_path.is_file():
        raise UsageError(f"config file not found: {config_path}")
    values = parse_config_text(config_path.read_text(encoding="utf-8"))
    spec, echo = experiment_spec_from_config(values)

    started = time.perf_counter()
    summaries = run_experiment(spec)
    elapsed = time.perf_counter() - started
    rows, fieldnames, derived, console = build_rows(spec, echo, summaries)

    envelope = ResultEnvelope(
        tool_version=__version__,
        spec_echo=echo,
        rows=rows,
        fieldnames=fieldnames,
        derived=derived,
        timing={"elapsed_s": elapsed},
    )

    prefix = Path(args.out) if args.out else config_path.with_suffix("")
    csv_path = prefix.with_name(prefix.name + ".csv")
    json_path = prefix.with_name(prefix.name + ".json")
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    csv_path.write_bytes(rows_to_csv_text(rows, fieldnames).encode("utf-8"))
    doc = {"tool_version": envelope.tool_version, "spec": echo, "rows": rows}
    if derived:
        doc["derived"] = derived
    json_path.write_bytes(json_text(doc).encode("utf-8"))

    console_fields = [name for name in console[0]] if console else fieldnames
    print(render_table(console, console_fields))
    for name, fits in derived.items():
        for fit in fits:
            print("# " + name + " " +
                  " ".join(f"{k}={console_text(v)}" for k, v in fit.items()))
    print(f"# wrote {csv_path} {json_path}")
    print(f"# elapsed {elapsed:.3f}s", file=sys.stderr)
    return envelope, csv_path, json_path


# ---------------------------------------------------------------------------
# Parser and entry point


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ssml",
        description="Simulator and run-statistics analytics for one-bit "
                    "feedback learning with run-length halting.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run independent learning trials")
    sim.add_argument("--d", type=int, required=True, help="Hilbert-space dimension")
    sim.add_argument("--mh", type=int, required=True, help="halting threshold")
    sim.add_argument("--alpha", type=float, default=0.3, help="step-size scale")
    sim.add_argument("--beta", type=float, default=0.5, help="step-size exponent")
    sim.add_argument("--noise", default="none", help="none, bsc:Q or fn:Q")
    sim.add_argument("--max-shots", type=int, default=1_000_000, dest="max_shots")
    sim.add_argument("--seed", type=int, default=0)
    sim.add_argument("--trials", type=int, default=1)
    sim.add_argument("--multi-failure", action="store_true", dest="multi_failure")

    ana = sub.add_parser("analytic", help="closed-form run statistics")
    group = ana.add_mutually_exclusive_group(required=True)
    group.add_argument("--run-mean", nargs=2, type=float, metavar=("P", "K"))
    group.add_argument("--tail", nargs=3, type=float, metavar=("P", "K", "N"))
    group.add_argument("--eps-cert", nargs="+", type=float,
                       metavar="MH DELTA [Q]".split()[0])
    group.add_argument("--blowup", nargs=2, type=float, metavar=("Q", "MH"))
    group.add_argument("--quantile-shots", nargs=3, type=float,
                       metavar=("P", "K", "DELTA"))
    group.add_argument("--effective-f", nargs=3, metavar=("F", "CHANNEL", "Q"))

    exp = sub.add_parser("experiment", help="run a config-driven sweep")
    exp.add_argument("config", help="flat key = value experiment config")
    exp.add_argument("--out", default=None,
                     help="output prefix (default: config path without suffix)")

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        code = exc.code
        if code in (0, None):
            return EXIT_OK
        return EXIT_USAGE

    try:
        if args.command == "simulate":
            _print_simulate(cmd_simulate(args))
        elif args.command == "analytic":
            _print_analytic(cmd_analytic(args))
        else:
            cmd_experiment(args)
    except BudgetExceededError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericIntegrityError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()

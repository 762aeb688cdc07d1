"""Command-line front end: moment tables, verification, simulation, densities.

Every subcommand writes its primary output to --out plus a JSON manifest at
<out>.manifest.json recording the invocation. Outputs embed nothing
time- or host-dependent, so a rerun with the same arguments is
byte-identical; the manifest (which carries a timestamp) is the only file
that differs. Exit codes: 0 success, 1 verification failure, 2 usage or
validation error.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import re
import sys
from datetime import datetime, timezone

import numpy as np
from scipy.special import erf

from . import __version__, moments
from .montecarlo import (
    Functional,
    SimulationConfig,
    empirical_density,
    ks_test,
    simulate_functional,
    summarize,
)
from .moments import MomentQuantity
from .params import Ar1Params
from .process import linear_combination_law
from .student import StudentLaw
from .verification import (
    SMALL_N_GRID,
    SMALL_RHO_GRID,
    run_verification,
)

__all__ = ["main", "entrypoint"]

_TABLE_COLUMNS = [
    "n",
    "rho",
    "sigma",
    "var_num_closed",
    "var_num_oracle",
    "e_s2_closed",
    "e_s2_oracle",
    "e_s4_closed",
    "e_s4_oracle",
    "var_s2_closed",
    "var_s2_oracle",
    "max_rel_gap",
    "discrepancy_flag",
]

_SUMMARY_COLUMNS = [
    "functional",
    "n",
    "rho",
    "mu",
    "sigma",
    "seed",
    "replications",
    "used",
    "degenerate",
    "mean",
    "variance",
    "std_error_mean",
    "std_error_variance",
    "ks_statistic",
    "ks_p_value",
    "ks_reference",
]


def _fmt(value) -> str:
    # 17 significant digits round-trips any float64; '.' decimal always
    if isinstance(value, float):
        return format(value, ".17g")
    return "" if value is None else str(value)


def _write_csv(path: str, fieldnames: list[str], rows: list[dict]) -> None:
    with open(path, "w", newline="") as handle:
        writer = csv.writer(handle, lineterminator="\n")
        writer.writerow(fieldnames)
        for row in rows:
            writer.writerow([_fmt(row[name]) for name in fieldnames])


def _parse_grid(text: str, integer: bool = False) -> list:
    """Grid spec: comma list '2,5,10' or inclusive range 'start:stop:step'."""
    text = str(text).strip()
    if not text:
        raise ValueError("empty grid spec")
    if ":" in text:
        pieces = text.split(":")
        if len(pieces) != 3:
            raise ValueError(f"range spec must be start:stop:step, got {text!r}")
        try:
            start, stop, step = (float(p) for p in pieces)
        except ValueError:
            raise ValueError(f"non-numeric range spec {text!r}") from None
        if step == 0.0 or not all(map(math.isfinite, (start, stop, step))):
            raise ValueError(f"bad range spec {text!r}")
        count = math.floor((stop - start) / step + 1e-9) + 1
        if count < 1:
            raise ValueError(f"range spec {text!r} produces no values")
        values = [start + k * step for k in range(count)]
    else:
        try:
            values = [float(p) for p in text.split(",") if p.strip()]
        except ValueError:
            raise ValueError(f"non-numeric grid value in {text!r}") from None
        if not values:
            raise ValueError(f"grid spec {text!r} produces no values")
    if integer:
        rounded = []
        for v in values:
            if abs(v - round(v)) > 1e-9:
                raise ValueError(f"grid value {v!r} is not an integer")
            rounded.append(int(round(v)))
        return rounded
    return values


def _write_manifest(
    out_path: str,
    command: str,
    argv: list[str],
    outputs: list[str],
    params: Ar1Params | None = None,
    seed: int | None = None,
    replications: int | None = None,
) -> str:
    manifest = {
        "command": command,
        "params": None
        if params is None
        else {"mu": params.mu, "sigma": params.sigma, "rho": params.rho, "n": params.n},
        "seed": seed,
        "replications": replications,
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds"),
        "outputs": list(outputs),
        "argv": list(argv),
    }
    path = f"{out_path}.manifest.json"
    with open(path, "w") as handle:
        json.dump(manifest, handle, indent=2)
        handle.write("\n")
    return path


def _resolve_workers(args) -> int:
    if getattr(args, "workers", None) is not None:
        return int(args.workers)
    env = os.environ.get("AR1_TSTAT_WORKERS")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise ValueError(f"AR1_TSTAT_WORKERS must be an integer, got {env!r}") from None
    return 1


# -- subcommands -------------------------------------------------------------


def cmd_table_moments(args, argv) -> int:
    n_grid = _parse_grid(args.grid_n, integer=True)
    rho_grid = _parse_grid(args.grid_rho)
    sigma = float(args.sigma)
    quantities = {
        "var_num": MomentQuantity.SCALED_MEAN_VARIANCE,
        "e_s2": MomentQuantity.SAMPLE_VARIANCE_MEAN,
        "e_s4": MomentQuantity.SAMPLE_VARIANCE_SECOND_MOMENT,
        "var_s2": MomentQuantity.SAMPLE_VARIANCE_VARIANCE,
    }
    rows = []
    for n in n_grid:
        for rho in rho_grid:
            params = Ar1Params(mu=0.0, sigma=sigma, rho=float(rho), n=n)
            row = {"n": n, "rho": float(rho), "sigma": sigma}
            max_rel = 0.0
            flagged = False
            for prefix, quantity in quantities.items():
                report = moments.compare_moment(quantity, params)
                row[f"{prefix}_closed"] = report.closed_form
                row[f"{prefix}_oracle"] = report.oracle
                max_rel = max(max_rel, report.rel_gap)
                flagged = flagged or report.discrepant
            row["max_rel_gap"] = max_rel
            row["discrepancy_flag"] = int(flagged)
            rows.append(row)
    _write_csv(args.out, _TABLE_COLUMNS, rows)
    _write_manifest(args.out, "table-moments", argv, [args.out])
    return 0


def cmd_verify(args, argv) -> int:
    if args.grid == "small":
        n_grid, rho_grid = SMALL_N_GRID, SMALL_RHO_GRID
    else:
        n_grid = rho_grid = None
    if args.grid_n is not None:
        n_grid = _parse_grid(args.grid_n, integer=True)
    if args.grid_rho is not None:
        rho_grid = _parse_grid(args.grid_rho)
    report = run_verification(
        n_grid=n_grid,
        rho_grid=rho_grid,
        sigma=float(args.sigma),
        tolerance_override=args.tol,
    )
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        print(
            f"{status} {check.name}: max gap {check.max_gap:.3e} "
            f"(tol {check.tolerance:g}) at n={check.worst_n} rho={check.worst_rho}"
        )
    print(
        f"{len(report.discrepancies)} fourth-moment grid points flagged "
        "against the trace oracle (reported, non-fatal)"
    )
    with open(args.out, "w") as handle:
        json.dump(report.as_dict(), handle, indent=2)
        handle.write("\n")
    _write_manifest(args.out, "verify", argv, [args.out])
    return 0 if report.passed else 1


def _reference_cdf(functional: Functional, params: Ar1Params):
    """Exact reference law for the functional, or None if there is none."""
    if functional in (Functional.T_STAT, Functional.MODIFIED_T_STAT):
        law = StudentLaw(params.n - 1)
        return law.cdf, f"student-t({params.n - 1})"
    if functional is Functional.SAMPLE_MEAN:
        law = linear_combination_law(params, np.full(params.n, 1.0 / params.n))

        def normal_cdf(x):
            z = (np.asarray(x, dtype=float) - law.mean) / (law.std * math.sqrt(2.0))
            return 0.5 * (1.0 + erf(z))

        return normal_cdf, f"normal({law.mean:g},{law.variance:g})"
    return None, ""


def cmd_simulate(args, argv) -> int:
    params = Ar1Params(mu=args.mu, sigma=args.sigma, rho=args.rho, n=args.n)
    config = SimulationConfig(
        params=params,
        replications=args.reps,
        seed=args.seed,
        workers=_resolve_workers(args),
    )
    functional = Functional(args.functional)
    values = simulate_functional(config, functional)
    summary = summarize(values)
    cdf, reference = _reference_cdf(functional, params)
    if cdf is not None:
        ks = ks_test(values, cdf, reference=reference)
        ks_fields = {
            "ks_statistic": ks.statistic,
            "ks_p_value": ks.p_value,
            "ks_reference": ks.reference,
        }
    else:
        ks_fields = {"ks_statistic": None, "ks_p_value": None, "ks_reference": None}
    row = {
        "functional": functional.value,
        "n": params.n,
        "rho": params.rho,
        "mu": params.mu,
        "sigma": params.sigma,
        "seed": config.seed,
        "replications": config.replications,
        "used": summary.replications,
        "degenerate": summary.degenerate,
        "mean": summary.mean,
        "variance": summary.variance,
        "std_error_mean": summary.std_error_mean,
        "std_error_variance": summary.std_error_variance,
        **ks_fields,
    }
    outputs = [args.out]
    if args.format == "json":
        with open(args.out, "w") as handle:
            json.dump(row, handle, indent=2)
            handle.write("\n")
    else:
        _write_csv(args.out, _SUMMARY_COLUMNS, [row])
    if args.values_out:
        _write_csv(args.values_out, ["value"], [{"value": float(v)} for v in values])
        outputs.append(args.values_out)
    _write_manifest(
        args.out,
        "simulate",
        argv,
        outputs,
        params=params,
        seed=config.seed,
        replications=config.replications,
    )
    return 0


def cmd_density(args, argv) -> int:
    if (args.dof is None) == (args.functional is None):
        raise ValueError("give exactly one of --dof (law mode) or --functional (simulation mode)")
    grid = np.asarray(_parse_grid(args.grid_t), dtype=float)
    if args.dof is not None:
        law = StudentLaw(args.dof)
        closed = np.asarray(law.density_closed(grid), dtype=float)
        integral = np.asarray(law.density_integral(grid), dtype=float)
        rows = [
            {"t": float(t), "pdf_closed": float(c), "pdf_integral": float(i)}
            for t, c, i in zip(grid, closed, integral)
        ]
        columns = ["t", "pdf_closed", "pdf_integral"]
        params = seed = reps = None
    else:
        missing = [
            flag
            for flag, value in (
                ("--n", args.n),
                ("--rho", args.rho),
                ("--reps", args.reps),
                ("--seed", args.seed),
            )
            if value is None
        ]
        if missing:
            raise ValueError(f"simulation mode needs {', '.join(missing)}")
        params = Ar1Params(mu=args.mu, sigma=args.sigma, rho=args.rho, n=args.n)
        config = SimulationConfig(
            params=params,
            replications=args.reps,
            seed=args.seed,
            workers=_resolve_workers(args),
        )
        values = simulate_functional(config, Functional(args.functional))
        kde = empirical_density(values, grid, bandwidth=args.bandwidth)
        rows = [{"t": float(t), "kde": float(d)} for t, d in zip(grid, kde)]
        columns = ["t", "kde"]
        seed, reps = config.seed, config.replications
    _write_csv(args.out, columns, rows)
    _write_manifest(
        args.out, "density", argv, [args.out], params=params, seed=seed, replications=reps
    )
    return 0


# -- parser wiring ------------------------------------------------------------


def _add_model_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--n", type=int, required=True, help="sample length (>= 2)")
    parser.add_argument("--rho", type=float, required=True, help="lag-1 autocorrelation")
    parser.add_argument("--mu", type=float, default=0.0, help="process mean")
    parser.add_argument("--sigma", type=float, default=1.0, help="innovation scale")


def _add_run_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--reps", type=int, required=True, help="number of replications")
    parser.add_argument("--seed", type=int, required=True, help="64-bit stream seed")
    parser.add_argument(
        "--workers",
        type=int,
        default=None,
        help="worker processes (default: AR1_TSTAT_WORKERS or 1; never changes results)",
    )


def build_parser(config_defaults: dict | None = None) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ar1-tstat",
        description="Moments, whitening, and Monte Carlo checks for the AR(1) t-statistic.",
    )
    parser.add_argument(
        "--config",
        default=None,
        help="JSON file of defaults; keys mirror the long flags, explicit flags win",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    table = subparsers.add_parser(
        "table-moments", help="tabulate closed-form moments against the trace oracle"
    )
    table.add_argument("--grid-n", required=True, help="grid of n values")
    table.add_argument("--grid-rho", required=True, help="grid of rho values")
    table.add_argument("--sigma", type=float, default=1.0)
    table.add_argument("--out", required=True, help="CSV output path")
    table.set_defaults(handler=cmd_table_moments)

    verify = subparsers.add_parser(
        "verify", help="run the identity grid and write a JSON report"
    )
    verify.add_argument("--grid", choices=["default", "small"], default="default")
    verify.add_argument("--grid-n", default=None, help="override n grid")
    verify.add_argument("--grid-rho", default=None, help="override rho grid")
    verify.add_argument("--sigma", type=float, default=1.0)
    verify.add_argument("--tol", type=float, default=None, help="override every tolerance")
    verify.add_argument("--out", required=True, help="JSON report path")
    verify.set_defaults(handler=cmd_verify)

    simulate = subparsers.add_parser(
        "simulate", help="replicate a functional and summarize it"
    )
    _add_model_flags(simulate)
    _add_run_flags(simulate)
    simulate.add_argument(
        "--functional",
        required=True,
        choices=[f.value for f in Functional],
        help="per-path statistic to accumulate",
    )
    simulate.add_argument("--out", required=True, help="summary output path")
    simulate.add_argument(
        "--values-out", default=None, help="optional per-replication value dump (CSV)"
    )
    simulate.add_argument("--format", choices=["csv", "json"], default="csv")
    simulate.set_defaults(handler=cmd_simulate)

    density = subparsers.add_parser(
        "density", help="dump a Student density (dual route) or a simulated KDE"
    )
    density.add_argument("--dof", type=float, default=None, help="law mode: degrees of freedom")
    density.add_argument(
        "--functional",
        default=None,
        choices=[f.value for f in Functional],
        help="simulation mode: statistic to estimate",
    )
    density.add_argument("--n", type=int, default=None)
    density.add_argument("--rho", type=float, default=None)
    density.add_argument("--mu", type=float, default=0.0)
    density.add_argument("--sigma", type=float, default=1.0)
    density.add_argument("--reps", type=int, default=None)
    density.add_argument("--seed", type=int, default=None)
    density.add_argument("--workers", type=int, default=None)
    density.add_argument("--bandwidth", type=float, default=None)
    density.add_argument("--grid-t", required=True, help="evaluation grid for t")
    density.add_argument("--out", required=True, help="CSV output path")
    density.set_defaults(handler=cmd_density)

    if config_defaults:
        normalized = {
            str(key).replace("-", "_"): value for key, value in config_defaults.items()
        }
        for sub in (table, verify, simulate, density):
            dests = {action.dest for action in sub._actions}
            sub.set_defaults(**{k: v for k, v in normalized.items() if k in dests})
            # a config-supplied value satisfies a required flag
            for action in sub._actions:
                if action.required and action.dest in normalized:
                    action.required = False
    return parser


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    with open(path) as handle:
        loaded = json.load(handle)
    if not isinstance(loaded, dict):
        raise ValueError("config file must hold a JSON object of flag defaults")
    return loaded


_NEGATIVE_VALUE = re.compile(r"^-[\d.]")


def _merge_negative_values(argv: list[str]) -> list[str]:
    """Join '--flag -0.8,...' into '--flag=-0.8,...' so argparse accepts it.

    Every flag here takes a value, so a token starting '-<digit>' right
    after a long flag can only be that flag's value.
    """
    merged: list[str] = []
    skip = False
    for i, token in enumerate(argv):
        if skip:
            skip = False
            continue
        nxt = argv[i + 1] if i + 1 < len(argv) else None
        if (
            token.startswith("--")
            and "=" not in token
            and nxt is not None
            and _NEGATIVE_VALUE.match(nxt)
        ):
            merged.append(f"{token}={nxt}")
            skip = True
        else:
            merged.append(token)
    return merged


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parse_argv = _merge_negative_values(argv)
    pre = argparse.ArgumentParser(add_help=False)
    pre.add_argument("--config", default=None)
    known, _ = pre.parse_known_args(parse_argv)
    try:
        config = _load_config(known.config)
        parser = build_parser(config)
    except (OSError, ValueError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    try:
        args = parser.parse_args(parse_argv)
    except SystemExit as exc:
        return 0 if exc.code in (0, None) else 2
    try:
        return args.handler(args, argv)
    except (ValueError, TypeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


def entrypoint() -> None:
    raise SystemExit(main())

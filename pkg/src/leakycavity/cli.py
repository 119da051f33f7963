"""Command-line interface: run, sweep, rates.

`run` integrates the master equation on a time grid and writes one CSV row
per grid point (17 significant digits, LF line endings, fixed column
order) plus PNG report figures next to it; `rates` emits the decay-rate
columns only; `sweep` repeats a run over a list of parameter values and
writes per-value files plus a summary.

Exit codes: 0 success, 2 configuration error, 3 numerical-convergence
error, 4 I/O error.  No behavior is read from environment variables.
"""

import argparse
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import config as cfgmod
from . import dynamics, propagator, rates
from .config import HEADERS, ConfigParseError, UnknownParameter
from .dynamics import InvalidInitialState, observables
from .propagator import StepSizeTooLarge
from .rates import QuadratureNonConvergence
from .spectral import ValidationError

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERICS = 3
EXIT_IO = 4


def _fmt(x):
    # 17 significant digits round-trips float64; +0.0 normalizes -0.0
    return f"{float(x) + 0.0:.17g}"


def write_csv(path, names, cols):
    """Write columns as CSV: annotated header, LF endings, '.' decimals."""
    n = len(cols[names[0]])
    lines = [",".join(HEADERS.get(name, name) for name in names)]
    for k in range(n):
        lines.append(",".join(_fmt(cols[name][k]) for name in names))
    data = ("\n".join(lines) + "\n").encode("ascii")
    with open(path, "wb") as fh:
        fh.write(data)


def read_csv(path):
    with open(path, "rb") as fh:
        lines = fh.read().decode("ascii").splitlines()
    inverse = {v: k for k, v in HEADERS.items()}
    names = [inverse.get(h, h) for h in lines[0].split(",")]
    cols = {name: [] for name in names}
    for line in lines[1:]:
        for name, tok in zip(names, line.split(",")):
            cols[name].append(float(tok))
    return {name: np.array(vals) for name, vals in cols.items()}


def compute_timeseries(cfg, engine):
    """All canonical columns on the configured grid for one engine."""
    params = cfg.build_params()
    init = cfg.initial_state()
    times = cfg.time_grid()
    tol = cfg.get("tolerances.quad")
    spec = params.spec
    cols = {"t": times}
    cols["gamma_minus"] = np.array(
        [rates.gamma_closed(spec, params.omega_minus, t) for t in times])
    cols["gamma_plus"] = np.array(
        [rates.gamma_closed(spec, params.omega_plus, t) for t in times])
    im, ip = dynamics.rate_integral_grid(params, times, tol)
    cols["I_minus"], cols["I_plus"] = im, ip
    if engine == "analytic":
        states = [dynamics.state_from_integrals(init, im[k], ip[k],
                                               params.Omega, t)
                  for k, t in enumerate(times)]
    elif engine == "rk4":
        traj = propagator.propagate_times(params, init.as_matrix(), times,
                                          cfg.get("solver.dt"))
        states = [dynamics.DressedDensity.from_matrix(m)
                  for m in traj.states]
    else:
        raise ValueError(f"unknown engine {engine!r}")
    cols["p_E0"] = np.array([s.p0 for s in states])
    cols["p_Eminus"] = np.array([s.p_minus for s in states])
    cols["p_Eplus"] = np.array([s.p_plus for s in states])
    cols["coh_re"] = np.array([s.coh.real for s in states])
    cols["coh_im"] = np.array([s.coh.imag for s in states])
    obs = [observables(s) for s in states]
    cols["P_0g"] = np.array([o.P_0g for o in obs])
    cols["P_1g"] = np.array([o.P_1g for o in obs])
    cols["P_0e"] = np.array([o.P_0e for o in obs])
    return cols


def compute_rates_table(cfg):
    """Cheap rate-inspection path: t, gamma_minus, gamma_plus only."""
    params = cfg.build_params()
    times = cfg.time_grid()
    spec = params.spec
    return {
        "t": times,
        "gamma_minus": np.array(
            [rates.gamma_closed(spec, params.omega_minus, t) for t in times]),
        "gamma_plus": np.array(
            [rates.gamma_closed(spec, params.omega_plus, t) for t in times]),
    }


def check_rows(cols, engine):
    """Post-emission validation: every row must satisfy the population
    invariants at the engine's accuracy."""
    tol = 1e-12 if engine == "analytic" else 1e-9
    pm, pp, p0 = cols["p_Eminus"], cols["p_Eplus"], cols["p_E0"]
    coh2 = cols["coh_re"] ** 2 + cols["coh_im"] ** 2
    problems = []
    bad = np.abs(p0 + pm + pp - 1.0) > tol
    if bad.any():
        problems.append(f"dressed populations do not sum to 1 at row "
                        f"{int(np.argmax(bad))}")
    for name in ("p_E0", "p_Eminus", "p_Eplus", "P_0g", "P_1g", "P_0e"):
        bad = (cols[name] < -tol) | (cols[name] > 1.0 + tol)
        if bad.any():
            problems.append(f"{name} outside [0, 1] at row "
                            f"{int(np.argmax(bad))}")
    bad = coh2 > pm * pp + tol
    if bad.any():
        problems.append(f"|coh|^2 > p_minus*p_plus at row "
                        f"{int(np.argmax(bad))}")
    bad = np.abs(cols["P_0g"] + cols["P_1g"] + cols["P_0e"] - 1.0) > tol
    if bad.any():
        problems.append(f"bare populations do not sum to 1 at row "
                        f"{int(np.argmax(bad))}")
    return problems


def _load_config(args):
    if args.preset and args.config:
        raise ConfigParseError("--preset and --config are mutually exclusive")
    if args.preset:
        cfg = cfgmod.preset(args.preset)
    elif args.config:
        cfg = cfgmod.parse_file(args.config)
    else:
        raise ConfigParseError("either --preset or --config is required")
    overrides = []
    for item in args.set or []:
        if "=" not in item:
            raise ConfigParseError(f"--set expects key=value, got {item!r}")
        key, value = item.split("=", 1)
        overrides.append((key.strip(), value.strip()))
    if overrides:
        cfg = cfg.with_overrides(overrides)
    if args.engine:
        cfg = cfg.with_overrides([("engine", args.engine)])
    return cfg.validated()


def _default_out(args, fallback):
    if args.out:
        return Path(args.out)
    if args.preset:
        return Path(f"{args.preset}.csv")
    if args.config:
        return Path(Path(args.config).stem + ".csv")
    return Path(fallback)


def _figures_enabled(args):
    return not args.no_figures


def cmd_run(args):
    cfg = _load_config(args)
    if args.print_config:
        sys.stdout.write(cfg.to_text())
        return EXIT_OK
    engine = cfg.get("engine")
    out = _default_out(args, "run.csv")
    names = cfg.columns()
    from . import figures
    if engine in ("analytic", "rk4"):
        cols = compute_timeseries(cfg, engine)
        write_csv(out, names, cols)
        print(f"wrote {out} ({len(cols['t'])} rows, engine={engine})")
        if args.check:
            problems = check_rows(read_csv(out), engine)
            if problems:
                for p in problems:
                    print(f"check FAILED: {p}", file=sys.stderr)
                return EXIT_NUMERICS
            print("check passed: all rows satisfy the population invariants")
        if _figures_enabled(args):
            for p in figures.render_timeseries(cols, str(out.with_suffix(""))):
                print(f"wrote {p}")
        return EXIT_OK
    # engine == "both": two files plus a max-discrepancy report
    cols_a = compute_timeseries(cfg, "analytic")
    cols_r = compute_timeseries(cfg, "rk4")
    stem = out.with_suffix("")
    out_a = Path(f"{stem}.analytic.csv")
    out_r = Path(f"{stem}.rk4.csv")
    write_csv(out_a, names, cols_a)
    write_csv(out_r, names, cols_r)
    disc = max(np.abs(cols_a[name] - cols_r[name]).max() for name in names)
    print(f"wrote {out_a}")
    print(f"wrote {out_r}")
    print(f"max engine discrepancy: {disc:.3e}")
    if args.check:
        problems = (check_rows(read_csv(out_a), "analytic")
                    + check_rows(read_csv(out_r), "rk4"))
        if problems:
            for p in problems:
                print(f"check FAILED: {p}", file=sys.stderr)
            return EXIT_NUMERICS
        print("check passed: all rows satisfy the population invariants")
    if _figures_enabled(args):
        for p in figures.render_timeseries(cols_a, str(stem)):
            print(f"wrote {p}")
    return EXIT_OK


def cmd_rates(args):
    cfg = _load_config(args)
    if args.print_config:
        sys.stdout.write(cfg.to_text())
        return EXIT_OK
    out = _default_out(args, "rates.csv")
    cols = compute_rates_table(cfg)
    write_csv(out, ["t", "gamma_minus", "gamma_plus"], cols)
    print(f"wrote {out} ({len(cols['t'])} rows)")
    if _figures_enabled(args):
        from . import figures
        print(f"wrote {figures.render_rates(cols, str(out.with_suffix('')))}")
    return EXIT_OK


def sweep_summaries(cfg, param, values):
    """Per-value column sets plus summary rows, computed concurrently."""
    if param not in cfgmod._SCHEMA:
        raise UnknownParameter(f"unknown sweep parameter {param!r}")
    ws, we = cfg.sweep_window()

    def one(value):
        sub = cfg.with_overrides([(param, value)]).validated()
        cols = compute_timeseries(sub, "analytic")
        params = sub.build_params()
        mask = (cols["t"] >= ws) & (cols["t"] <= we)
        if not mask.any():
            raise ConfigParseError(
                f"sweep window [{ws:g}, {we:g}] contains no grid points")
        return cols, {
            "value": float(value),
            "gamma_minus_inf": rates.stationary_rate(params.spec,
                                                     params.omega_minus),
            "gamma_plus_inf": rates.stationary_rate(params.spec,
                                                    params.omega_plus),
            "plateau_P_0e": float(np.mean(cols["P_0e"][mask])),
        }

    if not values:
        return [], []
    with ThreadPoolExecutor(max_workers=min(4, len(values))) as pool:
        results = list(pool.map(one, values))
    return [r[0] for r in results], [r[1] for r in results]


def cmd_sweep(args):
    cfg = _load_config(args)
    param = args.param
    values = [v.strip() for v in args.values.split(",") if v.strip()]
    out = _default_out(args, "sweep.csv")
    stem = out.with_suffix("")
    names = cfg.columns()
    all_cols, summaries = sweep_summaries(cfg, param, values)
    for idx, cols in enumerate(all_cols):
        path = Path(f"{stem}.{idx:02d}.csv")
        write_csv(path, names, cols)
        print(f"wrote {path} ({param}={values[idx]})")
    summary_names = ["value", "gamma_minus_inf", "gamma_plus_inf",
                     "plateau_P_0e"]
    summary_cols = {name: [s[name] for s in summaries]
                    for name in summary_names}
    write_csv(out, summary_names, summary_cols)
    print(f"wrote {out} ({len(summaries)} values of {param})")
    if _figures_enabled(args) and summaries:
        from . import figures
        vals = [s["value"] for s in summaries]
        print(f"wrote {figures.render_sweep(vals, summaries, param, stem)}")
    return EXIT_OK


def _add_common(sub):
    sub.add_argument("--preset", choices=sorted(cfgmod.PRESETS),
                     help="use a bundled scenario")
    sub.add_argument("--config", help="path to a key=value config file")
    sub.add_argument("--set", action="append", metavar="KEY=VALUE",
                     help="override a config key (repeatable)")
    sub.add_argument("--out", help="output CSV path")
    sub.add_argument("--no-figures", action="store_true",
                     help="skip PNG report figures")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="leakycavity",
        description="Lossy-cavity dynamics with reservoir memory: "
                    "time-dependent decay rates and dressed-state "
                    "populations.")
    subs = parser.add_subparsers(dest="command", required=True)

    run = subs.add_parser("run", help="full time series")
    _add_common(run)
    run.add_argument("--engine", choices=cfgmod.ENGINES,
                     help="override the configured engine")
    run.add_argument("--check", action="store_true",
                     help="re-read the CSV and verify row invariants")
    run.add_argument("--print-config", action="store_true",
                     help="print the effective config and exit")
    run.set_defaults(func=cmd_run)

    rates_p = subs.add_parser("rates", help="decay-rate columns only")
    _add_common(rates_p)
    rates_p.add_argument("--print-config", action="store_true",
                         help="print the effective config and exit")
    rates_p.set_defaults(func=cmd_rates, engine=None)

    sweep = subs.add_parser("sweep", help="repeat a run over parameter "
                                          "values")
    _add_common(sweep)
    sweep.add_argument("--param", required=True,
                       help="config key to sweep, e.g. spectrum.lambda")
    sweep.add_argument("--values", required=True,
                       help="comma-separated parameter values")
    sweep.set_defaults(func=cmd_sweep, engine=None)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except (ConfigParseError, UnknownParameter, ValidationError,
            InvalidInitialState, ValueError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (QuadratureNonConvergence, StepSizeTooLarge) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERICS
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())

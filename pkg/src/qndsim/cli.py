"""``qnd`` command-line front end.

Subcommands: sweep, optimize, simulate, validate.  Exit codes: 0 success,
1 validation failure, 2 configuration error, 3 numeric error.  Set
``QND_LOG`` (DEBUG, INFO, WARNING, ...) for log verbosity on stderr.
"""

import argparse
import csv
import io
import json
import logging
import math
import os
import sys

import numpy as np

from . import __version__, _kernels
from .config import ConfigError, load_config
from .errors import QNDError
from .measurement import (
    conditional_moments,
    displacement_hardware,
    effective_sigma2,
    inferred_distribution,
    sample_outcomes,
)
from .tradeoff import (
    GAUSSIAN_OBJECTIVE,
    FixPhi,
    FixProbe,
    grid_objective,
    equal_fidelity_point,
    numeric_frontier,
    optimize_sum,
    physical_from_x,
)
from .validation import ks_statistic, optimum_line, run_checks

log = logging.getLogger("qndsim")

EXIT_OK, EXIT_VALIDATION, EXIT_CONFIG, EXIT_NUMERIC = 0, 1, 2, 3


def fmt(value):
    """Shortest round-trip decimal for floats."""
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    return str(value)


def _csv_text(header, rows):
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _json_text(obj):
    return json.dumps(obj, indent=2, sort_keys=False) + "\n"


def _emit(text, out):
    if out is None:
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _signal_variance(cfg, signal):
    return cfg.signal_variance if cfg.signal == "gaussian" else signal.variance()


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_sweep(cfg, args):
    signal = cfg.build_signal()
    sigma_s2 = _signal_variance(cfg, signal)
    xs = np.geomspace(cfg.x_lo, cfg.x_hi, cfg.sweep_points)
    log.info("sweep: %d points over [%g, %g], sigma_s2=%g", xs.size, cfg.x_lo, cfg.x_hi, sigma_s2)
    rows = []
    for pt in numeric_frontier(signal, xs, sigma_s2):
        phys = physical_from_x(pt.x, sigma_s2, FixPhi(cfg.setup.phi))
        rows.append([pt.x, pt.F, pt.G, pt.sum, pt.x * pt.x * sigma_s2, phys.N_p])
    header = ["x", "F", "G", "F+G", "sigma_eff2", "N_p"]
    if args.format == "json":
        return _json_text([dict(zip(header, map(float, row))) for row in rows])
    return _csv_text(header, rows)


def optimize_report(cfg):
    signal = cfg.build_signal()
    sigma_s2 = _signal_variance(cfg, signal)
    if cfg.signal == "gaussian":
        objective, kind = GAUSSIAN_OBJECTIVE, "closed_form"
    else:
        objective, kind = grid_objective(signal, sigma_s2), "grid"
    best = optimize_sum(objective)
    equal = equal_fidelity_point(objective)

    def realize(x):
        return {
            "fix_phi": physical_from_x(x, sigma_s2, FixPhi(cfg.setup.phi)).as_dict(),
            "fix_probe": physical_from_x(
                x, sigma_s2, FixProbe(cfg.probe.r, cfg.probe.direction)
            ).as_dict(),
        }

    return {
        "signal": cfg.signal,
        "sigma_s2": sigma_s2,
        "objective": kind,
        "x_m": best.x,
        "F": best.F,
        "G": best.G,
        "F+G": best.sum,
        "x_e": equal.x,
        "F_e": equal.F,
        "G_e": equal.G,
        "optimum": realize(best.x),
        "equal_point": realize(equal.x),
    }


def _flatten(obj, prefix=""):
    for key, value in obj.items():
        name = f"{prefix}{key}"
        if isinstance(value, dict):
            yield from _flatten(value, name + ".")
        else:
            yield name, value


def cmd_optimize(cfg, args):
    report = optimize_report(cfg)
    if args.format == "csv":
        return _csv_text(["key", "value"], _flatten(report))
    return _json_text(report)


def simulate(cfg):
    """Sampled outcomes with their feedback settings, plus a summary dict."""
    signal = cfg.build_signal()
    setup = cfg.setup
    s2 = effective_sigma2(setup, cfg.probe)
    xs = sample_outcomes(signal, s2, cfg.n_samples, cfg.seed)
    X = -xs * math.sin(setup.phi)
    alpha = xs * setup.feedback_gain
    z = np.array([displacement_hardware(a, cfg.tau3).real for a in alpha])
    columns = {
        "inferred_x": xs,
        "X": X,
        "alpha_star": alpha,
        "r_star": np.full(xs.size, setup.r_star),
        "pump_z": z,
    }
    summary = {
        "n_samples": int(xs.size),
        "seed": int(cfg.seed),
        "phi": setup.phi,
        "tau1": setup.tau1,
        "r_star": setup.r_star,
        "sigma_eff2": s2,
        "sigma_s2": _signal_variance(cfg, signal),
        "x": math.sqrt(s2 / _signal_variance(cfg, signal)),
        "sample_mean": float(np.mean(xs)),
        "sample_variance": float(np.var(xs)),
        "ks_statistic": ks_statistic(
            xs, _distribution_cdf(inferred_distribution(signal, s2))
        ),
    }
    if cfg.signal == "gaussian":
        summary["expected_variance"] = cfg.signal_variance + s2
    if cfg.conditional_moments:
        means, variances = conditional_moments(signal, xs, s2)
        columns["cond_mean"] = means
        columns["cond_variance"] = variances
        summary["mean_conditional_variance"] = float(np.mean(variances))
    return columns, summary


def _distribution_cdf(dist):
    cdf = dist.cdf()
    return lambda v: np.interp(v, dist.grid.nodes, cdf)


def cmd_simulate(cfg, args):
    columns, summary = simulate(cfg)
    header = list(columns)
    rows = zip(*(columns[h] for h in header))
    if args.format == "json":
        return _json_text({
            "summary": summary,
            "columns": header,
            "rows": [[float(v) for v in row] for row in rows],
        })
    summary_text = _json_text(summary)
    if args.out is not None:
        with open(args.out + ".summary.json", "w", encoding="utf-8") as fh:
            fh.write(summary_text)
    else:
        sys.stderr.write(summary_text)
    return _csv_text(header, rows)


def cmd_validate(cfg, args):
    results = run_checks(cfg, log)
    lines = [r.line() for r in results]
    n_pass = sum(r.passed for r in results)
    lines.append(f"optimum: {optimum_line()}")
    lines.append(f"{n_pass}/{len(results)} checks passed (kernels: {_kernels.BACKEND})")
    args.validation_failed = n_pass != len(results)
    return "\n".join(lines) + "\n"


COMMANDS = {
    "sweep": cmd_sweep,
    "optimize": cmd_optimize,
    "simulate": cmd_simulate,
    "validate": cmd_validate,
}


def build_parser():
    parser = argparse.ArgumentParser(prog="qnd", description="Tunable QND quadrature measurement")
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="key = value scenario file")
        p.add_argument("--out", help="output path (default stdout)")
        p.add_argument("--seed", type=int)
        p.add_argument("--grid-points", type=int)
        p.add_argument("--x-max", type=float)
        p.add_argument("--format", choices=("csv", "json"),
                       default="json" if name == "optimize" else "csv")
        p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE",
                       help="override a config key (repeatable)")
    return parser


def _overrides(args):
    out = {}
    for item in args.set:
        if "=" not in item:
            raise ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        key, value = item.split("=", 1)
        out[key.strip()] = value.strip()
    for key, value in (("seed", args.seed), ("grid_points", args.grid_points),
                       ("x_max", args.x_max)):
        if value is not None:
            out[key] = value
    return out


def main(argv=None):
    logging.basicConfig(
        level=os.environ.get("QND_LOG", "WARNING").upper(),
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    args = build_parser().parse_args(argv)
    args.validation_failed = False
    try:
        cfg = load_config(args.config, _overrides(args))
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    try:
        text = COMMANDS[args.command](cfg, args)
    except (QNDError, ValueError, FloatingPointError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    _emit(text, args.out)
    return EXIT_VALIDATION if args.validation_failed else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point: figure presets, optimisation and single-trial dumps."""
from __future__ import annotations

import argparse
import csv
import io
import logging
import os
import sys
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from . import experiments as ex
from .channel import ENVIRONMENTS
from .config import SEED_ENV_VAR, RunConfig, load_config
from .errors import ConfigError, InvalidParameterError
from .network import NodeKind, associate, build_deployment, compute_metrics

log = logging.getLogger("dronenet")

SWEEP_COLUMNS = ["series", "parameter", "mean", "stderr", "ci95_low", "ci95_high", "trials"]
COUNT_COLUMNS = ["users_terrestrial", "users_big_drone", "users_small_drone", "users_total"]

USAGE_EPILOG = f"""\
seed precedence (lowest to highest): config file `seed`, ${SEED_ENV_VAR}, --seed.
exit codes: 0 success, 1 configuration error, 2 runtime error.
"""


def fmt(value) -> str:
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return format(float(value), ".12g")


def sweep_rows(series: str, result: ex.SweepResult, counts: bool = False) -> List[list]:
    rows = []
    for point in result.points:
        e = point.estimate
        row = [series, fmt(point.value), fmt(e.mean), fmt(e.stderr),
               fmt(e.ci95_low), fmt(e.ci95_high), fmt(e.trials)]
        if counts:
            c = point.count_samples.mean(axis=0)
            row += [fmt(v) for v in c] + [fmt(point.count_samples.sum(axis=1).mean())]
        rows.append(row)
    return rows


def emit_csv(header: Sequence[str], rows: Iterable[Sequence], path: Optional[str] = None) -> str:
    """Write rows as CSV to ``path`` (or return the text when ``path`` is None)."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    text = buf.getvalue()
    if path is not None:
        try:
            with open(path, "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise OSError(f"cannot write {path}: {exc.strerror}") from exc
    return text


def emit_sweep_csv(result: ex.SweepResult, path: Optional[str] = None, series: str = "",
                   counts: bool = False) -> str:
    header = SWEEP_COLUMNS + (COUNT_COLUMNS if counts else [])
    return emit_csv(header, sweep_rows(series, result, counts), path)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="TOML run configuration")
    common.add_argument("--seed", type=int, help="master seed (overrides config and env)")
    common.add_argument("--trials", type=int, help="trials per grid point")
    common.add_argument("--out", metavar="PATH", help="CSV output path (default: stdout)")
    common.add_argument("--env", choices=sorted(ENVIRONMENTS), help="environment preset")
    common.add_argument("--jobs", type=int, help="worker threads for trials")

    parser = _Parser(
        prog="dronenet",
        description="Monte Carlo spectral-efficiency study of multi-tier drone networks.",
        epilog=USAGE_EPILOG,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    sub = parser.add_subparsers(dest="command", parser_class=_Parser)
    sub.add_parser("fig2", parents=[common],
                   help="typical-user SE vs small-drone proportion (drone-only network)")
    sub.add_parser("fig3", parents=[common],
                   help="typical-user SE vs small-drone altitude (drone-only network)")
    sub.add_parser("fig4", parents=[common],
                   help="network SE vs user/BS ratio with and without drones, plus counts")
    opt = sub.add_parser("optimize", parents=[common],
                         help="sweep one parameter of the configured scenario and report the argmax")
    opt.add_argument("--param", choices=["small-fraction", "altitude"], default="small-fraction")
    trial = sub.add_parser("trial", parents=[common], help="per-user metrics of one trial")
    trial.add_argument("--index", type=int, default=0, help="trial index")
    return parser


def resolve_config(args) -> RunConfig:
    config = load_config(args.config) if args.config else RunConfig()
    changes = {}
    env_seed = os.environ.get(SEED_ENV_VAR)
    if env_seed is not None:
        try:
            changes["seed"] = int(env_seed)
        except ValueError:
            raise ConfigError(f"{SEED_ENV_VAR} must be an integer, got {env_seed!r}") from None
    if args.seed is not None:
        changes["seed"] = args.seed
    if args.trials is not None:
        changes["trials"] = args.trials
    if args.out is not None:
        changes["output"] = args.out
    if args.jobs is not None:
        changes["n_jobs"] = args.jobs
    if args.env is not None:
        changes["environment"] = args.env
    return config.replace(**changes) if changes else config


def _envs(args, config) -> List[str]:
    if args.env is not None or config.environment not in ENVIRONMENTS:
        return [config.environment]
    return ["dense-urban", "sub-urban", "high-rise"]


def _figure_spec(config: RunConfig, env_name: str, **overrides):
    spec = config.deployment_spec()
    if env_name in ENVIRONMENTS:
        spec = spec.with_(env=ENVIRONMENTS[env_name])
    return spec.with_(**overrides)


def cmd_fig2(args, config) -> Tuple[list, list]:
    rows = []
    grid = config.grid or ex.SMALL_FRACTION_GRID
    for name in _envs(args, config):
        spec = _figure_spec(config, name, lambda_terrestrial=0.0)
        result = ex.sweep_small_fraction(spec, grid, config.trials, config.seed, config.n_jobs)
        rep = ex.find_optimum(result)
        gain_first, gain_last = ex.improvement_over_endpoints(result)
        log.info("%s: argmax p=%g, gain vs all-big %.0f%%, vs all-small %.0f%%",
                 name, rep.argmax_value, gain_first, gain_last)
        rows += sweep_rows(name, result)
    return SWEEP_COLUMNS, rows


def cmd_fig3(args, config):
    rows = []
    grid = config.grid or ex.ALTITUDE_GRID
    for name in _envs(args, config):
        spec = _figure_spec(config, name, lambda_terrestrial=0.0)
        result = ex.sweep_small_altitude(spec, grid, config.trials, config.seed, config.n_jobs)
        log.info("%s: argmax h_s=%g m", name, ex.find_optimum(result).argmax_value)
        rows += sweep_rows(name, result)
    return SWEEP_COLUMNS, rows


def cmd_fig4(args, config):
    rows = []
    grid = config.grid or ex.LOAD_RATIO_GRID
    # panel (a) at 20 BSs, panel (b) counts at 5 BSs
    for panel, lam_t in (("a", 20.0), ("b", 5.0)):
        spec = _figure_spec(config, config.environment, lambda_terrestrial=lam_t)
        for on, label in ((False, "terrestrial"), (True, "drones")):
            result = ex.sweep_load_ratio(spec, grid, config.trials, config.seed, on, config.n_jobs)
            rows += sweep_rows(f"{panel}-{label}", result, counts=True)
    return SWEEP_COLUMNS + COUNT_COLUMNS, rows


def cmd_optimize(args, config):
    if config.metric == "counts":
        raise ConfigError("optimize needs metric = \"typical-se\" or \"network-se\"")
    if args.param == "small-fraction":
        parameter, grid = "small_fraction", config.grid or ex.SMALL_FRACTION_GRID
    else:
        parameter, grid = "altitude_small", config.grid or ex.ALTITUDE_GRID
    result = ex.sweep(config.deployment_spec(), parameter, grid, config.trials, config.seed,
                      config.metric, config.n_jobs)
    rep = ex.find_optimum(result)
    print(
        f"argmax {result.parameter_name} = {rep.argmax_value:g}  "
        f"mean = {rep.max_metric:.6g}  ci95 = [{rep.ci_at_argmax[0]:.6g}, "
        f"{rep.ci_at_argmax[1]:.6g}]  separated = {rep.separated}",
        file=sys.stderr,
    )
    return SWEEP_COLUMNS, sweep_rows(config.environment, result)


def cmd_trial(args, config):
    spec = config.deployment_spec()
    dep = build_deployment(spec, config.seed, args.index)
    header = ["user", "x", "y", "in_analysis", "serving_node", "serving_kind",
              "sinr", "se", "shared_se"]
    if dep.n_nodes == 0 or dep.n_users == 0:
        return header, []
    assoc = associate(dep, spec.env, spec.radio)
    m = compute_metrics(dep, assoc, spec.env, spec.radio)
    inner = np.hypot(dep.users[:, 0], dep.users[:, 1]) <= spec.region.analysis_radius
    rows = [
        [i, fmt(x), fmt(y), int(inner[i]), int(assoc.serving[i]), NodeKind(k).name.lower(),
         fmt(m.sinr[i]), fmt(m.se[i]), fmt(m.shared_se[i])]
        for i, ((x, y), k) in enumerate(zip(dep.users, m.serving_kind))
    ]
    return header, rows


COMMANDS = {
    "fig2": cmd_fig2,
    "fig3": cmd_fig3,
    "fig4": cmd_fig4,
    "optimize": cmd_optimize,
    "trial": cmd_trial,
}


def run_command(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
        if args.command is None:
            raise ConfigError("missing subcommand")
        config = resolve_config(args)
    except (ConfigError, InvalidParameterError) as exc:
        parser.print_usage(sys.stderr)
        print(f"error: {exc}", file=sys.stderr)
        return 1
    try:
        header, rows = COMMANDS[args.command](args, config)
        text = emit_csv(header, rows, config.output)
    except (ConfigError, InvalidParameterError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - any failure past config is a runtime error
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if config.output is None:
        sys.stdout.write(text)
    return 0


def main():
    logging.basicConfig(level=logging.INFO, format="%(message)s")
    sys.exit(run_command())


if __name__ == "__main__":
    main()

"""
Command-line front end: simulate | run | eval | sweep.

Every command validates its inputs before writing anything, writes each output
under a temporary name first, and exits with a distinct code per failure
family (see core.errors.ExitCode).
"""

import functools
import json
import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import click
import pandas as pd

from . import __version__
from .config.knob_table import SWEEPABLE_KNOBS
from .config.run_config import RunConfig, load_run_config
from .config.settings import settings
from .core.errors import (
    ConfigError,
    ExitCode,
    InvalidSpecError,
    SlamBoosterError,
    UnwritableOutputError,
    exit_code_for,
)
from .core.metrics import MetricsLogger
from .core.runner import BoosterRunner
from .evaluation.experiments import ablation_ladder, knob_ranking_sweep, reference_trajectory
from .evaluation.metrics import compute_ate, ite_series, knob_activity, trajectory_summary
from .evaluation.verification import check_run
from .geometry.camera import CameraIntrinsics
from .simulation.suites import available_suites, load_simulation_spec, simulate
from .storage.dataset import read_dataset, read_trajectory, write_dataset
from .storage.results import check_writable, write_run_outputs, write_sweep_outputs, write_table

logger = logging.getLogger(__name__)


def handle_errors(command):
    """Turn package errors into their exit codes instead of tracebacks."""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        ctx = click.get_current_context()
        try:
            return command(*args, **kwargs)
        except SlamBoosterError as e:
            click.echo(f"Error: {e}", err=True)
            ctx.exit(int(exit_code_for(e)))
        except OSError as e:
            click.echo(f"Error: cannot write output: {e}", err=True)
            ctx.exit(int(ExitCode.UNWRITABLE_OUTPUT))

    return wrapper


def _parse_values(raw: Optional[str]) -> Optional[List[Any]]:
    if raw is None:
        return None
    values = []
    for item in raw.split(","):
        item = item.strip()
        if not item:
            continue
        try:
            values.append(json.loads(item))
        except json.JSONDecodeError as e:
            raise InvalidSpecError(f"sweep value {item!r} is not a number", "cli", e)
    if not values:
        raise InvalidSpecError("--values is empty", "cli")
    return values


def _output_dir(explicit: Optional[str], fallback_name: str) -> Path:
    if explicit:
        return Path(explicit)
    return settings.output_root / fallback_name


def _load_config(config_path: Optional[str], overrides: Sequence[str], dataset: Optional[str]) -> RunConfig:
    overrides = list(overrides)
    if dataset is not None:
        overrides.append(f"dataset={json.dumps(dataset)}")
    config = load_run_config(config_path, overrides)
    if config.dataset is None:
        raise ConfigError("no dataset given (use --dataset or set 'dataset' in the config)", "cli")
    return config


@click.group()
@click.version_option(__version__, prog_name="slam-booster")
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default=None,
    help="Logging level (default: SLAM_BOOSTER_LOG_LEVEL or INFO).",
)
@click.option("--log-file/--no-log-file", default=True, help="Also write a timestamped log file under the log directory.")
@click.pass_context
def cli(ctx, log_level, log_file):
    """Approximate dense SLAM with an online knob controller."""
    ctx.obj = MetricsLogger(level=log_level, to_file=log_file)


@cli.command("simulate")
@click.option("--suite", type=click.Choice(available_suites()), help="Shipped simulation suite.")
@click.option("--spec", "spec_path", type=click.Path(), help="Bundled simulation spec (JSON file or suite name).")
@click.option("--scene", type=click.Path(), help="Scene spec JSON; replaces the spec's scene.")
@click.option("--trajectory", type=click.Path(), help="Trajectory spec JSON; replaces the spec's trajectory.")
@click.option("--noise", type=click.Path(), help="Noise spec JSON; replaces the spec's noise model.")
@click.option("--noiseless", is_flag=True, help="Disable sensor noise.")
@click.option("--seed", type=int, default=None, help="Noise seed (overrides the spec).")
@click.option("--frames", type=int, default=None, help="Resample the trajectory to this many frames.")
@click.option("--out", "out_dir", type=click.Path(), default=None, help="Dataset directory to create.")
@handle_errors
def simulate_command(suite, spec_path, scene, trajectory, noise, noiseless, seed, frames, out_dir):
    """Render a synthetic depth dataset with ground truth."""
    if suite and spec_path:
        raise InvalidSpecError("give either --suite or --spec, not both", "cli")
    source = suite or spec_path
    if source is None and (scene is None or trajectory is None):
        raise InvalidSpecError("give --suite, --spec, or both --scene and --trajectory", "cli")

    spec = load_simulation_spec(source, scene=scene, trajectory=trajectory, noise=noise)
    if frames is not None:
        spec = spec.with_frame_count(frames)
    if noiseless:
        spec = spec.noiseless()
    if seed is not None:
        spec = spec.with_seed(seed)

    target = _output_dir(out_dir, spec.name)
    check_writable(target)
    frames_out, poses = simulate(spec)
    try:
        write_dataset(target, frames_out, poses, CameraIntrinsics(), metadata={"spec": spec.to_dict()})
    except OSError as e:
        raise UnwritableOutputError(f"cannot write dataset {target}: {e}", "cli", e)
    click.echo(f"Wrote {len(frames_out)} frames to {target}")


@cli.command("run")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Run configuration JSON.")
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help="Override a config key, e.g. controller.v_ref=0.03.")
@click.option("--dataset", type=click.Path(), default=None, help="Dataset directory (overrides the config).")
@click.option("--out", "out_dir", type=click.Path(), default=None, help="Output directory (overrides the config).")
@click.option(
    "--reference",
    type=click.Choice(["ground_truth", "accurate"]),
    default=None,
    help="Trajectory ITE is measured against: the dataset's ground truth or a level-0 run.",
)
@click.pass_obj
@handle_errors
def run_command(metrics, config_path, overrides, dataset, out_dir, reference):
    """Run the pipeline and controller over a dataset."""
    if reference is not None:
        overrides = list(overrides) + [f"reference={reference}"]
    config = _load_config(config_path, overrides, dataset)
    data = read_dataset(config.dataset)
    name = Path(config.dataset).name
    target = _output_dir(out_dir or config.output_dir, f"{name}_{config.controller.strategy}")
    check_writable(target)

    truth = None
    if config.reference == "accurate":
        truth = reference_trajectory(data, config)

    result = BoosterRunner(config, metrics=metrics).run(data, reference=truth, name=name)
    check = check_run(result.logs, result.report, result.trajectory, config.controller.bootstrap_frames)
    summary = trajectory_summary(result.logs)
    written = write_run_outputs(
        target,
        result.logs,
        result.report,
        result.trajectory,
        result.report.config,
        activity=knob_activity(result.logs),
        evaluation={**summary, **check.as_dict()},
    )
    ate = "n/a" if result.ate is None else f"{result.ate:.6f}"
    r = summary["velocity_ite_r"]
    r_text = "n/a" if r is None else f"{r:.3f}"
    click.echo(f"ATE {ate} m, {result.report.tracked_pct:.1f}% tracked, velocity/ITE r {r_text}, outputs in {target}")
    if not check.consistent:
        logger.warning(f"Run failed its self-checks: {check.as_dict()}")
        click.echo(f"Warning: run failed its self-checks, see {written['evaluation']}", err=True)


@cli.command("eval")
@click.argument("estimate", type=click.Path())
@click.argument("truth", type=click.Path())
@click.option("--csv", "csv_path", type=click.Path(), default=None, help="Write per-frame ITE to this CSV.")
@handle_errors
def eval_command(estimate, truth, csv_path):
    """Print the ATE (meters) of ESTIMATE against TRUTH."""
    est_index, est = read_trajectory(estimate)
    _, ref = read_trajectory(truth)
    ate = compute_ate(est, ref)
    if csv_path:
        table = pd.DataFrame({"frame": est_index, "ite_m": ite_series(est, ref)})
        write_table(csv_path, table)
    click.echo(f"{ate:.6f}")


def _load_sweep_spec(path: str) -> Dict[str, Any]:
    try:
        spec = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as e:
        raise InvalidSpecError(f"cannot read sweep spec {path}: {e}", "cli", e)
    if not isinstance(spec, dict) or spec.get("type") not in ("knob", "ladder"):
        raise InvalidSpecError("sweep spec needs \"type\": \"knob\" or \"ladder\"", "cli")
    return spec


@cli.command("sweep")
@click.option("--config", "config_path", type=click.Path(), default=None, help="Base run configuration JSON.")
@click.option("--set", "overrides", multiple=True, metavar="KEY=VALUE", help="Override a config key.")
@click.option("--dataset", type=click.Path(), default=None, help="Dataset directory (overrides the config).")
@click.option("--spec", "spec_path", type=click.Path(), default=None, help="Sweep spec JSON: {\"type\": \"knob\"|\"ladder\", ...}.")
@click.option("--knob", type=click.Choice(SWEEPABLE_KNOBS), default=None, help="Knob to sweep, others at level 0.")
@click.option("--values", default=None, help="Comma-separated knob values (default: the knob's table).")
@click.option("--ladder", is_flag=True, help="Run the ablation ladder instead of a knob sweep.")
@click.option("--trials", type=int, default=1, show_default=True, help="Repetitions per knob value.")
@click.option("--workers", type=int, default=None, help="Parallel runs (default: SLAM_BOOSTER_SWEEP_WORKERS).")
@click.option("--reference", type=click.Choice(["ground_truth", "accurate"]), default=None, help="ATE reference.")
@click.option("--out", "out_dir", type=click.Path(), default=None, help="Output directory.")
@handle_errors
def sweep_command(config_path, overrides, dataset, spec_path, knob, values, ladder, trials, workers, reference, out_dir):
    """Knob-ranking sweeps and the ablation ladder."""
    spec: Dict[str, Any] = _load_sweep_spec(spec_path) if spec_path else {}
    is_ladder = ladder or spec.get("type") == "ladder"
    knob = knob or spec.get("knob")
    value_list = _parse_values(values) if values is not None else spec.get("values")
    trials = int(spec.get("trials", trials))
    if not is_ladder and knob is None:
        raise InvalidSpecError("give --knob, --ladder or a --spec file", "cli")
    if not is_ladder and knob not in SWEEPABLE_KNOBS:
        raise InvalidSpecError(f"unknown sweep knob {knob!r}", "cli")
    if reference is not None:
        overrides = list(overrides) + [f"reference={reference}"]

    config = _load_config(config_path, overrides, dataset)
    data = read_dataset(config.dataset)
    name = Path(config.dataset).name
    label = "ladder" if is_ladder else f"sweep_{knob}"
    target = _output_dir(out_dir or config.output_dir, f"{name}_{label}")
    check_writable(target)

    truth = reference_trajectory(data, config) if config.reference == "accurate" else None
    if is_ladder:
        table = ablation_ladder(data, config, workers=workers, reference=truth)
    else:
        table = knob_ranking_sweep(
            data, knob, value_list, config, trials=trials, workers=workers, reference=truth
        )
    sweep = {"type": "ladder" if is_ladder else "knob", "knob": knob, "values": value_list, "trials": trials}
    written = write_sweep_outputs(target, label, table, {**config.echo(), "sweep": sweep})
    click.echo(f"Wrote {len(table)} rows to {written['table']}")


def main():
    cli(prog_name="slam-booster")


if __name__ == "__main__":
    main()

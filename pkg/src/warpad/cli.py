"""Command-line entry point: score images, run evaluations, run sweeps.

Exit codes: 0 success, 1 configuration error, 2 ingestion failure, 3 backend
failure. stdout carries only data (JSON lines / tables / paths); everything
else goes to stderr.
"""

from __future__ import annotations

import json
import os
import sys

import click

from .embedder import EmbedderConfig, make_embedder
from .errors import (
    BackendLoadError,
    ConfigurationError,
    DegenerateInputError,
    IngestionError,
    StructuralError,
    TransportError,
    ValidationError,
    WarpadError,
)
from .evaluation import (
    SWEEP_AXES,
    DatasetManifest,
    parse_corruption,
    run_eval,
    sweep,
)
from .imageops import load_image
from .scoring import DetectorConfig, warpad_score, write_patch_map

EXIT_OK = 0
EXIT_CONFIG = 1
EXIT_INGESTION = 2
EXIT_BACKEND = 3

_RUN_KEYS = {"detector", "embedder", "seed", "output_dir"}


def load_run_config(path=None):
    """Load and validate the declarative run config; unknown keys are fatal."""
    raw = {}
    if path:
        try:
            with open(path) as fh:
                raw = json.load(fh)
        except FileNotFoundError:
            raise ConfigurationError(f"config file not found: {path}") from None
        except json.JSONDecodeError as exc:
            raise ConfigurationError(f"config file is not valid JSON: {exc}") from None
    unknown = set(raw) - _RUN_KEYS
    if unknown:
        raise ConfigurationError(f"unknown config key: {sorted(unknown)[0]!r}")
    try:
        embedder = EmbedderConfig(**raw.get("embedder", {}))
    except TypeError as exc:
        raise ConfigurationError(f"bad embedder config: {exc}") from None
    detector_raw = dict(raw.get("detector", {}))
    detector_raw.pop("embedder", None)
    detector = DetectorConfig.from_dict(detector_raw, embedder=embedder)
    seed = raw.get("seed", 0)
    if not isinstance(seed, int):
        raise ConfigurationError(f"seed must be an integer, got {seed!r}")
    return detector, seed, raw.get("output_dir")


def _echo_effective_config(cfg: DetectorConfig, output_dir=None):
    click.echo(f"effective config digest: {cfg.digest()}", err=True)
    click.echo(json.dumps(cfg.to_dict(), sort_keys=True), err=True)
    if output_dir:
        os.makedirs(output_dir, exist_ok=True)
        with open(os.path.join(output_dir, "effective_config.json"), "w") as fh:
            json.dump(cfg.to_dict(), fh, indent=2, sort_keys=True)


@click.group()
def cli():
    """Training-free AI-generated-image detector and evaluation harness."""


@cli.command("score")
@click.argument("images", nargs=-1, required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path(), help="Run config JSON.")
@click.option("--emit-patch-map", is_flag=True, help="Write per-image patch score grids.")
@click.option("--output-dir", type=click.Path(), default=None)
@click.option("--jobs", type=int, default=None, help="Worker pool width (default: CPU count).")
def cmd_score(images, config_path, emit_patch_map, output_dir, jobs):
    """Score images; one ScoreRecord JSON line per image on stdout (input order)."""
    cfg, _, cfg_output_dir = load_run_config(config_path)
    output_dir = output_dir or cfg_output_dir
    jobs = jobs or os.cpu_count() or 1
    _echo_effective_config(cfg, output_dir)
    embedder = make_embedder(cfg.embedder)

    def worker(path):
        try:
            image = load_image(path)
        except IngestionError as exc:
            return path, None, exc
        return path, warpad_score(image, cfg, embedder, image_id=str(path)), None

    if jobs > 1 and len(images) > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(worker, images))
    else:
        results = [worker(path) for path in images]

    failures = []
    for path, record, error in results:
        if record is None:
            click.echo(f"skip {path}: {error}", err=True)
            failures.append(path)
            continue
        click.echo(record.to_json_line())
        if emit_patch_map:
            stem = os.path.splitext(os.path.basename(str(path)))[0]
            base = output_dir or "."
            os.makedirs(base, exist_ok=True)
            write_patch_map(
                record,
                os.path.join(base, f"{stem}_patch_map.csv"),
                os.path.join(base, f"{stem}_patch_map.json"),
            )
    if failures:
        raise IngestionError(failures[0], f"{len(failures)} of {len(images)} images unreadable")


@cli.command("eval")
@click.option("--manifest", "manifest_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path())
@click.option("--corrupt", "corrupt_text", default=None, help="kind=param[,seed=S]")
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=None)
@click.option("--bins", type=int, default=20)
@click.option("--output-dir", type=click.Path(), default=None)
def cmd_eval(manifest_path, config_path, corrupt_text, seed, jobs, bins, output_dir):
    """Evaluate a dataset manifest; prints the per-generator AUROC table."""
    cfg, cfg_seed, cfg_output_dir = load_run_config(config_path)
    seed = cfg_seed if seed is None else seed
    output_dir = output_dir or cfg_output_dir or "warpad_out"
    jobs = jobs or os.cpu_count() or 1
    _echo_effective_config(cfg, output_dir)
    manifest = DatasetManifest.load(manifest_path)
    corruption = parse_corruption(corrupt_text) if corrupt_text else None
    report = run_eval(
        manifest, cfg, corruption, seed=seed, jobs=jobs, output_dir=output_dir, bins=bins
    )
    for gen, value in report.per_generator.items():
        click.echo(f"{gen}\t{value:.6f}")
    click.echo(f"mean\t{report.mean_auroc:.6f}")
    click.echo(os.path.join(output_dir, "report.json"))


@cli.command("sweep")
@click.option("--manifest", "manifest_path", required=True, type=click.Path())
@click.option("--config", "config_path", type=click.Path())
@click.option("--axis", required=True)
@click.option("--values", "values_csv", required=True, help="Comma-separated axis values.")
@click.option("--seed", type=int, default=None)
@click.option("--jobs", type=int, default=None)
@click.option("--bins", type=int, default=20)
@click.option("--output-dir", type=click.Path(), default=None)
def cmd_sweep(manifest_path, config_path, axis, values_csv, seed, jobs, bins, output_dir):
    """Run an ablation sweep along one axis; writes a combined CSV table."""
    cfg, cfg_seed, cfg_output_dir = load_run_config(config_path)
    seed = cfg_seed if seed is None else seed
    output_dir = output_dir or cfg_output_dir or "warpad_out"
    jobs = jobs or os.cpu_count() or 1
    _echo_effective_config(cfg, output_dir)
    manifest = DatasetManifest.load(manifest_path)
    values = [v.strip() for v in values_csv.split(",") if v.strip()]
    if not values:
        raise ConfigurationError("--values is empty")
    entries = sweep(
        manifest, cfg, axis, values, seed=seed, jobs=jobs, output_dir=output_dir, bins=bins
    )
    for entry in entries:
        if entry.report is None:
            click.echo(f"{entry.value}\terror\t{entry.error}")
        else:
            click.echo(f"{entry.value}\tmean\t{entry.report.mean_auroc:.6f}")
    click.echo(os.path.join(output_dir, f"sweep_{axis}.csv"))


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except (ConfigurationError, ValidationError, StructuralError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG
    except IngestionError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_INGESTION
    except (BackendLoadError, TransportError, DegenerateInputError) as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_BACKEND
    except WarpadError as exc:
        click.echo(f"error: {exc}", err=True)
        return EXIT_CONFIG
    except click.ClickException as exc:
        exc.show()
        return EXIT_CONFIG
    except click.Abort:
        click.echo("aborted", err=True)
        return EXIT_CONFIG
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())

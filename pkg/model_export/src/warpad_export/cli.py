"""CLI: export a backbone to the embedding-graph file, verify numerical parity."""

from __future__ import annotations

import json
import sys

import click

from .errors import ExportError, StructuralFailure
from .export import export_backbone
from .parity import verify_parity


@click.group()
def cli():
    """Backbone export and parity verification for the detection pipeline."""


@cli.command("export")
@click.option("--backbone", required=True, help="Backbone id (see errors for the list).")
@click.option("--size", type=int, default=224, show_default=True, help="Input size S.")
@click.option("--out", required=True, type=click.Path(), help="Output model path.")
@click.option(
    "--format", "fmt", type=click.Choice(["auto", "onnx", "torchscript"]), default="auto"
)
def cmd_export(backbone, size, out, fmt):
    """Write the embedding graph plus its manifest JSON."""
    manifest = export_backbone(backbone, size, out, fmt)
    click.echo(json.dumps(manifest.to_dict(), indent=2, sort_keys=True))


@cli.command("verify")
@click.option("--file", "path", required=True, type=click.Path(exists=True))
@click.option("--n", "n_samples", type=int, default=16, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
def cmd_verify(path, n_samples, seed):
    """Check source-vs-export cosine parity on seeded random inputs."""
    report = verify_parity(path, n_samples=n_samples, seed=seed)
    click.echo(json.dumps(report, indent=2, sort_keys=True))
    if not report["pass"]:
        raise ExportError(f"parity FAILED: min cosine {report['min_cosine']:.6f} < 0.999")


def main(argv=None) -> int:
    try:
        cli.main(args=argv, standalone_mode=False)
    except ExportError as exc:
        click.echo(f"error: {exc}", err=True)
        return 1
    except StructuralFailure as exc:
        click.echo(f"structural failure: {exc}", err=True)
        return 2
    except click.ClickException as exc:
        exc.show()
        return 1
    except click.Abort:
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Command line entry points: serve, sda eval, swarm run."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .archive import ArchiveStore
from .embedding import HashedEmbedding, RemoteEmbedding


@click.group(context_settings={"auto_envvar_prefix": "AGENTRXIV"})
def main():
    """Preprint archive for agent laboratories."""


@main.command()
@click.option("--port", default=8571, show_default=True, type=int)
@click.option("--data-dir", default="./agentrxiv-data", show_default=True, type=click.Path())
@click.option(
    "--embed-provider",
    default="default",
    show_default=True,
    type=click.Choice(["default", "remote"]),
)
@click.option("--remote-embed-url", default=None)
def serve(port: int, data_dir: str, embed_provider: str, remote_embed_url: str | None):
    """Run the archive HTTP service."""
    import uvicorn

    from .service import create_app

    if embed_provider == "remote":
        if not remote_embed_url:
            raise click.UsageError("--remote-embed-url is required with --embed-provider remote")
        embedder = RemoteEmbedding(remote_embed_url)
    else:
        embedder = HashedEmbedding()
    store = ArchiveStore(data_dir, embedder)
    store.sync_store()
    uvicorn.run(create_app(store), host="127.0.0.1", port=port)


@main.group()
def sda():
    """Dual-sampling reasoning engine."""


@sda.command("eval")
@click.option("--dataset", required=True, type=click.Path(exists=True))
@click.option(
    "--provider",
    "provider_kind",
    default="scripted",
    show_default=True,
    type=click.Choice(["scripted", "remote"]),
)
@click.option("--script", "script_path", default=None, type=click.Path(exists=True),
              help="JSON response table for the scripted provider.")
@click.option("--remote-url", default=None)
@click.option("--config", "config_path", default=None, type=click.Path(exists=True))
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--out", default=".", show_default=True, type=click.Path())
def sda_eval(dataset, provider_kind, script_path, remote_url, config_path, seed, out):
    """Evaluate a JSON Lines dataset of {id, problem, answer} rows."""
    from .sda import RemoteProvider, ScriptedProvider, SdaConfig, evaluate_dataset
    from .sda.engine import write_report

    problems = [
        json.loads(line)
        for line in Path(dataset).read_text(encoding="utf-8").splitlines()
        if line.strip()
    ]
    if provider_kind == "scripted":
        if not script_path:
            raise click.UsageError("--script is required with --provider scripted")
        provider = ScriptedProvider(json.loads(Path(script_path).read_text(encoding="utf-8")))
    else:
        if not remote_url:
            raise click.UsageError("--remote-url is required with --provider remote")
        provider = RemoteProvider(remote_url)
    config = SdaConfig()
    if config_path:
        config = SdaConfig.from_dict(json.loads(Path(config_path).read_text(encoding="utf-8")))

    report = evaluate_dataset(problems, provider, HashedEmbedding(), config, seed)
    out_dir = Path(out)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_report(report, out_dir / "eval_report.json", out_dir / "eval_log.csv")
    click.echo(
        f"accuracy={report.accuracy:.4f} ({report.correct}/{report.total}) "
        f"paths={report.path_counts}"
    )


@main.group()
def swarm():
    """Multi-laboratory orchestration harness."""


@swarm.command("run")
@click.option("--labs", default=1, show_default=True, type=int)
@click.option("--papers", default=40, show_default=True, type=int)
@click.option("--n-rxiv", default=5, show_default=True, type=int)
@click.option("--seed", default=0, show_default=True, type=int)
@click.option(
    "--mode", default="synthetic", show_default=True, type=click.Choice(["synthetic", "live"])
)
@click.option("--server", default="embedded", show_default=True,
              help="Archive base URL, or 'embedded' for an in-process archive.")
@click.option("--out", default="./swarm-out", show_default=True, type=click.Path())
def swarm_run(labs, papers, n_rxiv, seed, mode, server, out):
    """Run K laboratories for G generations each and export curves."""
    from .swarm import RunConfig, run_swarm

    config = RunConfig(
        labs=labs, papers_per_lab=papers, n_rxiv=n_rxiv, seed=seed, mode=mode
    )
    report = run_swarm(config, server=server, out_dir=out)
    best = report.global_best_curve[-1] if report.global_best_curve else None
    click.echo(
        f"regime={report.regime} papers={len(report.events)} best={best} "
        f"cost={report.accounting['global']['cost']}"
    )
    if report.failed_labs:
        click.echo(f"failed labs: {', '.join(report.failed_labs)}", err=True)


if __name__ == "__main__":
    main()

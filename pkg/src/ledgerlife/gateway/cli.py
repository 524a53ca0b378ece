"""Operator CLI: headless runs, phenotype rendering, and the live service."""

from __future__ import annotations

import os
import sys

import click

from ..agentvm import phenotype_svg
from ..morphogen import MalformedGenome, json_to_genome, genome_to_json, mutation_fan
from ..simkernel import (
    ConfigInvalid,
    MultiRootForest,
    ScenarioConfig,
    Simulation,
    build_tree,
    export_tree_dot,
    export_tree_newick,
)

CONFIG_ERROR_EXIT = 2


def _fail(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(CONFIG_ERROR_EXIT)


def _load_config(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return ScenarioConfig.from_json(fh.read())
    except OSError as exc:
        _fail(f"cannot read config {path}: {exc}")
    except ConfigInvalid as exc:
        _fail(str(exc))


def write_run_outputs(out_dir: str, sim: Simulation) -> None:
    """Snapshot, tree exports, stats CSV, and per-agent SVGs."""
    os.makedirs(out_dir, exist_ok=True)
    tree = build_tree(sim.world)
    with open(os.path.join(out_dir, "snapshot.txt"), "w", encoding="utf-8") as fh:
        fh.write(sim.snapshot())
    with open(os.path.join(out_dir, "tree.dot"), "w", encoding="utf-8") as fh:
        fh.write(export_tree_dot(tree))
    try:
        newick = export_tree_newick(tree)
    except MultiRootForest:
        newick = None
    if newick is not None:
        with open(os.path.join(out_dir, "tree.nwk"), "w", encoding="utf-8") as fh:
            fh.write(newick + "\n")
    with open(os.path.join(out_dir, "stats.csv"), "w", encoding="utf-8") as fh:
        fh.write(sim.stats.to_csv())
    agents_dir = os.path.join(out_dir, "agents")
    os.makedirs(agents_dir, exist_ok=True)
    for address in sorted(sim.world.agents):
        svg = phenotype_svg(sim.world.agents[address].genome)
        with open(os.path.join(agents_dir, f"{address}.svg"), "w", encoding="utf-8") as fh:
            fh.write(svg)


@click.group()
def main() -> None:
    """Self-replicating, self-funding biomorph agents on a toy ledger."""


@main.command("run")
@click.option("--config", "config_path", required=True, help="Scenario JSON file.")
@click.option("--seed", type=int, default=None, help="Override the config seed.")
@click.option("--ticks", type=int, default=None, help="Override the tick count.")
@click.option("--out", "out_dir", required=True, help="Output directory.")
def cli_run(config_path: str, seed, ticks, out_dir: str) -> None:
    """Execute a headless scripted run and write all exports."""
    config = _load_config(config_path)
    if seed is not None:
        config.seed = seed
    if ticks is not None:
        config.ticks = ticks
    try:
        sim = Simulation(config)
    except ConfigInvalid as exc:
        _fail(str(exc))
    for warning in sim.warnings:
        click.echo(f"warning: {warning}", err=True)
    sim.run_until(config.ticks)
    write_run_outputs(out_dir, sim)
    click.echo(
        f"ran {config.ticks} ticks: {len(sim.world.agents)} agents, "
        f"{sim.world.sold_count} NFTs sold, outputs in {out_dir}"
    )


def _read_genome(genome_arg: str):
    if os.path.exists(genome_arg):
        with open(genome_arg, "r", encoding="utf-8") as fh:
            genome_arg = fh.read()
    return json_to_genome(genome_arg)


@main.command("render")
@click.option(
    "--genome", "genome_arg", required=True, help="Genome JSON text or a file path."
)
@click.option("-o", "--out", "out_path", required=True, help="Output SVG file (or directory with --fan).")
@click.option(
    "--fan",
    is_flag=True,
    help="Write the parent plus every distinct one-step mutant into a directory.",
)
def cli_render(genome_arg: str, out_path: str, fan: bool) -> None:
    """Render a genome's phenotype to SVG."""
    try:
        genome = _read_genome(genome_arg)
    except MalformedGenome as exc:
        _fail(str(exc))
    if not fan:
        with open(out_path, "w", encoding="utf-8") as fh:
            fh.write(phenotype_svg(genome))
        click.echo(out_path)
        return
    os.makedirs(out_path, exist_ok=True)
    manifest = {"parent": genome_to_json(genome), "mutants": {}}
    with open(os.path.join(out_path, "parent.svg"), "w", encoding="utf-8") as fh:
        fh.write(phenotype_svg(genome))
    for i, mutant in enumerate(mutation_fan(genome)):
        name = f"mutant_{i:02d}.svg"
        with open(os.path.join(out_path, name), "w", encoding="utf-8") as fh:
            fh.write(phenotype_svg(mutant))
        manifest["mutants"][name] = genome_to_json(mutant)
    with open(os.path.join(out_path, "manifest.json"), "w", encoding="utf-8") as fh:
        import json

        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    click.echo(f"{1 + len(manifest['mutants'])} phenotypes in {out_path}")


@main.command("serve")
@click.option("--config", "config_path", required=True, help="Scenario JSON file.")
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", type=int, default=8000, show_default=True)
@click.option(
    "--no-scripted",
    is_flag=True,
    help="Disable scripted buyers/keepers; humans drive everything.",
)
def cli_serve(config_path: str, host: str, port: int, no_scripted: bool) -> None:
    """Host the live world behind the HTTP/JSON API."""
    import uvicorn

    from .server import create_app

    config = _load_config(config_path)
    app = create_app(config, scripted=not no_scripted)
    uvicorn.run(app, host=host, port=port)


if __name__ == "__main__":
    main()

import functools
import os
import sys
from enum import Enum
from pathlib import Path
from typing import List, Optional

import click
import typer
from rich.console import Console
from rich.markup import escape
from rich.table import Table

# Add code directory to path
sys.path.append(os.path.dirname(os.path.abspath(__file__)))

from bisimulation import bisimilar, bounded_bisimilar, coarsest_bisimulation
from dot_export import DotOptions, export_dot
from errors import ModelInputError, ToolkitError
from formula import modal_depth, parse, to_constructor_text, to_text
from frame_properties import FrameProperty, is_proper, property_table
from lazy_model import explore as explore_window
from lazy_model import parse_periodic_product, periodic_extension, properize_countable, window_projection
from logging_config import configure_logging, get_logger
from model_generator import gen_random
from model_io import load_model, load_state_map, model_to_json, save_model, save_state_map
from morphism import check_bounded_morphism
from properize import partition_blocks, properize_finite
from semantics import satisfies
from settings import get_settings

app = typer.Typer(help="Properization toolkit CLI", no_args_is_help=True)
console = Console()
err_console = Console(stderr=True)
logger = get_logger(__name__)

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_ERROR = 2


class Layout(str, Enum):
    colored = "colored"
    subgraphs = "subgraphs"


class Highlight(str, Enum):
    none = "none"
    blocks = "blocks"
    bisim = "bisim"


def handle_errors(command):
    """Report toolkit errors, and any unexpected failure, on stderr and exit with code 2"""

    @functools.wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except (click.exceptions.Exit, click.exceptions.Abort, click.ClickException, typer.Exit, typer.Abort):
            raise
        except ToolkitError as exc:
            err_console.print(f"[bold red]Error:[/bold red] {escape(str(exc))}", markup=True, highlight=False)
            diagnostics = getattr(exc, "diagnostics", None) or []
            for diagnostic in diagnostics:
                err_console.print(f"  - {diagnostic}", markup=False, highlight=False)
            raise typer.Exit(EXIT_ERROR)
        except Exception as exc:
            logger.debug("command_failed", command=command.__name__, exc_info=True)
            err_console.print(
                f"[bold red]Internal error:[/bold red] {escape(type(exc).__name__)}: {escape(str(exc))}",
                markup=True,
                highlight=False,
            )
            raise typer.Exit(EXIT_ERROR)

    return wrapper


def verdict(value: bool) -> None:
    typer.echo("true" if value else "false")
    raise typer.Exit(EXIT_TRUE if value else EXIT_FALSE)


def emit_model(model, out: Optional[Path]) -> None:
    if out is None:
        typer.echo(model_to_json(model), nl=False)
    else:
        save_model(model, out)


@app.callback()
def main(
    log_level: Optional[str] = typer.Option(None, "--log-level", help="DEBUG, INFO, WARNING or ERROR"),
    log_json: bool = typer.Option(False, "--log-json", help="Emit JSON log lines on stderr"),
):
    """Build, check and export properized multi-agent models"""
    settings = get_settings()
    configure_logging(
        log_level=log_level or settings.log_level,
        json_format=log_json or settings.log_format == "json",
        log_file=settings.log_file,
    )


@app.command("parse")
@handle_errors
def parse_command(formula: str = typer.Argument(..., help='Formula text, e.g. "K1 (p -> q)"')):
    """Echo the canonical printing and the primitive form of a formula"""
    parsed = parse(formula)
    typer.echo(to_text(parsed))
    typer.echo(to_constructor_text(parsed))
    typer.echo(f"modal depth: {modal_depth(parsed)}")


@app.command("mc")
@handle_errors
def model_check(
    model: Path = typer.Option(..., "--model", help="Model JSON file"),
    state: str = typer.Option(..., "--state"),
    formula: str = typer.Option(..., "--formula"),
):
    """Decide M, x |= formula"""
    verdict(satisfies(load_model(model), state, parse(formula)))


@app.command("properize")
@handle_errors
def properize_command(
    model: Path = typer.Option(..., "--model"),
    skew_agent: Optional[int] = typer.Option(None, "--skew-agent", help="Agent whose relation is skewed"),
    out: Optional[Path] = typer.Option(None, "--out", help="Write the properized model here (default: stdout)"),
    map_out: Optional[Path] = typer.Option(None, "--map", help="Write the projection table here"),
):
    """Build the finite properization M~ and its projection onto M"""
    source = load_model(model)
    skew = skew_agent if skew_agent is not None else get_settings().default_skew_agent
    properized, projection = properize_finite(source, skew)
    emit_model(properized.model, out)
    if map_out is not None:
        save_state_map(projection, map_out)
    if out is not None:
        console.print(
            f"properized {len(source.states)} states into {len(properized.model.states)} "
            f"(skew agent {skew}, {properized.model.edge_count()} edges)"
        )


@app.command("props")
@handle_errors
def props_command(
    model: Path = typer.Option(..., "--model"),
    agent: Optional[int] = typer.Option(None, "--agent", help="Only this agent"),
):
    """Frame properties per agent and the properness verdict"""
    structure = load_model(model)
    if agent is not None:
        structure.require_agent(agent)
    table_data = property_table(structure)

    table = Table(title="Frame properties")
    table.add_column("Agent", style="cyan")
    for prop in FrameProperty:
        table.add_column(prop.value.capitalize())
    for number, checks in table_data.items():
        if agent is not None and number != agent:
            continue
        cells = []
        for prop in FrameProperty:
            check = checks[prop]
            cells.append("yes" if check.holds else escape(f"no {check.counterexample}"))
        table.add_row(str(number), *cells)
    console.print(table)

    result = is_proper(structure)
    if result.proper:
        console.print("PROPER", highlight=False)
        raise typer.Exit(EXIT_TRUE)
    x, y = result.witness
    console.print(f"IMPROPER: {x} and {y} are related by every agent", highlight=False)
    raise typer.Exit(EXIT_FALSE)


@app.command("verify-bm")
@handle_errors
def verify_bm(
    source: Path = typer.Option(..., "--source"),
    target: Path = typer.Option(..., "--target"),
    map_file: Path = typer.Option(..., "--map"),
    surjective: bool = typer.Option(False, "--surjective", help="Also require h to be onto"),
):
    """Check that a map is a bounded morphism"""
    source_model = load_model(source)
    target_model = load_model(target)
    h = load_state_map(map_file, source_model, target_model)
    report = check_bounded_morphism(source_model, target_model, h, require_surjective=surjective)

    table = Table(title="Bounded morphism")
    table.add_column("Condition", style="cyan")
    table.add_column("Result")
    table.add_column("Counterexample")
    for item in report.verdicts:
        style = {"PASS": "green", "FAIL": "red"}.get(item.status, "dim")
        table.add_row(item.condition, f"[{style}]{item.status}[/{style}]", escape(item.detail))
    console.print(table)
    raise typer.Exit(EXIT_TRUE if report.passed else EXIT_FALSE)


@app.command("bisim")
@handle_errors
def bisim_command(
    left: Path = typer.Option(..., "--left"),
    left_state: str = typer.Option(..., "--left-state"),
    right: Path = typer.Option(..., "--right"),
    right_state: str = typer.Option(..., "--right-state"),
    depth: Optional[int] = typer.Option(None, "--depth", help="Bounded bisimilarity up to this depth"),
):
    """Decide whether two pointed models are bisimilar"""
    first = load_model(left)
    second = load_model(right)
    if depth is None:
        result = bisimilar(first, left_state, second, right_state)
    else:
        result = bounded_bisimilar(first, left_state, second, right_state, depth)
    verdict(result)


@app.command("gen")
@handle_errors
def gen_command(
    seed: int = typer.Option(..., "--seed", help="Random seed (required)"),
    states: int = typer.Option(4, "--states", "-m"),
    agents: int = typer.Option(2, "--agents", "-n"),
    density: float = typer.Option(0.3, "--density"),
    props: int = typer.Option(2, "--props"),
    close: List[FrameProperty] = typer.Option([], "--close", help="Close every agent under this property"),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Generate a random model"""
    emit_model(gen_random(states, agents, density, props, close, seed=seed), out)


@app.command("explore")
@handle_errors
def explore_command(
    model: Path = typer.Option(..., "--model"),
    periodic: bool = typer.Option(False, "--periodic", help="Use the Z-indexed periodic extension of the model"),
    start: str = typer.Option(..., "--start", help='Product state, e.g. "(x1|x1)" or "(x1@0|x2@1)"'),
    radius: int = typer.Option(2, "--radius"),
    skew_agent: Optional[int] = typer.Option(None, "--skew-agent"),
    out: Optional[Path] = typer.Option(None, "--out"),
    map_out: Optional[Path] = typer.Option(None, "--map", help="Write the window's projection onto the model"),
):
    """Explore a finite window of the countable properization"""
    if not periodic:
        raise ModelInputError("explore needs a countable model; pass --periodic")
    base = load_model(model)
    skew = skew_agent if skew_agent is not None else get_settings().default_skew_agent
    lazy = properize_countable(periodic_extension(base), skew)
    window = explore_window(lazy, parse_periodic_product(start, base), radius)
    emit_model(window.model, out)
    if map_out is not None:
        save_state_map(window_projection(window, base), map_out)
    if out is not None:
        console.print(
            f"window of {len(window.model.states)} states: "
            f"{len(window.interior)} interior, {len(window.frontier)} frontier"
        )


@app.command("export-dot")
@handle_errors
def export_dot_command(
    model: Path = typer.Option(..., "--model"),
    layout: Layout = typer.Option(Layout.colored, "--layout"),
    properize: bool = typer.Option(False, "--properize", help="Export the finite properization instead"),
    skew_agent: Optional[int] = typer.Option(None, "--skew-agent"),
    highlight: Highlight = typer.Option(Highlight.none, "--highlight", help="Color offset blocks or bisimulation classes"),
    no_valuation: bool = typer.Option(False, "--no-valuation"),
    out: Optional[Path] = typer.Option(None, "--out"),
):
    """Render a model as Graphviz DOT"""
    structure = load_model(model)
    partition = None
    if properize:
        skew = skew_agent if skew_agent is not None else get_settings().default_skew_agent
        properized, _ = properize_finite(structure, skew)
        structure = properized.model
        if highlight is Highlight.blocks:
            partition = partition_blocks(properized)
    elif highlight is Highlight.blocks:
        raise ModelInputError("--highlight blocks needs --properize")
    if highlight is Highlight.bisim:
        partition = coarsest_bisimulation(structure)

    text = export_dot(
        structure,
        DotOptions(layout=layout.value, highlight=partition, show_valuation=not no_valuation, name=model.stem),
    )
    if out is None:
        typer.echo(text, nl=False)
    else:
        try:
            out.write_text(text, encoding="utf-8")
        except OSError as exc:
            raise ModelInputError(f"cannot write {out}: {exc}") from exc


if __name__ == "__main__":
    app()

"""Command-line interface for finpot."""

import argparse
import asyncio
import logging
import sys
import traceback
from typing import Any

from rich.console import Console
from rich.logging import RichHandler
from rich.markup import escape
from rich.panel import Panel

from . import __version__
from .errors import FinpotError
from .runner import (
    STAGES,
    RunArtifacts,
    RunConfig,
    emit_report,
    load_run_config,
    run_ablation,
    run_pipeline,
)

console = Console()

STAGE_COMMANDS = tuple(s for s in STAGES if s != "report")


def print_error(error: FinpotError) -> None:
    """Print a finpot error with its code, location and context."""
    body = escape(error.located())
    if error.context:
        details = (f"[dim]{key}: {escape(str(value))}[/dim]" for key, value in error.context.items())
        body += "\n" + "\n".join(details)
    console.print(
        Panel(
            body,
            title=f"[bold red]{error.code}[/bold red]",
            border_style="red",
        )
    )


def print_done(message: str) -> None:
    console.print(Panel(message, title="[bold green]finpot[/bold green]", border_style="green"))


def setup_logging(verbose: bool = False, quiet: bool = False) -> None:
    """Route finpot logs through a rich handler."""
    level = logging.WARNING if quiet else logging.DEBUG if verbose else logging.INFO
    handler = RichHandler(console=Console(stderr=True), show_path=False, rich_tracebacks=True)
    handler.setFormatter(logging.Formatter("%(message)s"))
    root = logging.getLogger("finpot")
    root.handlers[:] = [handler]
    root.setLevel(level)
    root.propagate = False


def _common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", help="Run configuration (TOML)")
    parser.add_argument("--run-id", help="Run identifier")
    parser.add_argument(
        "--dataset",
        action="append",
        metavar="KIND=TRAIN[,DEV[,TEST]]",
        help="Dataset files, e.g. finqa=train.json,dev.json,test.json (repeatable)",
    )
    parser.add_argument("--model", action="append", help="Student profile id (repeatable)")
    parser.add_argument("--seed", type=int, help="Split and sampling seed")
    parser.add_argument("--limit", type=int, help="Keep the first N records of each split")
    parser.add_argument("--cache-dir", help="Completion cache directory")
    parser.add_argument("--runs-dir", help="Directory holding run directories")
    parser.add_argument("--mock", action="store_true", default=None, help="Use mock backends")
    parser.add_argument("-v", "--verbose", action="store_true", help="Debug logging")
    parser.add_argument("--quiet", action="store_true", help="Warnings only")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="finpot",
        description="Teacher-student program-of-thought distillation for financial QA",
    )
    parser.add_argument("--version", action="version", version=f"finpot {__version__}")
    commands = parser.add_subparsers(dest="command", required=True)

    for name in STAGE_COMMANDS:
        _common(commands.add_parser(name, help=f"Run the {name} stage"))
    _common(commands.add_parser("run", help="Run every configured stage"))
    report = commands.add_parser("report", help="Write report tables for a run")
    _common(report)
    ablate = commands.add_parser("ablate", help="Compare training sets")
    _common(ablate)
    ablate.add_argument(
        "--grid",
        action="append",
        required=True,
        help='Training-set spec, e.g. "FinQA:1000 + ConvFinQA:500" (repeatable)',
    )
    return parser


def _parse_datasets(values: list[str] | None) -> list[dict[str, Any]] | None:
    if not values:
        return None
    datasets = []
    for value in values:
        kind, sep, files = value.partition("=")
        if not sep or not files:
            raise FinpotError(f"--dataset expects KIND=TRAIN[,DEV[,TEST]], got {value!r}", "USAGE_ERROR")
        paths = files.split(",")
        entry: dict[str, Any] = {"kind": kind.strip()}
        for split, path in zip(("train", "dev", "test"), paths, strict=False):
            if path:
                entry[split] = path
        datasets.append(entry)
    return datasets


def config_from_args(args: argparse.Namespace) -> RunConfig:
    """Load the run configuration with flags taking precedence."""
    overrides = {
        "run_id": args.run_id,
        "datasets": _parse_datasets(args.dataset),
        "students": args.model,
        "seeds.split": args.seed,
        "seeds.sampling": args.seed,
        "limit": args.limit,
        "cache_dir": args.cache_dir,
        "runs_dir": args.runs_dir,
        "mock": args.mock,
    }
    return load_run_config(args.config, overrides)


async def main(argv: list[str] | None = None) -> int:
    """Main entry point for the CLI."""
    args = build_parser().parse_args(argv)
    setup_logging(args.verbose, args.quiet)
    try:
        config = config_from_args(args)
        match args.command:
            case "run":
                artifacts = await run_pipeline(config)
                print_done(f"Run {config.run_id} complete: {artifacts.root}")
            case "report":
                paths = emit_report(RunArtifacts(config.run_dir()))
                print_done("Report written to " + ", ".join(str(p) for p in paths))
            case "ablate":
                table = await run_ablation(config, args.grid)
                print_done(f"Ablation over {len(table['training_sets'])} training sets complete")
            case stage if stage in STAGE_COMMANDS:
                await run_pipeline(config, stages=[stage])
                print_done(f"Stage {stage} complete for run {config.run_id}")
    except FinpotError as e:
        print_error(e)
        return 1
    except Exception:
        console.print(traceback.format_exc(), style="dim")
        return 2
    return 0


def cli_main() -> None:
    """Synchronous entry point for console scripts."""
    try:
        sys.exit(asyncio.run(main()))
    except KeyboardInterrupt:
        console.print("\n[dim]Interrupted.[/dim]")
        sys.exit(130)


if __name__ == "__main__":
    cli_main()

import argparse

from app.cli.commands import decompose, spdmd, sweep, synth
from config.config import settings


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="spdmd",
        description="Dynamic mode decomposition and sparsity-promoting mode selection",
    )
    parser.add_argument("--version", action="version", version=settings.APP_VERSION or "v0.1.0")
    parser.add_argument(
        "--log-level",
        type=str.upper,
        choices=("DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"),
        default=settings.LOG_LEVEL,
        help="logging threshold",
    )

    # One subcommand per module under app/cli/commands
    subparsers = parser.add_subparsers(dest="command", required=True)
    for command in (decompose, spdmd, sweep, synth):
        command.register(subparsers)
    return parser

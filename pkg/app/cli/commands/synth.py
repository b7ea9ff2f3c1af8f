import argparse
from pathlib import Path

from app.cli.arguments import add_output_arguments
from app.cli.dependencies import build_manifest, get_synthetic_service
from app.schemas.manifest import Command


def register(subparsers) -> None:
    parser = subparsers.add_parser("synth", help="generate snapshots from a fixture spec")
    parser.add_argument("--spec", type=Path, required=True, help="fixture JSON")
    parser.add_argument("--steps", type=int, required=True, help="number of snapshots")
    parser.add_argument("--seed", type=int, help="noise seed (default: from the fixture)")
    add_output_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    manifest = build_manifest(args, Command.SYNTH)
    get_synthetic_service(manifest).run(manifest)
    return 0

import argparse

from app.cli.arguments import add_input_arguments, add_output_arguments
from app.cli.dependencies import build_manifest, get_decomposition_service
from app.schemas.manifest import Command


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "decompose", help="standard DMD with optimal amplitudes and mode reports"
    )
    add_input_arguments(parser)
    add_output_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    manifest = build_manifest(args, Command.DECOMPOSE)
    get_decomposition_service(manifest).run(manifest)
    return 0

import argparse

from app.cli.arguments import add_admm_arguments, add_input_arguments, add_output_arguments
from app.cli.dependencies import build_manifest, get_sparsity_service
from app.core.errors import NonConvergenceError
from app.schemas.manifest import Command


def register(subparsers) -> None:
    parser = subparsers.add_parser("spdmd", help="sparse mode selection for one gamma")
    add_input_arguments(parser)
    parser.add_argument("--gamma", type=float, required=True, help="sparsity weight")
    add_admm_arguments(parser)
    add_output_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    manifest = build_manifest(args, Command.SPDMD)
    solution = get_sparsity_service(manifest).run_spdmd(manifest)
    if not solution.converged:
        # artifacts are already written
        raise NonConvergenceError(
            f"ADMM stopped after {solution.iterations} iterations at gamma={solution.gamma:g}"
        )
    return 0

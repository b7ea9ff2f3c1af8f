import argparse

from app.cli.arguments import add_admm_arguments, add_input_arguments, add_output_arguments
from app.cli.dependencies import build_manifest, get_sparsity_service
from app.core.errors import NonConvergenceError
from app.schemas.manifest import Command


def register(subparsers) -> None:
    parser = subparsers.add_parser(
        "sweep", help="accuracy versus number of modes over a log-spaced gamma grid"
    )
    add_input_arguments(parser)
    parser.add_argument("--gamma-min", type=float, required=True)
    parser.add_argument("--gamma-max", type=float, required=True)
    parser.add_argument("--grid", type=int, default=100, help="number of gamma values")
    add_admm_arguments(parser)
    add_output_arguments(parser)
    parser.set_defaults(handler=handle)


def handle(args: argparse.Namespace) -> int:
    manifest = build_manifest(args, Command.SWEEP)
    sweep = get_sparsity_service(manifest).run_sweep(manifest)
    incomplete = [point for point in sweep.points if point.failed or not point.converged]
    if incomplete:
        raise NonConvergenceError(
            f"{len(incomplete)} of {len(sweep.points)} sweep points failed or did not converge"
        )
    return 0

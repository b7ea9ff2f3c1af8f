"""Argument groups shared by the subcommands."""
import argparse
from pathlib import Path
from typing import Tuple

from app.schemas.decomposition import ModeKind
from app.schemas.manifest import Observable, ReportFormat
from app.storage.factory import SnapshotFormat
from config.config import settings


def grid_point(text: str) -> Tuple[int, int]:
    """Parse ``m,l`` into a 0-based grid point"""
    try:
        m, l = (int(part) for part in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected m,l as two integers, got {text!r}")
    return m, l


def add_input_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("input")
    group.add_argument("--input", type=Path, help="snapshot file of a scalar field")
    group.add_argument("--input-vy", type=Path, help="snapshot file of the y velocity")
    group.add_argument("--input-vz", type=Path, help="snapshot file of the z velocity")
    group.add_argument(
        "--input-format",
        choices=[fmt.value for fmt in SnapshotFormat],
        help="snapshot file format (default: from the file suffix)",
    )
    group.add_argument(
        "--observable",
        choices=[kind.value for kind in Observable],
        default=Observable.RAW.value,
        help="scalar observable analysed",
    )
    group.add_argument("--rank", type=int, help="SVD truncation rank (default: numerical rank)")
    group.add_argument(
        "--mode-kind",
        choices=[kind.value for kind in ModeKind],
        default=ModeKind.PROJECTED.value,
    )
    group.add_argument(
        "--point", type=grid_point, metavar="M,L", help="write the superposition at this grid point"
    )


def add_admm_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("ADMM")
    group.add_argument("--rho", type=float, default=settings.ADMM_RHO)
    group.add_argument("--eps-primal", type=float, default=settings.ADMM_EPS_PRIMAL)
    group.add_argument("--eps-dual", type=float, default=settings.ADMM_EPS_DUAL)
    group.add_argument("--kmax", type=int, default=settings.ADMM_K_MAX)


def add_output_arguments(parser: argparse.ArgumentParser) -> None:
    group = parser.add_argument_group("output")
    group.add_argument("--out", type=Path, required=True, help="output directory")
    group.add_argument(
        "--format",
        dest="report_format",
        choices=[fmt.value for fmt in ReportFormat],
        default=ReportFormat.CSV.value,
        help="format of the tabular reports",
    )

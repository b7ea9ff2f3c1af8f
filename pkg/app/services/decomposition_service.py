import logging
from typing import Dict, Optional, Sequence, Tuple

import numpy as np

from app.core import analysis, dmd_core, snapshot_data, spdmd
from app.repositories.artifact_repository import ArtifactRepository
from app.schemas.decomposition import DmdDecomposition, ModeKind
from app.schemas.manifest import Observable, ReportFormat, RunManifest
from app.schemas.report import ModeReport
from app.schemas.snapshot import SnapshotMatrix
from config.config import settings

logger = logging.getLogger(__name__)

MODE_REPORT_COLUMNS = (
    "label",
    "amp_mag",
    "re_lambda",
    "im_lambda",
    "modulus",
    "period_steps",
    "period_physical",
    "class",
)


def mode_report_row(report: ModeReport) -> Tuple:
    return (
        report.label,
        report.amplitude_mag,
        report.eigenvalue.real,
        report.eigenvalue.imag,
        report.modulus,
        report.period_steps,
        report.period_physical,
        report.classification.value,
    )


class DecompositionService:
    """Service for ingesting snapshots and reporting their DMD"""

    def __init__(self, repository: ArtifactRepository):
        """Initialize with artifact repository"""
        self.repository = repository

    def ingest(self, manifest: RunManifest) -> SnapshotMatrix:
        """Load the snapshot matrix, deriving the observable when two components are given"""
        if manifest.observable == Observable.RAW:
            snapshots = snapshot_data.load_snapshots(manifest.input, manifest.input_format)
        else:
            vy = snapshot_data.to_series(
                snapshot_data.load_snapshots(manifest.input_vy, manifest.input_format)
            )
            vz = snapshot_data.to_series(
                snapshot_data.load_snapshots(manifest.input_vz, manifest.input_format)
            )
            series = snapshot_data.observable(manifest.observable.value, vy, vz)
            snapshots = snapshot_data.from_series(series, manifest.observable.value)
        logger.info(
            "ingested %s: %d grid points x %d snapshots",
            snapshots.field_name,
            snapshots.grid.p,
            snapshots.n_snapshots,
        )
        return snapshots

    def decompose(
        self,
        snapshots: SnapshotMatrix,
        rank: Optional[int] = None,
        mode_kind: ModeKind = ModeKind.PROJECTED,
    ) -> DmdDecomposition:
        decomposition = dmd_core.decompose(
            snapshots, rank=rank, mode_kind=mode_kind, eps_rank=settings.RANK_TOLERANCE
        )
        logger.info("DMD rank %d (%s modes)", decomposition.rank, decomposition.mode_kind.value)
        return decomposition

    def mode_table(self, decomposition: DmdDecomposition, b: np.ndarray) -> list:
        """Mode reports for the nonzero entries of ``b``, largest amplitude first"""
        order, _ = spdmd.order_amplitudes(b)
        return analysis.mode_reports(
            decomposition,
            b,
            order,
            eps_osc=settings.OSC_TOLERANCE,
            eps_unit=settings.UNIT_TOLERANCE,
        )

    def write_mode_table(
        self, name: str, reports: Sequence[ModeReport], report_format: ReportFormat
    ) -> None:
        rows = [mode_report_row(report) for report in reports]
        if report_format == ReportFormat.JSON:
            self.repository.write_json(
                f"{name}.json", [dict(zip(MODE_REPORT_COLUMNS, row)) for row in rows]
            )
        else:
            self.repository.write_csv(f"{name}.csv", MODE_REPORT_COLUMNS, rows)

    def write_decomposition(
        self, decomposition: DmdDecomposition, report_format: ReportFormat
    ) -> None:
        self.repository.write_json(
            "decomposition.json",
            {
                "rank": decomposition.rank,
                "mode_kind": decomposition.mode_kind.value,
                "eigenvalues": decomposition.eigenvalues,
                "amplitudes": decomposition.amplitudes,
                "singular_values": decomposition.svd.sigma,
                "field_name": decomposition.field_name,
                "n_snapshots": decomposition.n_snapshots + 1,
                "grid": decomposition.grid.model_dump(),
            },
        )
        name = decomposition.field_name
        self.repository.write_matrix(
            "modes_real.snpb", decomposition.grid, decomposition.modes.real, f"{name}:modes:real"
        )
        self.repository.write_matrix(
            "modes_imag.snpb", decomposition.grid, decomposition.modes.imag, f"{name}:modes:imag"
        )
        reports = self.mode_table(decomposition, decomposition.amplitudes)
        self.write_mode_table("mode_report", reports, report_format)

    def reconstructions(
        self,
        snapshots: SnapshotMatrix,
        decomposition: DmdDecomposition,
        sparse_b: Optional[np.ndarray] = None,
    ) -> Dict[str, np.ndarray]:
        steps = range(snapshots.n_snapshots)
        named = {
            "dmd": dmd_core.reconstruct(
                decomposition.modes, decomposition.eigenvalues, decomposition.amplitudes, steps
            )
        }
        if sparse_b is not None:
            named["spdmd"] = dmd_core.reconstruct(
                decomposition.modes, decomposition.eigenvalues, sparse_b, steps
            )
        return named

    def write_msd(
        self,
        snapshots: SnapshotMatrix,
        decomposition: DmdDecomposition,
        sparse_b: Optional[np.ndarray] = None,
    ) -> None:
        columns = analysis.msd_comparison(
            snapshots.data, self.reconstructions(snapshots, decomposition, sparse_b)
        )
        header = ["k", *columns.keys()]
        rows = zip(range(snapshots.n_snapshots), *columns.values())
        self.repository.write_csv("msd.csv", header, rows)

    def write_superposition(
        self,
        snapshots: SnapshotMatrix,
        decomposition: DmdDecomposition,
        point: Tuple[int, int],
        sparse_b: Optional[np.ndarray] = None,
    ) -> None:
        """Data beside the DMD (and SPDMD) superposition at grid point (m, l)"""
        index = snapshot_data.grid_index(decomposition.grid, *point)
        steps = range(snapshots.n_snapshots)
        columns = {
            "data": snapshots.data[index],
            "dmd": analysis.superpose_at(
                decomposition.modes,
                decomposition.eigenvalues,
                decomposition.amplitudes,
                index,
                steps,
            ),
        }
        if sparse_b is not None:
            support = spdmd.support_of(sparse_b)
            columns["spdmd"] = analysis.superpose_at(
                decomposition.modes, decomposition.eigenvalues, sparse_b, index, steps, support
            )
        rows = zip(steps, *columns.values())
        self.repository.write_csv("superposition.csv", ["k", *columns.keys()], rows)

    def prepare(self, manifest: RunManifest) -> Tuple[SnapshotMatrix, DmdDecomposition]:
        """Ingest, decompose and write the artifacts every analysis command shares"""
        snapshots = self.ingest(manifest)
        decomposition = self.decompose(snapshots, manifest.rank, manifest.mode_kind)
        self.write_decomposition(decomposition, manifest.report_format)
        return snapshots, decomposition

    def run(self, manifest: RunManifest) -> DmdDecomposition:
        snapshots, decomposition = self.prepare(manifest)
        self.write_msd(snapshots, decomposition)
        if manifest.point is not None:
            self.write_superposition(snapshots, decomposition, manifest.point)
        return decomposition

import logging
from typing import List

import numpy as np
from tqdm import tqdm

from app.core import analysis, spdmd
from app.schemas.decomposition import DmdDecomposition
from app.schemas.manifest import ReportFormat, RunManifest
from app.schemas.sparse import SparseSolution, SweepPoint, SweepResult
from app.services.decomposition_service import DecompositionService
from app.utils import resolve_threads
from config.config import settings

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = (
    "gamma",
    "cardinality",
    "J_sp",
    "J_pol",
    "J_loss_percent",
    "converged",
    "iterations",
    "status",
)


def _labels(indices) -> List[int]:
    return [int(j) + 1 for j in indices]


class SparsityService:
    """Service for sparsity-promoting amplitude selection and gamma sweeps"""

    def __init__(self, decomposition_service: DecompositionService):
        """Initialize with the decomposition service whose repository receives artifacts"""
        self.decompositions = decomposition_service
        self.repository = decomposition_service.repository

    def check_pairing(self, decomposition: DmdDecomposition, support) -> List[int]:
        """Selected modes whose complex conjugate was dropped"""
        partners = analysis.conjugate_partners(
            decomposition.eigenvalues, settings.PAIR_TOLERANCE
        )
        broken = analysis.unpaired(support, partners)
        if broken:
            logger.warning(
                "support breaks conjugate symmetry at modes %s", _labels(broken)
            )
        return broken

    def write_solution(
        self, decomposition: DmdDecomposition, solution: SparseSolution, unpaired: List[int]
    ) -> None:
        self.repository.write_json(
            "sparse_solution.json",
            {
                "gamma": solution.gamma,
                "cardinality": solution.cardinality,
                "support": _labels(solution.support),
                "eigenvalues": decomposition.eigenvalues[list(solution.support)],
                "b_sparse": solution.b_sparse,
                "b_polished": solution.b_polished,
                "J_sp": solution.j_sp,
                "J_pol": solution.j_pol,
                "J_loss_percent": solution.j_loss_percent,
                "J_pol_percent": solution.j_pol_percent,
                "iterations": solution.iterations,
                "converged": solution.converged,
                "unpaired": _labels(unpaired),
            },
        )

    def write_normal_evolution(
        self, decomposition: DmdDecomposition, b: np.ndarray, n_steps: int
    ) -> None:
        """Re(lambda_j^k b_j) over time for every selected mode, largest first"""
        order, _ = spdmd.order_amplitudes(b)
        series = [
            analysis.normal_evolution(decomposition.eigenvalues[j], b[j], n_steps)
            for j in order
        ]
        header = ["k", *(f"mode_{label}" for label in _labels(order))]
        self.repository.write_csv("normal_evolution.csv", header, zip(range(n_steps), *series))

    def run_spdmd(self, manifest: RunManifest) -> SparseSolution:
        """Decompose, select a sparse support for one gamma and write its reports"""
        snapshots, decomposition = self.decompositions.prepare(manifest)
        solution = spdmd.solve(decomposition, manifest.gamma, manifest.admm)
        if not solution.converged:
            logger.warning(
                "ADMM did not converge within %d iterations (gamma=%g)",
                manifest.admm.k_max,
                manifest.gamma,
            )
        logger.info(
            "gamma=%g keeps %d of %d modes, loss %.4g%%",
            solution.gamma,
            solution.cardinality,
            decomposition.rank,
            solution.j_pol_percent,
        )
        unpaired = self.check_pairing(decomposition, solution.support)
        self.write_solution(decomposition, solution, unpaired)

        b = solution.b_polished
        reports = self.decompositions.mode_table(decomposition, b)
        self.decompositions.write_mode_table("sparse_mode_report", reports, manifest.report_format)
        self.write_normal_evolution(decomposition, b, snapshots.n_snapshots)
        self.decompositions.write_msd(snapshots, decomposition, b)
        if manifest.point is not None:
            self.decompositions.write_superposition(snapshots, decomposition, manifest.point, b)
        return solution

    def write_sweep(self, sweep: SweepResult, report_format: ReportFormat) -> None:
        if report_format == ReportFormat.JSON:
            self.repository.write_json(
                "sweep.json",
                {
                    "points": [self._sweep_entry(point) for point in sweep.points],
                    "distinct_supports": [
                        {
                            "cardinality": point.cardinality,
                            "support": _labels(point.support),
                            "gamma": point.gamma,
                            "J_pol_percent": point.j_pol_percent,
                        }
                        for point in spdmd.distinct_supports(sweep)
                    ],
                    "failures": [
                        {"gamma": point.gamma, "error": point.error}
                        for point in sweep.points
                        if point.failed
                    ],
                },
            )
            return
        rows = (
            (
                point.gamma,
                point.cardinality,
                point.j_sp,
                point.j_pol,
                point.j_loss_percent,
                point.converged,
                point.iterations,
                point.status,
            )
            for point in sweep.points
        )
        self.repository.write_csv("sweep.csv", SWEEP_COLUMNS, rows)

    @staticmethod
    def _sweep_entry(point: SweepPoint) -> dict:
        return {
            "gamma": point.gamma,
            "cardinality": point.cardinality,
            "support": _labels(point.support),
            "J_sp": point.j_sp,
            "J_pol": point.j_pol,
            "J_loss_percent": point.j_loss_percent,
            "J_pol_percent": point.j_pol_percent,
            "converged": point.converged,
            "iterations": point.iterations,
            "status": point.status,
        }

    def run_sweep(self, manifest: RunManifest) -> SweepResult:
        """Trace the accuracy versus sparsity curve over a log-spaced gamma grid"""
        snapshots = self.decompositions.ingest(manifest)
        decomposition = self.decompositions.decompose(
            snapshots, manifest.rank, manifest.mode_kind
        )
        threads = resolve_threads(settings.SPDMD_THREADS)
        logger.info("sweeping %d gammas on %d threads", manifest.n_grid, threads)
        with tqdm(
            total=manifest.n_grid, desc="gamma sweep", disable=not settings.SHOW_PROGRESS
        ) as bar:
            sweep = spdmd.gamma_sweep(
                decomposition,
                manifest.gamma_min,
                manifest.gamma_max,
                manifest.n_grid,
                manifest.admm,
                threads=threads,
                progress=bar.update,
            )
        failed = sum(point.failed for point in sweep.points)
        stalled = sum(not point.failed and not point.converged for point in sweep.points)
        if failed or stalled:
            logger.warning("%d sweep points failed, %d did not converge", failed, stalled)
        logger.info(
            "sweep found %d distinct supports", len(spdmd.distinct_supports(sweep))
        )
        self.write_sweep(sweep, manifest.report_format)
        return sweep

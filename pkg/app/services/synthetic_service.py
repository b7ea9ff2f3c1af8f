import logging

from app.core import synthetic
from app.repositories.artifact_repository import ArtifactRepository
from app.schemas.manifest import RunManifest
from app.schemas.snapshot import SnapshotMatrix

logger = logging.getLogger(__name__)


class SyntheticService:
    """Service for generating ground-truth snapshot data"""

    def __init__(self, repository: ArtifactRepository):
        """Initialize with artifact repository"""
        self.repository = repository

    def run(self, manifest: RunManifest) -> SnapshotMatrix:
        """Generate ``steps`` snapshots from a fixture spec and echo the truth beside them"""
        spec = synthetic.load_spec(manifest.spec)
        truth = synthetic.build_ground_truth(spec, seed=manifest.seed)
        snapshots = synthetic.generate(truth, manifest.steps)
        logger.info(
            "generated %d modes on %d grid points over %d steps",
            len(truth.modes),
            truth.grid.p,
            manifest.steps,
        )

        self.repository.write_matrix(
            "data.snpb", snapshots.grid, snapshots.data, snapshots.field_name
        )
        document = spec.model_dump(mode="json")
        document["seed"] = truth.seed
        document["rng"] = synthetic.RNG_ALGORITHM
        document["n_snapshots"] = manifest.steps
        self.repository.write_json("ground_truth.json", document)
        return snapshots

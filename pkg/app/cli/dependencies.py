import argparse

from app.repositories.artifact_repository import ArtifactRepository
from app.schemas.manifest import Command, RunManifest
from app.schemas.sparse import AdmmConfig
from app.services import DecompositionService, SparsityService, SyntheticService

_ANALYSIS_FIELDS = (
    "input",
    "input_vy",
    "input_vz",
    "input_format",
    "observable",
    "rank",
    "mode_kind",
    "point",
)


def build_manifest(args: argparse.Namespace, command: Command) -> RunManifest:
    """Validate the parsed arguments of one subcommand into a run manifest"""
    fields = {"command": command, "out": args.out, "report_format": args.report_format}
    if command == Command.SYNTH:
        fields.update(spec=args.spec, steps=args.steps, seed=args.seed)
        return RunManifest(**fields)

    fields.update({name: getattr(args, name) for name in _ANALYSIS_FIELDS})
    if command in (Command.SPDMD, Command.SWEEP):
        fields["admm"] = AdmmConfig(
            rho=args.rho, eps_primal=args.eps_primal, eps_dual=args.eps_dual, k_max=args.kmax
        )
    if command == Command.SPDMD:
        fields["gamma"] = args.gamma
    elif command == Command.SWEEP:
        fields.update(gamma_min=args.gamma_min, gamma_max=args.gamma_max, n_grid=args.grid)
    return RunManifest(**fields)


def get_repository(manifest: RunManifest) -> ArtifactRepository:
    return ArtifactRepository(manifest.out)


def get_decomposition_service(manifest: RunManifest) -> DecompositionService:
    return DecompositionService(get_repository(manifest))


def get_sparsity_service(manifest: RunManifest) -> SparsityService:
    return SparsityService(get_decomposition_service(manifest))


def get_synthetic_service(manifest: RunManifest) -> SyntheticService:
    return SyntheticService(get_repository(manifest))

from app.services.decomposition_service import DecompositionService
from app.services.sparsity_service import SparsityService
from app.services.synthetic_service import SyntheticService

__all__ = ["DecompositionService", "SparsityService", "SyntheticService"]

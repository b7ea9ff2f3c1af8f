"""Ground-truth fixtures built as linear superpositions, plus brute-force oracles.

Noise comes from numpy's ``default_rng`` (PCG64) seeded per fixture, so
regenerated data is identical across platforms.
"""
import json
from pathlib import Path
from typing import Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
from pydantic import ValidationError

from app.core.dmd_core import vandermonde
from app.core.errors import ConditioningError, DimensionError, SpecError
from app.core.snapshot_data import flatten
from app.schemas.grid import Grid
from app.schemas.snapshot import SnapshotMatrix
from app.schemas.synthetic import BubbleSpec, FixtureSpec, GroundTruth, ModeSpec

RNG_ALGORITHM = "PCG64"
CLOSURE_TOLERANCE = 1e-12
ORACLE_MAX_RANK = 10
ORACLE_MAX_STEPS = 64

# (eigenvalue, amplitude, real-part bubble, imaginary-part bubble)
PairTuple = Tuple[complex, complex, BubbleSpec, BubbleSpec]


def gaussian_bubble_pattern(
    grid: Grid, center: Tuple[float, float], widths: Tuple[float, float]
) -> np.ndarray:
    """Unit-norm Gaussian bump centred at ``center`` (km), flattened"""
    s_y, s_z = widths
    if s_y <= 0 or s_z <= 0:
        raise SpecError(f"bubble widths must be positive, got {widths}")
    y, z = grid.coordinates()
    y0, z0 = center
    field = np.exp(-((y - y0) ** 2 / (2 * s_y**2) + (z - z0) ** 2 / (2 * s_z**2)))
    vector = flatten(field, grid)
    norm = np.linalg.norm(vector)
    if norm == 0:
        raise SpecError(f"bubble at {center} vanishes on the grid")
    return vector / norm


def _bubble(grid: Grid, spec: BubbleSpec) -> np.ndarray:
    return gaussian_bubble_pattern(grid, spec.center, spec.widths)


def complex_pattern(
    grid: Grid, real: BubbleSpec, imag: Optional[BubbleSpec] = None
) -> np.ndarray:
    pattern = _bubble(grid, real).astype(complex)
    if imag is not None:
        pattern = pattern + 1j * _bubble(grid, imag)
    return pattern / np.linalg.norm(pattern)


def check_conjugate_closed(truth: GroundTruth, tol: float = CLOSURE_TOLERANCE) -> None:
    """Every oscillating mode needs its (conj lambda, conj b, conj pattern) partner"""
    for j, mode in enumerate(truth.modes):
        if mode.eigenvalue.imag == 0:
            continue
        partner_found = any(
            abs(other.eigenvalue - np.conj(mode.eigenvalue)) <= tol
            and abs(other.amplitude - np.conj(mode.amplitude)) <= tol
            and np.max(np.abs(other.pattern - np.conj(mode.pattern))) <= tol
            for other in truth.modes
        )
        if not partner_found:
            raise SpecError(f"mode {j} (lambda={mode.eigenvalue}) has no conjugate partner")


def pairs_fixture(
    grid: Grid,
    pairs: Iterable[PairTuple],
    noise_sigma: float = 0.0,
    seed: int = 0,
    field_name: str = "synthetic",
) -> GroundTruth:
    """Conjugate-closed ground truth: each tuple contributes a mode and its partner"""
    modes = []
    for eigenvalue, amplitude, real, imag in pairs:
        eigenvalue, amplitude = complex(eigenvalue), complex(amplitude)
        pattern = complex_pattern(grid, real, imag)
        modes.append(ModeSpec(eigenvalue=eigenvalue, amplitude=amplitude, pattern=pattern))
        modes.append(
            ModeSpec(
                eigenvalue=eigenvalue.conjugate(),
                amplitude=amplitude.conjugate(),
                pattern=np.conj(pattern),
            )
        )
    return GroundTruth(
        modes=modes, grid=grid, noise_sigma=noise_sigma, seed=seed, field_name=field_name
    )


def generate(truth: GroundTruth, n_steps: int) -> SnapshotMatrix:
    """Y[:, k] = Re(sum_j pattern_j lambda_j^k b_j) + seeded Gaussian noise"""
    if n_steps < 2:
        raise DimensionError(f"need at least 2 snapshots, got {n_steps}")
    check_conjugate_closed(truth)
    patterns = np.stack([mode.pattern for mode in truth.modes], axis=1)
    eigenvalues = np.array([mode.eigenvalue for mode in truth.modes])
    amplitudes = np.array([mode.amplitude for mode in truth.modes])
    data = np.real(patterns @ (amplitudes[:, None] * vandermonde(eigenvalues, n_steps)))
    if truth.noise_sigma > 0:
        rng = np.random.default_rng(truth.seed)
        data = data + truth.noise_sigma * rng.standard_normal(data.shape)
    return SnapshotMatrix(grid=truth.grid, data=data, field_name=truth.field_name)


def build_ground_truth(spec: FixtureSpec, seed: Optional[int] = None) -> GroundTruth:
    modes = []
    for entry in spec.modes:
        pattern = complex_pattern(spec.grid, entry.pattern.real, entry.pattern.imag)
        if entry.pattern.conjugate:
            pattern = np.conj(pattern)
        modes.append(
            ModeSpec(
                eigenvalue=complex(*entry.eigenvalue),
                amplitude=complex(*entry.amplitude),
                pattern=pattern,
            )
        )
    truth = GroundTruth(
        modes=modes,
        grid=spec.grid,
        noise_sigma=spec.noise_sigma,
        seed=spec.seed if seed is None else seed,
        field_name=spec.field_name,
    )
    check_conjugate_closed(truth)
    return truth


def load_spec(path: Union[str, Path]) -> FixtureSpec:
    try:
        return FixtureSpec.model_validate_json(Path(path).read_text(encoding="utf-8"))
    except ValidationError as exc:
        raise SpecError(f"invalid fixture spec {path}: {exc}") from exc


def dump_spec(spec: FixtureSpec) -> str:
    return json.dumps(spec.model_dump(mode="json"), indent=2) + "\n"


def oracle_amplitudes(y: np.ndarray, modes: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Brute-force amplitudes from the vectorized least-squares normal equations.

    Column j of the (p*N) x r system is vec(phi_j outer T[j]).
    """
    modes = np.asarray(modes, dtype=complex)
    t = np.asarray(t, dtype=complex)
    r, n_steps = t.shape
    if r > ORACLE_MAX_RANK or n_steps > ORACLE_MAX_STEPS:
        raise DimensionError(
            f"oracle is limited to r <= {ORACLE_MAX_RANK}, N <= {ORACLE_MAX_STEPS}"
        )
    system = np.stack([np.outer(modes[:, j], t[j]).ravel() for j in range(r)], axis=1)
    gram = system.conj().T @ system
    rhs = system.conj().T @ np.asarray(y, dtype=complex).ravel()
    if np.linalg.cond(gram) > 1e13:
        raise ConditioningError("oracle system is rank deficient")
    return np.linalg.solve(gram, rhs)


def match_eigenvalues(
    found: Sequence[complex], expected: Sequence[complex], tol: float = 1e-6
) -> List[Tuple[int, complex]]:
    """Greedy nearest-neighbour pairing; raises when a match is missing or ambiguous"""
    remaining = list(range(len(found)))
    pairs = []
    for value in expected:
        if not remaining:
            raise ValueError(f"no eigenvalue left to match {value}")
        distance = [abs(found[k] - value) for k in remaining]
        best = int(np.argmin(distance))
        close = [d for d in distance if d <= tol]
        if distance[best] > tol or len(close) > 1:
            raise ValueError(f"eigenvalue {value} has {len(close)} candidates within {tol}")
        pairs.append((remaining.pop(best), value))
    return pairs

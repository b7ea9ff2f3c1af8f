"""Diagnostics over a decomposition: periods, growth/decay, evolutions and MSD."""
import math
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from app.core.dmd_core import reconstruct, vandermonde
from app.core.errors import BoundsError, DimensionError, DomainError
from app.schemas.decomposition import DmdDecomposition
from app.schemas.report import ModeClass, ModeReport

EPS_OSC = 1e-9
EPS_UNIT = 5e-3


def period(eigenvalue: complex, eps_osc: float = EPS_OSC) -> float:
    """Oscillation period in steps, 2 pi / |Im(log lambda)|; inf without oscillation"""
    if eigenvalue == 0:
        raise DomainError("period is undefined for a zero eigenvalue")
    angle = abs(np.angle(complex(eigenvalue)))
    if angle < eps_osc:
        return math.inf
    return 2.0 * math.pi / angle


def classify(eigenvalue: complex, eps_unit: float = EPS_UNIT) -> ModeClass:
    modulus = abs(eigenvalue)
    if abs(modulus - 1.0) <= eps_unit:
        return ModeClass.STEADY
    return ModeClass.GROWING if modulus > 1.0 else ModeClass.DECAYING


def normal_evolution(eigenvalue: complex, amplitude: complex, n_steps: int) -> np.ndarray:
    """a_k = Re(lambda^k b) for k = 0..N-1"""
    powers = vandermonde(np.array([eigenvalue]), n_steps)[0]
    return np.real(powers * amplitude)


def superpose_at(
    modes: np.ndarray,
    eigenvalues: np.ndarray,
    b: np.ndarray,
    index: int,
    k_range: Iterable[int],
    selection: Optional[Sequence[int]] = None,
) -> np.ndarray:
    """Time series of grid row ``index`` (0-based) from the chosen modes"""
    modes = np.asarray(modes, dtype=complex)
    if not 0 <= index < modes.shape[0]:
        raise BoundsError(f"row {index} outside 0..{modes.shape[0] - 1}")
    chosen = np.arange(modes.shape[1]) if selection is None else np.asarray(selection, dtype=int)
    row = modes[index : index + 1, chosen]
    return reconstruct(row, np.asarray(eigenvalues)[chosen], np.asarray(b)[chosen], k_range)[0]


def msd(y: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Spatial mean and sample standard deviation of every column"""
    y = np.real(np.asarray(y))
    if y.ndim != 2:
        raise DimensionError(f"expected a p x N matrix, got shape {y.shape}")
    if y.shape[0] < 2:
        raise DomainError("standard deviation needs at least 2 grid points")
    return y.mean(axis=0), y.std(axis=0, ddof=1)


def msd_comparison(
    y: np.ndarray, reconstructions: Dict[str, np.ndarray]
) -> Dict[str, np.ndarray]:
    """MSD columns for the data and each named reconstruction"""
    columns = {}
    for name, matrix in {"data": y, **reconstructions}.items():
        mean, std = msd(matrix)
        columns[f"mean_{name}"] = mean
        columns[f"std_{name}"] = std
    return columns


def conjugate_partners(eigenvalues: np.ndarray, tol: float = 1e-8) -> List[int]:
    """Index of each eigenvalue's conjugate, itself for real ones, -1 if missing"""
    eigenvalues = np.asarray(eigenvalues, dtype=complex)
    partners = []
    for j, value in enumerate(eigenvalues):
        if abs(value.imag) <= tol:
            partners.append(j)
            continue
        distance = np.abs(eigenvalues - np.conj(value))
        distance[j] = np.inf
        k = int(np.argmin(distance))
        partners.append(k if distance[k] <= tol * max(1.0, abs(value)) else -1)
    return partners


def unpaired(support: Iterable[int], partners: Sequence[int]) -> List[int]:
    """Members of ``support`` whose conjugate partner was not selected"""
    chosen = set(support)
    return sorted(j for j in chosen if partners[j] not in chosen)


def mode_reports(
    decomposition: DmdDecomposition,
    b: np.ndarray,
    order: Sequence[int],
    eps_osc: float = EPS_OSC,
    eps_unit: float = EPS_UNIT,
) -> List[ModeReport]:
    """Table rows for the modes in ``order``, labelled by 1-based DMD index"""
    rows = []
    for j in order:
        eigenvalue = complex(decomposition.eigenvalues[j])
        steps = period(eigenvalue, eps_osc)
        rows.append(
            ModeReport(
                label=j + 1,
                amplitude_mag=float(abs(b[j])),
                eigenvalue=eigenvalue,
                modulus=abs(eigenvalue),
                period_steps=steps,
                period_physical=steps * decomposition.grid.h,
                classification=classify(eigenvalue, eps_unit),
            )
        )
    return rows

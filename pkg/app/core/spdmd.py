"""Sparsity-promoting amplitude selection.

Minimizes J(b) + gamma * ||b||_1 over the amplitude QP
J(b) = b^H P b - 2 Re(d^H b) + ||Y||_F^2 with ADMM, then re-fits the
amplitudes without penalty on the support that survives.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Callable, Iterable, List, Optional, Tuple

import numpy as np
import scipy.linalg

from app.core.dmd_core import objective, solve_qp
from app.core.errors import ConditioningError, DimensionError, DomainError, SpdmdError
from app.schemas.decomposition import DmdDecomposition
from app.schemas.sparse import (
    AdmmConfig,
    AdmmOutcome,
    SparseSolution,
    SweepPoint,
    SweepResult,
)

logger = logging.getLogger(__name__)


def shrinkage(v: complex, kappa: float) -> complex:
    """Soft threshold: pull |v| towards zero by kappa, keeping the phase"""
    if kappa < 0:
        raise DomainError(f"threshold must be non-negative, got {kappa}")
    magnitude = abs(v)
    if magnitude <= kappa:
        return 0j
    return v / magnitude * (magnitude - kappa)


def shrink(v: np.ndarray, kappa: float) -> np.ndarray:
    """Elementwise ``shrinkage`` with exact zeros below the threshold"""
    v = np.asarray(v, dtype=complex)
    magnitude = np.abs(v)
    out = np.zeros_like(v)
    keep = magnitude > kappa
    out[keep] = v[keep] / magnitude[keep] * (magnitude[keep] - kappa)
    return out


def _cholesky(matrix: np.ndarray, what: str) -> Tuple[np.ndarray, bool]:
    try:
        return scipy.linalg.cho_factor(matrix, lower=True)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"{what} is not positive definite: {exc}") from exc


def admm_solve(
    p_matrix: np.ndarray,
    d_vector: np.ndarray,
    gamma: float,
    cfg: AdmmConfig = AdmmConfig(),
) -> AdmmOutcome:
    """ADMM on the split b = xi with scaled dual theta.

    The b-update minimizes b^H P b - 2 Re(d^H b) + rho/2 ||b - xi + theta/rho||^2,
    so P + (rho/2) I is factored once and reused every iteration.
    """
    if gamma < 0:
        raise DomainError(f"gamma must be non-negative, got {gamma}")
    p_matrix = np.asarray(p_matrix, dtype=complex)
    d_vector = np.asarray(d_vector, dtype=complex)
    r = d_vector.shape[0]
    if p_matrix.shape != (r, r):
        raise DimensionError(f"P has shape {p_matrix.shape}, d has length {r}")

    _cholesky(p_matrix, "P")
    factor = _cholesky(p_matrix + 0.5 * cfg.rho * np.eye(r), "P + rho/2 I")

    kappa = gamma / cfg.rho
    xi = np.zeros(r, dtype=complex)
    theta = np.zeros(r, dtype=complex)
    primal = dual = np.inf
    converged = False
    iterations = 0
    while iterations < cfg.k_max:
        b = scipy.linalg.cho_solve(factor, d_vector + 0.5 * cfg.rho * (xi - theta / cfg.rho))
        xi_prev = xi
        xi = shrink(b + theta / cfg.rho, kappa)
        theta = theta + cfg.rho * (b - xi)
        iterations += 1

        primal = float(np.linalg.norm(b - xi))
        dual = float(np.linalg.norm(cfg.rho * (xi - xi_prev)))
        if primal <= cfg.eps_primal and dual <= cfg.eps_dual:
            converged = True
            break

    if not converged:
        logger.debug("ADMM stopped at k_max=%d (gamma=%g)", cfg.k_max, gamma)
    return AdmmOutcome(
        b_sparse=xi,
        iterations=iterations,
        converged=converged,
        primal_residual=primal,
        dual_residual=dual,
    )


def polish(
    support: Iterable[int], p_matrix: np.ndarray, d_vector: np.ndarray
) -> np.ndarray:
    """Unpenalized amplitudes restricted to ``support``: P_SS b_S = d_S"""
    d_vector = np.asarray(d_vector, dtype=complex)
    index = np.asarray(sorted(support), dtype=int)
    b = np.zeros(d_vector.shape[0], dtype=complex)
    if index.size == 0:
        return b
    sub = np.asarray(p_matrix, dtype=complex)[np.ix_(index, index)]
    b[index] = solve_qp(sub, d_vector[index])
    return b


def performance_loss(j_value: float, energy: float) -> float:
    """100 * sqrt(J / ||Y||_F^2): 0 for a perfect fit, 100 for no modes"""
    if not energy > 0:
        raise DomainError(f"snapshot energy must be positive, got {energy}")
    return 100.0 * float(np.sqrt(max(j_value, 0.0) / energy))


def support_of(b: np.ndarray) -> Tuple[int, ...]:
    return tuple(int(j) for j in np.flatnonzero(np.asarray(b) != 0))


def solve(
    decomposition: DmdDecomposition, gamma: float, cfg: AdmmConfig = AdmmConfig()
) -> SparseSolution:
    """ADMM, polishing and loss metrics for one sparsity weight"""
    p_matrix, d_vector = decomposition.qp_matrix, decomposition.qp_vector
    energy = decomposition.energy
    outcome = admm_solve(p_matrix, d_vector, gamma, cfg)
    support = support_of(outcome.b_sparse)
    b_polished = polish(support, p_matrix, d_vector)

    j_sp = objective(p_matrix, d_vector, energy, outcome.b_sparse)
    j_pol = objective(p_matrix, d_vector, energy, b_polished)
    return SparseSolution(
        gamma=gamma,
        b_sparse=outcome.b_sparse,
        support=support,
        b_polished=b_polished,
        j_sp=j_sp,
        j_pol=j_pol,
        j_loss_percent=performance_loss(j_sp, energy),
        j_pol_percent=performance_loss(j_pol, energy),
        iterations=outcome.iterations,
        converged=outcome.converged,
    )


def _sweep_point(
    decomposition: DmdDecomposition, gamma: float, cfg: AdmmConfig
) -> SweepPoint:
    try:
        solution = solve(decomposition, gamma, cfg)
    except SpdmdError as exc:
        logger.warning("sweep point gamma=%g failed: %s", gamma, exc)
        return SweepPoint(gamma=gamma, error=f"{exc.kind}: {exc}")
    return SweepPoint(
        gamma=gamma,
        cardinality=solution.cardinality,
        support=solution.support,
        j_sp=solution.j_sp,
        j_pol=solution.j_pol,
        j_loss_percent=solution.j_loss_percent,
        j_pol_percent=solution.j_pol_percent,
        iterations=solution.iterations,
        converged=solution.converged,
    )


def gamma_grid(gamma_min: float, gamma_max: float, n_grid: int) -> np.ndarray:
    if not 0 < gamma_min < gamma_max:
        raise DomainError(f"need 0 < gamma_min < gamma_max, got [{gamma_min}, {gamma_max}]")
    if n_grid < 2:
        raise DomainError(f"need at least 2 grid points, got {n_grid}")
    return np.geomspace(gamma_min, gamma_max, n_grid)


def gamma_sweep(
    decomposition: DmdDecomposition,
    gamma_min: float,
    gamma_max: float,
    n_grid: int,
    cfg: AdmmConfig = AdmmConfig(),
    threads: int = 1,
    progress: Optional[Callable[[], None]] = None,
) -> SweepResult:
    """Solve at log-spaced gammas; failed points are recorded, not raised.

    Points are independent, so they run on a thread pool and are collected
    back in grid order.
    """
    grid = gamma_grid(gamma_min, gamma_max, n_grid)

    def run(gamma: float) -> SweepPoint:
        point = _sweep_point(decomposition, float(gamma), cfg)
        if progress is not None:
            progress()
        return point

    if threads <= 1:
        points = [run(gamma) for gamma in grid]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            points = list(pool.map(run, grid))
    return SweepResult(points=points, gamma_grid=tuple(float(g) for g in grid))


def order_amplitudes(b: np.ndarray) -> Tuple[List[int], int]:
    """Nonzero indices by descending |b|, ties by ascending index"""
    b = np.asarray(b, dtype=complex)
    nonzero = np.flatnonzero(b != 0)
    magnitude = np.abs(b[nonzero])
    order = nonzero[np.lexsort((nonzero, -magnitude))]
    return [int(j) for j in order], int(order.size)


def distinct_supports(sweep: SweepResult) -> List[SweepPoint]:
    """First successful point of every distinct support, in gamma order"""
    seen = set()
    rows = []
    for point in sweep.points:
        if point.failed or point.support in seen:
            continue
        seen.add(point.support)
        rows.append(point)
    return rows

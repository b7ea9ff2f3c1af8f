"""Standard DMD: truncated SVD, reduced operator, spectrum, modes and amplitudes."""
import logging
from typing import Iterable, Optional, Tuple

import numpy as np
import scipy.linalg

from app.core.errors import ConditioningError, DimensionError, NumericError, RankError
from app.core.snapshot_data import split_shifted
from app.schemas.decomposition import DmdDecomposition, ModeKind, SvdTruncation
from app.schemas.snapshot import SnapshotMatrix

logger = logging.getLogger(__name__)

EPS_RANK = 1e-10
# P is treated as singular below this eigenvalue ratio
EPS_QP = 1e-13


def truncated_svd(
    y: np.ndarray, rank: Optional[int] = None, eps_rank: float = EPS_RANK
) -> SvdTruncation:
    """Economy SVD truncated to ``min(rank, numerical rank)``.

    Column signs are fixed so that the largest entry of each left singular
    vector is positive, which makes the factors reproducible.
    """
    y = np.asarray(y, dtype=float)
    if rank is not None and rank < 1:
        raise DimensionError(f"requested rank must be >= 1, got {rank}")
    try:
        u, sigma, vh = scipy.linalg.svd(y, full_matrices=False, lapack_driver="gesdd")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise NumericError(f"SVD failed: {exc}") from exc
    if sigma.size == 0 or sigma[0] == 0.0:
        raise RankError("snapshot matrix is identically zero")

    numerical_rank = int(np.count_nonzero(sigma > eps_rank * sigma[0]))
    r = numerical_rank if rank is None else min(rank, numerical_rank)

    u, sigma, v = u[:, :r], sigma[:r], vh[:r].T
    pivots = np.argmax(np.abs(u), axis=0)
    signs = np.sign(u[pivots, np.arange(r)])
    signs[signs == 0] = 1.0
    return SvdTruncation(U=u * signs, sigma=sigma, V=v * signs)


def _check_conditioning(svd: SvdTruncation, eps_rank: float) -> None:
    if svd.sigma[-1] <= eps_rank * svd.sigma[0]:
        raise ConditioningError(
            f"smallest kept singular value {svd.sigma[-1]:.3e} is below tolerance"
        )


def reduced_operator(
    svd: SvdTruncation, yp: np.ndarray, eps_rank: float = EPS_RANK
) -> np.ndarray:
    """A_tilde = U_r^T Y' V_r Sigma_r^-1"""
    yp = np.asarray(yp, dtype=float)
    if yp.shape != (svd.U.shape[0], svd.V.shape[0]):
        raise DimensionError(
            f"Y' shape {yp.shape} does not match SVD factors "
            f"({svd.U.shape[0]}, {svd.V.shape[0]})"
        )
    _check_conditioning(svd, eps_rank)
    return (svd.U.T @ yp @ svd.V) / svd.sigma


def eig_decompose(a_tilde: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    """Eigenpairs ordered by descending modulus.

    Ties are broken by larger |Im| first (which keeps a conjugate pair next to
    each other), then by descending imaginary part, then by original index.
    """
    a_tilde = np.asarray(a_tilde, dtype=float)
    if not np.all(np.isfinite(a_tilde)):
        raise NumericError("reduced operator contains NaN or Inf")
    try:
        eigenvalues, eigenvectors = scipy.linalg.eig(a_tilde)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"eigensolver did not converge: {exc}") from exc

    eigenvectors = eigenvectors / np.linalg.norm(eigenvectors, axis=0)
    modulus = np.round(np.abs(eigenvalues), 12)
    order = np.lexsort(
        (
            np.arange(eigenvalues.size),
            -eigenvalues.imag,
            -np.abs(np.round(eigenvalues.imag, 12)),
            -modulus,
        )
    )
    return eigenvectors[:, order], eigenvalues[order]


def dmd_modes(
    svd: SvdTruncation,
    yp: np.ndarray,
    eigenvectors: np.ndarray,
    eigenvalues: np.ndarray,
    mode_kind: ModeKind = ModeKind.PROJECTED,
) -> Tuple[np.ndarray, np.ndarray]:
    """Unit-norm DMD modes and the column norms divided out of them"""
    if ModeKind(mode_kind) == ModeKind.PROJECTED:
        modes = svd.U @ eigenvectors
    else:
        _check_conditioning(svd, EPS_RANK)
        modes = (np.asarray(yp, dtype=float) @ svd.V / svd.sigma) @ eigenvectors
    norms = np.linalg.norm(modes, axis=0)
    if np.any(norms == 0):
        raise ConditioningError("a DMD mode vanished; eigenvalue is zero for exact modes")
    return modes / norms, norms


def vandermonde(eigenvalues: np.ndarray, n_steps: int) -> np.ndarray:
    """T[j, k] = lambda_j ** k built by repeated multiplication"""
    if n_steps < 1:
        raise DimensionError(f"need at least one time step, got {n_steps}")
    eigenvalues = np.asarray(eigenvalues, dtype=complex)
    factors = np.empty((eigenvalues.size, n_steps), dtype=complex)
    factors[:, 0] = 1.0
    factors[:, 1:] = eigenvalues[:, None]
    return np.cumprod(factors, axis=1)


def amplitude_qp(
    eigenvectors: np.ndarray, sigma: np.ndarray, v: np.ndarray, t: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """P = (W^H W) o conj(T T^H) and d = conj(diag(T V Sigma W))"""
    w = np.asarray(eigenvectors, dtype=complex)
    t = np.asarray(t, dtype=complex)
    if t.shape[1] != v.shape[0]:
        raise DimensionError(f"Vandermonde has {t.shape[1]} columns, V has {v.shape[0]} rows")
    p_matrix = (w.conj().T @ w) * np.conj(t @ t.conj().T)
    d_vector = np.conj(np.einsum("jk,kj->j", t, (v * sigma) @ w))
    return p_matrix, d_vector


def amplitude_qp_from_modes(
    modes: np.ndarray, t: np.ndarray, y: np.ndarray
) -> Tuple[np.ndarray, np.ndarray]:
    """The same QP data for arbitrary modes, from the full snapshot matrix"""
    modes = np.asarray(modes, dtype=complex)
    t = np.asarray(t, dtype=complex)
    p_matrix = (modes.conj().T @ modes) * np.conj(t @ t.conj().T)
    d_vector = np.conj(np.einsum("jk,kj->j", t, np.asarray(y, dtype=float).T @ modes))
    return p_matrix, d_vector


def solve_qp(p_matrix: np.ndarray, d_vector: np.ndarray) -> np.ndarray:
    """b = P^-1 d through a Hermitian (Cholesky) factorization of P"""
    p_matrix = np.asarray(p_matrix, dtype=complex)
    if p_matrix.size == 0:
        return np.zeros(0, dtype=complex)
    spectrum = np.linalg.eigvalsh(p_matrix)
    if spectrum[0] <= EPS_QP * max(spectrum[-1], 0.0):
        raise ConditioningError(
            "amplitude system is singular; repeated or vanishing eigenvalues"
        )
    try:
        factor = scipy.linalg.cho_factor(p_matrix, lower=True)
    except np.linalg.LinAlgError as exc:
        raise ConditioningError(f"amplitude system is not positive definite: {exc}") from exc
    return scipy.linalg.cho_solve(factor, np.asarray(d_vector, dtype=complex))


def optimal_amplitudes(
    eigenvectors: np.ndarray, sigma: np.ndarray, v: np.ndarray, t: np.ndarray
) -> np.ndarray:
    """Minimizer of ||Y - Phi diag(b) T||_F^2 for projected unit-norm modes"""
    return solve_qp(*amplitude_qp(eigenvectors, sigma, v, t))


def objective(
    p_matrix: np.ndarray, d_vector: np.ndarray, energy: float, b: np.ndarray
) -> float:
    """||Y - Phi diag(b) T||_F^2 evaluated from the QP data"""
    b = np.asarray(b, dtype=complex)
    quadratic = np.real(np.vdot(b, p_matrix @ b))
    linear = np.real(np.vdot(d_vector, b))
    return max(float(quadratic - 2.0 * linear + energy), 0.0)


def reconstruct(
    modes: np.ndarray,
    eigenvalues: np.ndarray,
    b: np.ndarray,
    k_range: Iterable[int],
) -> np.ndarray:
    """Real part of sum_j phi_j lambda_j^k b_j for each k in ``k_range``"""
    steps = np.asarray(list(k_range), dtype=int)
    modes = np.asarray(modes, dtype=complex)
    if steps.size == 0:
        return np.zeros((modes.shape[0], 0))
    if np.any(steps < 0):
        raise DimensionError("time steps must be non-negative")
    powers = vandermonde(eigenvalues, int(steps.max()) + 1)[:, steps]
    return np.real(modes @ (np.asarray(b, dtype=complex)[:, None] * powers))


def decompose(
    snapshots: SnapshotMatrix,
    rank: Optional[int] = None,
    mode_kind: ModeKind = ModeKind.PROJECTED,
    eps_rank: float = EPS_RANK,
) -> DmdDecomposition:
    """Run the whole DMD pipeline on N+1 snapshots"""
    y, yp = split_shifted(snapshots.data)
    svd = truncated_svd(y, rank, eps_rank)
    a_tilde = reduced_operator(svd, yp, eps_rank)
    eigenvectors, eigenvalues = eig_decompose(a_tilde)
    modes, _ = dmd_modes(svd, yp, eigenvectors, eigenvalues, mode_kind)
    t = vandermonde(eigenvalues, y.shape[1])

    if ModeKind(mode_kind) == ModeKind.PROJECTED:
        # unit-norm W gives unit-norm U W, so the reduced QP applies as is
        p_matrix, d_vector = amplitude_qp(eigenvectors, svd.sigma, svd.V, t)
    else:
        p_matrix, d_vector = amplitude_qp_from_modes(modes, t, y)
    amplitudes = solve_qp(p_matrix, d_vector)
    logger.debug("decomposed %s: rank %d, %s modes", snapshots.field_name, svd.rank, mode_kind)

    return DmdDecomposition(
        svd=svd,
        a_tilde=a_tilde,
        eigenvectors=eigenvectors,
        eigenvalues=eigenvalues,
        modes=modes,
        vandermonde=t,
        amplitudes=amplitudes,
        qp_matrix=p_matrix,
        qp_vector=d_vector,
        energy=float(np.sum(y**2)),
        grid=snapshots.grid,
        mode_kind=mode_kind,
        field_name=snapshots.field_name,
    )

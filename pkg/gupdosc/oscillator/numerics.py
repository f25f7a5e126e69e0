"""Dense complex linear algebra: matrix arithmetic and a Hermitian eigensolver with checked contracts.

Every matrix is a read-only square ``complex128`` numpy array (``ComplexMatrix``).
``eigh`` returns an ``EigenDecomposition`` whose residual, orthonormality and trace
have been verified before it is handed out.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
import numpy.typing as npt

from . import config
from .exceptions import ConvergenceError, DimensionMismatchError, UsageError


logger = logging.getLogger(__name__)

ComplexMatrix = npt.NDArray[np.complex128]

JACOBI = 'jacobi'
LAPACK = 'lapack'
AUTO = 'auto'
EIGH_METHODS = (JACOBI, LAPACK, AUTO)


def as_matrix(values) -> ComplexMatrix:
    """Validate and freeze a square complex matrix"""
    matrix = np.array(values, dtype=np.complex128)
    if matrix.ndim != 2 or matrix.shape[0] != matrix.shape[1] or matrix.shape[0] < 1:
        raise UsageError(f'expected a non-empty square matrix, got shape {matrix.shape}')
    if not np.all(np.isfinite(matrix)):
        raise UsageError('matrix has NaN or Inf entries')
    matrix.flags.writeable = False
    return matrix


def identity(dim: int) -> ComplexMatrix:
    return as_matrix(np.eye(dim))


def zeros(dim: int) -> ComplexMatrix:
    return as_matrix(np.zeros((dim, dim)))


def _check_dims(a: ComplexMatrix, b: ComplexMatrix, operation: str):
    if a.shape != b.shape:
        raise DimensionMismatchError(a.shape[0], b.shape[0], operation)


def mat_add(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _check_dims(a, b, 'mat_add')
    return as_matrix(a + b)


def mat_mul(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _check_dims(a, b, 'mat_mul')
    return as_matrix(a @ b)


def adjoint(a: ComplexMatrix) -> ComplexMatrix:
    return as_matrix(a.conj().T)


def commutator(a: ComplexMatrix, b: ComplexMatrix) -> ComplexMatrix:
    _check_dims(a, b, 'commutator')
    return as_matrix(a @ b - b @ a)


def max_norm(a) -> float:
    """Largest entry magnitude"""
    return float(np.max(np.abs(a))) if np.size(a) else 0.0


def is_hermitian(a: ComplexMatrix, rtol: float = config.HERMITIAN_TOL) -> bool:
    return max_norm(a - a.conj().T) <= rtol * max(max_norm(a), 1.0)


def project(a: ComplexMatrix, mask) -> np.ndarray:
    """Restrict an operator to the basis states selected by a boolean mask"""
    mask = np.asarray(mask, dtype=bool)
    return a[np.ix_(mask, mask)]


def dump_matrix(a: ComplexMatrix) -> str:
    """Debug text dump: one row per line, entries as `re+imi` with 17 significant digits"""
    rows = []
    for row in np.asarray(a):
        rows.append(' '.join(f'{z.real:.17g}{z.imag:+.17g}i' for z in row))
    return '\n'.join(rows) + '\n'


@dataclass(frozen=True)
class EigenDecomposition:
    eigenvalues: np.ndarray
    eigenvectors: ComplexMatrix
    residual_norm: float

    @property
    def dim(self) -> int:
        return len(self.eigenvalues)


@lru_cache(maxsize=128)
def _round_robin(dim: int) -> tuple:
    """Disjoint (p, q) index pairs per step, in the fixed tournament order covering every pair once"""
    players = list(range(dim + dim % 2))
    size = len(players)
    steps = []
    for _ in range(size - 1):
        pairs = [
            (min(players[i], players[size - 1 - i]), max(players[i], players[size - 1 - i]))
            for i in range(size // 2)
        ]
        pairs = [pair for pair in pairs if pair[1] < dim]
        if pairs:
            steps.append(np.array(sorted(pairs), dtype=np.intp).T)
        players = [players[0], players[-1], *players[1:-1]]
    return tuple(steps)


def _off_norm(a: np.ndarray) -> float:
    """Frobenius norm of the off-diagonal part"""
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _jacobi(a: np.ndarray, max_sweeps: int):
    """Cyclic Jacobi with parallel round-robin ordering. Returns (eigenvalues, vectors, sweeps, converged)"""
    dim = a.shape[0]
    a = a.copy()
    v = np.eye(dim, dtype=np.complex128)
    scale = float(np.linalg.norm(a))
    if dim == 1 or scale == 0.0:
        return a.diagonal().real.copy(), v, 0, True

    threshold = np.finfo(float).eps * dim * scale
    noise_floor = config.JACOBI_NOISE_RTOL * scale  # a sweep that stalls below this has hit rounding noise
    previous = np.inf
    for sweep in range(1, max_sweeps + 1):
        for p, q in _round_robin(dim):
            apq = a[p, q]
            magnitude = np.abs(apq)
            active = magnitude > np.finfo(float).tiny
            if not np.any(active):
                continue
            p, q, apq, magnitude = p[active], q[active], apq[active], magnitude[active]

            theta = (a[q, q].real - a[p, p].real) / (2.0 * magnitude)
            t = np.where(theta >= 0.0, 1.0, -1.0) / (np.abs(theta) + np.sqrt(theta * theta + 1.0))
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            phase = np.conj(apq) / magnitude  # e^{-i arg a_pq}

            # A <- A G
            col_p, col_q = a[:, p].copy(), a[:, q].copy()
            a[:, p] = col_p * c - col_q * (s * phase)
            a[:, q] = col_p * s + col_q * (c * phase)
            # A <- G^dagger A
            row_p, row_q = a[p, :].copy(), a[q, :].copy()
            a[p, :] = c[:, None] * row_p - (s * np.conj(phase))[:, None] * row_q
            a[q, :] = s[:, None] * row_p + (c * np.conj(phase))[:, None] * row_q
            a[p, q] = 0.0
            a[q, p] = 0.0
            # V <- V G
            vec_p, vec_q = v[:, p].copy(), v[:, q].copy()
            v[:, p] = vec_p * c - vec_q * (s * phase)
            v[:, q] = vec_p * s + vec_q * (c * phase)

        off = _off_norm(a)
        if off <= threshold or (off <= noise_floor and off >= 0.5 * previous):
            return a.diagonal().real.copy(), v, sweep, True
        previous = off

    return a.diagonal().real.copy(), v, max_sweeps, False


def _canonical_cluster(vectors: np.ndarray) -> np.ndarray:
    """Deterministic orthonormal basis of the span of `vectors`.

    Pivoted Gram-Schmidt on the columns of the cluster projector: the column with the
    largest remaining norm is taken next, ties going to the lowest basis index.
    """
    k = vectors.shape[1]
    residual = vectors @ vectors.conj().T
    basis = []
    for _ in range(k):
        norms = np.linalg.norm(residual, axis=0)
        pivot = int(np.argmax(norms >= norms.max() * (1.0 - 1e-9)))
        u = residual[:, pivot] / norms[pivot]
        basis.append(u)
        residual = residual - np.outer(u, u.conj() @ residual)
    return np.column_stack(basis)


def _fix_phases(vectors: np.ndarray) -> np.ndarray:
    """Make the largest-magnitude component of every column real and positive"""
    magnitudes = np.abs(vectors)
    leading = np.argmax(magnitudes >= magnitudes.max(axis=0) * (1.0 - 1e-9), axis=0)
    pivots = vectors[leading, np.arange(vectors.shape[1])]
    return vectors * (np.abs(pivots) / pivots)


def _clusters(eigenvalues: np.ndarray, width: float):
    start = 0
    for k in range(1, len(eigenvalues) + 1):
        if k == len(eigenvalues) or eigenvalues[k] - eigenvalues[k - 1] > width:
            yield start, k
            start = k


def eigh(a: ComplexMatrix, tol: float = config.EIGH_TOL, method: str = AUTO,
         max_sweeps: int = config.EIGH_MAX_SWEEPS) -> EigenDecomposition:
    """Eigen-decomposition of a Hermitian matrix.

    The input is symmetrized as (a + a^dagger)/2 first. Eigenvalues come back ascending,
    eigenvectors are made deterministic inside numerically degenerate clusters.

    Params:
        tol (float): residual bound, applied as tol * max(1, |a|_max * dim)
        method (str): 'jacobi' (built-in cyclic Jacobi), 'lapack' (numpy.linalg.eigh)
            or 'auto' (Jacobi up to config.JACOBI_MAX_DIM, LAPACK above)

    """
    if method not in EIGH_METHODS:
        raise UsageError(f'unknown eigh method {method!r}, expected one of {EIGH_METHODS}')
    if tol <= 0:
        raise UsageError('eigh tolerance must be positive')
    matrix = np.asarray(a, dtype=np.complex128)
    if not np.all(np.isfinite(matrix)):
        raise UsageError('eigh: matrix has NaN or Inf entries')
    matrix = as_matrix(0.5 * (matrix + matrix.conj().T))
    dim = matrix.shape[0]
    scale = max_norm(matrix)

    if method == AUTO:
        method = JACOBI if dim <= config.JACOBI_MAX_DIM else LAPACK

    if method == JACOBI:
        eigenvalues, vectors, sweeps, converged = _jacobi(np.array(matrix), max_sweeps)
        logger.debug('jacobi: dim=%d sweeps=%d converged=%s', dim, sweeps, converged)
    else:
        try:
            eigenvalues, vectors = np.linalg.eigh(matrix)
        except np.linalg.LinAlgError as error:
            raise ConvergenceError(f'eigh: LAPACK failed: {error}', scale)
        converged = True

    order = np.argsort(eigenvalues, kind='stable')
    eigenvalues = eigenvalues[order]
    vectors = vectors[:, order]

    width = config.DEGENERACY_RTOL * max(1.0, scale)
    for start, stop in _clusters(eigenvalues, width):
        if stop - start > 1:
            vectors[:, start:stop] = _canonical_cluster(vectors[:, start:stop])
    vectors = _fix_phases(vectors)

    residual = float(np.max(np.linalg.norm(matrix @ vectors - vectors * eigenvalues, axis=0)))
    if not converged:
        raise ConvergenceError(f'eigh: no convergence after {max_sweeps} sweeps', residual)
    if residual > tol * max(1.0, scale * dim):
        raise ConvergenceError('eigh: residual bound violated', residual)

    gram_error = max_norm(vectors.conj().T @ vectors - np.eye(dim))
    if gram_error > config.ORTHONORMALITY_TOL:
        raise ConvergenceError('eigh: eigenvectors are not orthonormal', gram_error)

    trace_error = abs(float(np.sum(eigenvalues)) - float(np.trace(matrix).real))
    if trace_error > config.TRACE_TOL * dim * max(scale, np.finfo(float).tiny):
        raise ConvergenceError('eigh: eigenvalue sum differs from the trace', trace_error)

    eigenvalues.flags.writeable = False
    return EigenDecomposition(eigenvalues=eigenvalues, eigenvectors=as_matrix(vectors),
                              residual_norm=residual)

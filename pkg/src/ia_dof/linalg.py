"""Small dense linear-algebra helpers shared by schemes and verification."""

from __future__ import annotations

import numpy as np

# singular values below RANK_TOL * sigma_max count as zero
RANK_TOL = 1e-8


def numerical_rank(A: np.ndarray, tol: float = RANK_TOL) -> int:
    if A.size == 0:
        return 0
    s = np.linalg.svd(A, compute_uv=False)
    if s[0] == 0:
        return 0
    return int(np.sum(s > tol * s[0]))


def orth(A: np.ndarray, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the column space of ``A`` (thresholded SVD)."""
    if A.shape[1] == 0:
        return np.zeros((A.shape[0], 0), dtype=complex)
    U, s, _ = np.linalg.svd(A, full_matrices=False)
    if s[0] == 0:
        return U[:, :0]
    return U[:, : int(np.sum(s > tol * s[0]))]


def null_complement(A: np.ndarray, dim: int, tol: float = RANK_TOL) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement of span(A) in C^dim."""
    if A.shape[1] == 0:
        return np.eye(dim, dtype=complex)
    U, s, _ = np.linalg.svd(A, full_matrices=True)
    r = int(np.sum(s > tol * s[0])) if s.size and s[0] > 0 else 0
    return U[:, r:]


def orthonormalize(V: np.ndarray) -> np.ndarray:
    """Gram-Schmidt (via QR) keeping nested leading-column spans.

    Column ``k`` of the result spans the same space together with columns
    ``< k`` as the first ``k + 1`` columns of ``V``.
    """
    if V.shape[1] == 0:
        return V.astype(complex)
    Q, R = np.linalg.qr(V)
    # fix the phase so the diagonal of R is real positive
    ph = np.diag(R).copy()
    ph = np.where(np.abs(ph) > 0, ph / np.abs(ph), 1.0)
    return Q * ph


def subspace_angle(U: np.ndarray, W: np.ndarray, tol: float = RANK_TOL) -> float:
    """Largest principal angle between ``span(U)`` and ``span(W)`` in radians.

    With unequal dimensions this measures containment of the smaller span in
    the larger one: the result is 0 iff the smaller span lies inside the
    larger.
    """
    U = np.atleast_2d(np.asarray(U, dtype=complex))
    W = np.atleast_2d(np.asarray(W, dtype=complex))
    if U.shape[0] != W.shape[0]:
        raise ValueError("subspaces live in different ambient dimensions")
    QU, QW = orth(U, tol), orth(W, tol)
    if QU.shape[1] != U.shape[1] or QW.shape[1] != W.shape[1]:
        raise ValueError("subspace_angle needs full-column-rank inputs")
    if QU.shape[1] > QW.shape[1]:
        QU, QW = QW, QU
    if QU.shape[1] == 0:
        return 0.0
    cos = np.linalg.svd(QW.conj().T @ QU, compute_uv=False)
    c_min = min(float(cos.min()), 1.0)
    if c_min < np.sqrt(0.5):
        return float(np.arccos(c_min))
    # small angles: sine of the residual is better conditioned than arccos
    resid = QU - QW @ (QW.conj().T @ QU)
    s_max = min(float(np.linalg.norm(resid, 2)), 1.0)
    return float(np.arcsin(s_max))

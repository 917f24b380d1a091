"""Monte Carlo check that finite-slot alignment fails for three interferers.

With ``N = 3`` the alignment conditions at receivers 1, 2, K-1 and K force
the beamformer of user K to be invariant under two different channel
products ``D`` and ``E``. Generic channels give ``D`` and ``E`` no shared
eigenvector, which is what :func:`common_eigvec_test` measures.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .channel import ChannelSet, extend, generate
from .schemes import EIG_COND_LIMIT
from .topology import Topology, wrap


@dataclass
class InfeasibilityReport:
    trials: int
    min_cross_angle: float
    per_trial: list = field(default_factory=list)   # minimum cross angle of each trial
    cond_D: list = field(default_factory=list)      # eigenvector-matrix condition numbers
    cond_E: list = field(default_factory=list)
    retries: int = 0

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "min_cross_angle": self.min_cross_angle,
            "per_trial": [float(a) for a in self.per_trial],
            "cond_D": [float(a) for a in self.cond_D],
            "cond_E": [float(a) for a in self.cond_E],
            "retries": self.retries,
        }


class DefectiveMatrixError(RuntimeError):
    pass


def _inv_mul(Hb, a, b):
    """``inv(H[a]) @ H[b]`` for link keys ``a`` and ``b``."""
    return np.linalg.solve(Hb[a], Hb[b])


def build_DE(t: Topology, c: ChannelSet) -> tuple[np.ndarray, np.ndarray]:
    """The two closure products that must share an invariant subspace.

    ``D = inv(H[1,K]) H[1,K-1] inv(H[K,K-1]) H[K,1] inv(H[2,1]) H[2,K]``
    ``E = inv(H[K-1,K]) H[K-1,K-2] inv(H[K,K-2]) H[K,1] inv(H[2,1]) H[2,K]``
    """
    if t.N != 3:
        raise ValueError(f"D/E construction needs N=3, got N={t.N}")
    if t.K < 5:
        raise ValueError("D/E construction needs K >= 5")
    K = t.K
    km1, km2 = wrap(K - 1, K), wrap(K - 2, K)
    need = [(1, K), (1, km1), (K, km1), (K, 1), (2, 1), (2, K), (km1, K), (km1, km2), (K, km2)]
    missing = [key for key in need if not c.has(*key)]
    if missing:
        raise ValueError(f"links {missing} are not present in the topology")
    Hb = extend(c)
    tail = _inv_mul(Hb, (K, km1), (K, 1)) @ _inv_mul(Hb, (2, 1), (2, K))
    D = _inv_mul(Hb, (1, K), (1, km1)) @ tail
    E = (_inv_mul(Hb, (km1, K), (km1, km2)) @ _inv_mul(Hb, (K, km2), (K, 1))
         @ _inv_mul(Hb, (2, 1), (2, K)))
    return D, E


def _eigvecs(A: np.ndarray):
    w, X = np.linalg.eig(A)
    cond = float(np.linalg.cond(X))
    if not np.isfinite(cond) or cond > EIG_COND_LIMIT:
        raise DefectiveMatrixError("matrix is numerically defective")
    return X / np.linalg.norm(X, axis=0), cond


def cross_eigen_angle(D: np.ndarray, E: np.ndarray) -> tuple[float, float, float]:
    """Smallest angle between any eigenvector of ``D`` and any of ``E``.

    Returns ``(angle, cond_D, cond_E)`` where the condition numbers belong
    to the eigenvector matrices.
    """
    if D.shape != E.shape or D.shape[0] != D.shape[1]:
        raise ValueError("D and E must be square and of equal size")
    XD, cD = _eigvecs(D)
    XE, cE = _eigvecs(E)
    cos = np.abs(XD.conj().T @ XE).max()
    # sine form is accurate near zero
    sin2 = max(0.0, 1.0 - min(cos, 1.0) ** 2)
    return float(np.arcsin(np.sqrt(sin2))), cD, cE


def common_eigvec_test(t: Topology, n_trials: int = 100, seed: int = 0,
                       max_retries: int = 8) -> InfeasibilityReport:
    """Fresh channel draws per trial; records the minimum cross eigen-angle."""
    if n_trials < 1:
        raise ValueError("need at least one trial")
    rep = InfeasibilityReport(n_trials, np.inf)
    for trial in range(n_trials):
        for attempt in range(max_retries + 1):
            c = generate(t, seed, trial * (max_retries + 1) + attempt)
            try:
                ang, cD, cE = cross_eigen_angle(*build_DE(t, c))
                break
            except DefectiveMatrixError:
                rep.retries += 1
        else:
            raise DefectiveMatrixError(f"trial {trial}: {max_retries} defective draws in a row")
        rep.per_trial.append(ang)
        rep.cond_D.append(cD)
        rep.cond_E.append(cE)
    rep.min_cross_angle = float(min(rep.per_trial))
    return rep

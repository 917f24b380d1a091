"""Multiplexing-gain upper bounds and the UB/LB classification grid.

All bound values are exact :class:`fractions.Fraction` objects so that the
comparison against the achievable ``KM/2`` is an exact equality test.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .topology import Topology, count_interfering_pairs, pair_has_link

TIGHT = "□"   # UB == LB
LOOSE = "■"   # UB > LB
INVALID = "×"  # N > K - 1


@dataclass(frozen=True)
class AntennaProfile:
    """Per-user transmit (``tx``) and receive (``rx``) antenna counts."""

    tx: tuple
    rx: tuple

    def __post_init__(self):
        if len(self.tx) != len(self.rx):
            raise ValueError("tx and rx must have the same length")
        if any(int(m) < 1 for m in self.tx + self.rx):
            raise ValueError("antenna counts must be >= 1")

    @classmethod
    def uniform(cls, K: int, M: int) -> "AntennaProfile":
        return cls((M,) * K, (M,) * K)

    @property
    def K(self) -> int:
        return len(self.tx)

    @property
    def is_uniform(self) -> bool:
        return len(set(self.tx + self.rx)) == 1


@dataclass(frozen=True)
class BoundReport:
    K: int
    N: int
    pairs: tuple          # ((a, b, gamma_k, linked), ...) in combination order
    T: int
    ub: Fraction
    lb: Fraction | None
    marker: str | None
    nrs_class: str

    @property
    def ub_num(self) -> int:
        return self.ub.numerator

    @property
    def ub_den(self) -> int:
        return self.ub.denominator

    def to_dict(self) -> dict:
        return {
            "K": self.K,
            "N": self.N,
            "T": self.T,
            "ub": f"{self.ub.numerator}/{self.ub.denominator}",
            "lb": None if self.lb is None else f"{self.lb.numerator}/{self.lb.denominator}",
            "marker": self.marker,
            "nrs_class": self.nrs_class,
            "pairs": [list(p) for p in self.pairs],
        }


def two_user_muxg(M1: int, N1: int, M2: int, N2: int) -> int:
    """Optimal MUXG of a two-user MIMO interference channel.

    ``Mi``/``Ni`` are the transmit/receive antennas of user ``i``.
    """
    if min(M1, N1, M2, N2) < 1:
        raise ValueError("antenna counts must be >= 1")
    return min(M1 + M2, N1 + N2, max(M1, N2), max(M2, N1))


def nrs_class(N: int) -> str:
    return "finite" if N <= 2 else "infinite"


def achievable_lb(K: int, M: int) -> Fraction:
    return Fraction(K * M, 2)


def pairwise_upper_bound(t: Topology, profile: AntennaProfile | None = None) -> BoundReport:
    """Average of two-user bounds over all unordered user pairs.

    A pair joined by an interfering link is bounded by :func:`two_user_muxg`.
    A pair with no link between its members is two parallel point-to-point
    links and contributes ``min(M_a, N_a) + min(M_b, N_b)``.
    """
    if profile is None:
        profile = AntennaProfile.uniform(t.K, t.M)
    if profile.K != t.K:
        raise ValueError(f"profile has {profile.K} users, topology has {t.K}")
    pairs = []
    total = 0
    T = 0
    for a, b in itertools.combinations(t.users, 2):
        Ma, Na = profile.tx[a - 1], profile.rx[a - 1]
        Mb, Nb = profile.tx[b - 1], profile.rx[b - 1]
        linked = pair_has_link(t, a, b)
        if linked:
            g = two_user_muxg(Ma, Na, Mb, Nb)
            T += 1
        else:
            g = min(Ma, Na) + min(Mb, Nb)
        pairs.append((a, b, g, linked))
        total += g
    ub = Fraction(total, t.K - 1)
    if profile.is_uniform:
        lb = achievable_lb(t.K, profile.tx[0])
        marker = TIGHT if ub == lb else LOOSE
    else:
        lb = marker = None
    return BoundReport(t.K, t.N, tuple(pairs), T, ub, lb, marker, nrs_class(t.N))


def uniform_upper_bound(K: int, N: int, M: int, T: int | None = None) -> Fraction:
    """``M (K(K-1) - T) / (K-1)``; ``T`` defaults to the enumerated pair count."""
    if T is None:
        T = count_interfering_pairs(Topology(K, N, M))
    return Fraction(M * (K * (K - 1) - T), K - 1)


def classify(t: Topology) -> BoundReport:
    """Upper bound, achievable ``KM/2`` and tight/loose marker for ``t``."""
    return pairwise_upper_bound(t)


def classification_grid(K_max: int = 9, N_max: int = 7, M: int = 1, K_min: int = 2) -> list:
    """Rows ``(K, N, report-or-None)`` for every grid cell, N-major.

    ``None`` marks cells with ``N > K - 1``.
    """
    rows = []
    for N in range(1, N_max + 1):
        for K in range(K_min, K_max + 1):
            rows.append((K, N, classify(Topology(K, N, M)) if N <= K - 1 else None))
    return rows


def render_grid(rows: list) -> str:
    """Aligned text art of the classification grid (rows N, columns K)."""
    Ks = sorted({K for K, _, _ in rows})
    Ns = sorted({N for _, N, _ in rows})
    cell = {(K, N): (INVALID if r is None else r.marker) for K, N, r in rows}
    nrs = {N: ("1 or 2" if N <= 2 else "inf") for N in Ns}
    head = f"{'N':>3} {'NRS':>6} | " + " ".join(f"{K:>2}" for K in Ks)
    lines = [f"{'':>3} {'':>6} | " + "K".center(3 * len(Ks) - 1), head, "-" * len(head)]
    for N in Ns:
        lines.append(f"{N:>3} {nrs[N]:>6} | " + " ".join(f"{cell[(K, N)]:>2}" for K in Ks))
    return "\n".join(lines) + "\n"

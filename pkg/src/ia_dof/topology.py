"""Cyclic partially connected interference topology.

Users are numbered ``1..K``. Receiver ``j`` hears the ``ceil(N/2)``
transmitters that precede it on the cycle and the ``floor(N/2)`` that
follow it, in addition to its own transmitter.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass


def wrap(i: int, K: int) -> int:
    """Map any integer to the 1-based cyclic index in ``1..K``."""
    return (i - 1) % K + 1


@dataclass(frozen=True)
class Topology:
    """K-user interference channel with N cyclic interferers per receiver.

    Parameters
    ----------
    K : int
        Number of transmitter/receiver pairs (>= 2).
    N : int
        Interfering links per receiver, ``1 <= N <= K - 1``.
    M : int
        Antennas at every node.
    n_slots : int
        Number of time/frequency slots a codeword spans.
    """

    K: int
    N: int
    M: int = 1
    n_slots: int = 1

    def __post_init__(self):
        for name in ("K", "N", "M", "n_slots"):
            if not isinstance(getattr(self, name), int) or isinstance(getattr(self, name), bool):
                raise TypeError(f"{name} must be an int")
        if self.K < 2:
            raise ValueError(f"K must be >= 2, got {self.K}")
        if not 1 <= self.N <= self.K - 1:
            raise ValueError(f"N must satisfy 1 <= N <= K-1 = {self.K - 1}, got {self.N}")
        if self.M < 1:
            raise ValueError(f"M must be >= 1, got {self.M}")
        if self.n_slots < 1:
            raise ValueError(f"n_slots must be >= 1, got {self.n_slots}")

    @property
    def fully_connected(self) -> bool:
        return self.N == self.K - 1

    @property
    def users(self) -> range:
        return range(1, self.K + 1)

    @property
    def dim(self) -> int:
        """Signal-space dimension of one extended (multi-slot) channel."""
        return self.M * self.n_slots

    def with_slots(self, n_slots: int) -> "Topology":
        return Topology(self.K, self.N, self.M, n_slots)

    def to_dict(self) -> dict:
        return {"K": self.K, "N": self.N, "M": self.M, "n_slots": self.n_slots}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> "Topology":
        return cls(int(d["K"]), int(d["N"]), int(d.get("M", 1)), int(d.get("n_slots", 1)))

    @classmethod
    def from_json(cls, s: str) -> "Topology":
        return cls.from_dict(json.loads(s))


def _check_user(t: Topology, j: int) -> None:
    if not 1 <= j <= t.K:
        raise IndexError(f"user index {j} out of range 1..{t.K}")


def interferers(t: Topology, j: int) -> tuple[int, ...]:
    """Transmitters interfering at receiver ``j``.

    Preceding transmitters come first, nearest first, then the following
    ones, nearest first.

    >>> interferers(Topology(5, 3), 1)
    (5, 4, 2)
    """
    _check_user(t, j)
    before = (t.N + 1) // 2
    after = t.N // 2
    prec = tuple(wrap(j - s, t.K) for s in range(1, before + 1))
    foll = tuple(wrap(j + s, t.K) for s in range(1, after + 1))
    return prec + foll


def interfered_receivers(t: Topology, i: int) -> tuple[int, ...]:
    """Receivers that transmitter ``i`` interferes with."""
    _check_user(t, i)
    return tuple(j for j in t.users if i in interferers(t, j))


def is_connected(t: Topology, j: int, i: int) -> bool:
    """True if the link from transmitter ``i`` to receiver ``j`` exists."""
    _check_user(t, j)
    _check_user(t, i)
    return i == j or i in interferers(t, j)


def links(t: Topology) -> list[tuple[int, int]]:
    """All stored (receiver, transmitter) links in canonical order."""
    return [(j, i) for j in t.users for i in t.users if is_connected(t, j, i)]


def pair_has_link(t: Topology, a: int, b: int) -> bool:
    """True if users ``a`` and ``b`` share at least one interfering link."""
    _check_user(t, a)
    _check_user(t, b)
    if a == b:
        raise ValueError("pair_has_link needs two distinct users")
    return a in interferers(t, b) or b in interferers(t, a)


def count_interfering_pairs(t: Topology) -> int:
    """Number of unordered user pairs joined by an interfering link."""
    return sum(pair_has_link(t, a, b) for a, b in itertools.combinations(t.users, 2))


def pair_count_formula(K: int, N: int) -> int:
    """Closed form of :func:`count_interfering_pairs` for any valid ``(K, N)``.

    A pair is linked iff its cyclic distance is at most ``ceil(N/2)``.
    Each distance below ``K/2`` contributes ``K`` pairs; the antipodal
    distance ``K/2`` (even ``K``) contributes only ``K/2``.
    """
    Topology(K, N)
    reach = (N + 1) // 2
    total = 0
    for dist in range(1, min(reach, K // 2) + 1):
        total += K // 2 if 2 * dist == K else K
    return total


def printed_pair_count(K: int, N: int) -> int:
    """Pair count as stated for odd ``N = 2p + 1``.

    ``K*p + K/2`` for even ``K`` and ``K*(p+1)`` for odd ``K``. The even-K
    expression agrees with enumeration only when ``N = K - 1``; see
    :func:`pair_count_formula` for the general count.
    """
    if N % 2 != 1:
        raise ValueError("the printed pair count is stated for odd N only")
    p = (N - 1) // 2
    if K % 2 == 0:
        return K * p + K // 2
    return K * (p + 1)

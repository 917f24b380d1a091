"""Scheme verification: subspace diagnostics and high-SNR rate slope.

Receivers are pure zero-forcing: each projects its observation onto the
orthogonal complement of the interference subspace and decodes the desired
streams from what is left. Interference is never treated as noise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import ChannelSet, extend
from .linalg import null_complement, numerical_rank, subspace_angle
from .schemes import Scheme
from .topology import Topology, interferers

__all__ = [
    "SchemeReport",
    "DecodabilityError",
    "audit",
    "receiver_rate",
    "sum_rate",
    "rate_slope",
    "subspace_angle",
]

SNR_POINTS = (1e4, 1e6)


class DecodabilityError(ValueError):
    pass


@dataclass
class SchemeReport:
    residual: list          # largest principal angle between interference images, per receiver
    d_interference: list    # numerical rank of the interference images, per receiver
    decodable: list
    dof_analytic: Fraction
    slope: float | None = None
    snr_points: tuple = SNR_POINTS
    streams: tuple = field(default=())

    @property
    def max_residual(self) -> float:
        return max(self.residual, default=0.0)

    @property
    def all_decodable(self) -> bool:
        return all(self.decodable)

    def to_dict(self) -> dict:
        return {
            "residual": [float(r) for r in self.residual],
            "d_interference": list(self.d_interference),
            "decodable": list(self.decodable),
            "dof_analytic": str(self.dof_analytic),
            "slope": self.slope,
            "snr_points": list(self.snr_points),
            "streams": list(self.streams),
        }


def _check_dims(t: Topology, c: ChannelSet, s: Scheme) -> None:
    if c.topology != t:
        raise ValueError("channel set was drawn for a different topology")
    if s.nrs != t.n_slots:
        raise ValueError(f"scheme spans {s.nrs} slots, channels have {t.n_slots}")
    if sorted(s.V) != list(t.users):
        raise ValueError("scheme must define a beamformer for every user")
    for k, v in s.V.items():
        if v.shape[0] != t.dim:
            raise ValueError(f"V[{k}] has {v.shape[0]} rows, expected {t.dim}")


def _images(t: Topology, Hb: dict, s: Scheme, j: int):
    desired = Hb[(j, j)] @ s.V[j]
    interf = [Hb[(j, i)] @ s.V[i] for i in interferers(t, j) if s.V[i].shape[1] > 0]
    return desired, interf


def _stack(mats, n):
    return np.hstack(mats) if mats else np.zeros((n, 0), dtype=complex)


def audit(t: Topology, c: ChannelSet, s: Scheme) -> SchemeReport:
    """Alignment residuals, interference dimensions and ZF decodability."""
    _check_dims(t, c, s)
    Hb = extend(c)
    residual, d_int, ok = [], [], []
    for j in t.users:
        desired, interf = _images(t, Hb, s, j)
        I = _stack(interf, t.dim)
        dI = numerical_rank(I)
        res = 0.0
        for P, Q in itertools.combinations(interf, 2):
            res = max(res, subspace_angle(P, Q))
        dj = desired.shape[1]
        joint = numerical_rank(np.hstack([desired, I]))
        residual.append(res)
        d_int.append(dI)
        ok.append(dj + dI <= t.dim and joint == dj + dI)
    return SchemeReport(residual, d_int, ok, s.dof, streams=s.streams)


def receiver_rate(desired: np.ndarray, interference: np.ndarray | None, snr: float) -> float:
    """ZF rate ``log2 det(I + snr/d * G^H G)`` with ``G`` the projected desired image.

    ``interference`` may be ``None`` or have zero columns.
    """
    d = desired.shape[1]
    if d == 0:
        return 0.0
    n = desired.shape[0]
    if interference is None:
        interference = np.zeros((n, 0), dtype=complex)
    Q = null_complement(interference, n)
    G = Q.conj().T @ desired
    sign, logdet = np.linalg.slogdet(np.eye(d) + (snr / d) * (G.conj().T @ G))
    return float(logdet / np.log(2.0))


def sum_rate(t: Topology, c: ChannelSet, s: Scheme, snr: float) -> float:
    """Per-slot sum of ZF receiver rates."""
    _check_dims(t, c, s)
    Hb = extend(c)
    total = 0.0
    for j in t.users:
        desired, interf = _images(t, Hb, s, j)
        total += receiver_rate(desired, _stack(interf, t.dim), snr)
    return total / s.nrs


def two_point_slope(rate, snr_lo: float, snr_hi: float) -> float:
    """``(rate(hi) - rate(lo)) / (log2 hi - log2 lo)`` for a callable ``rate``."""
    if not snr_hi > snr_lo > 0:
        raise ValueError("need snr_hi > snr_lo > 0")
    return float((rate(snr_hi) - rate(snr_lo)) / (np.log2(snr_hi) - np.log2(snr_lo)))


def rate_slope(t: Topology, c: ChannelSet, s: Scheme,
               snr_lo: float = SNR_POINTS[0], snr_hi: float = SNR_POINTS[1]) -> float:
    """Measured multiplexing gain per slot from two high-SNR sum rates.

    Raises
    ------
    DecodabilityError
        If some receiver cannot zero-force its interference; the slope
        would undercount the scheme.
    """
    if snr_lo < 1e3:
        raise ValueError("snr_lo must be >= 1e3 to sit in the high-SNR regime")
    rep = audit(t, c, s)
    if not rep.all_decodable:
        bad = [j for j, ok in zip(t.users, rep.decodable) if not ok]
        raise DecodabilityError(f"receivers {bad} cannot separate desired streams")
    return two_point_slope(lambda snr: sum_rate(t, c, s, snr), snr_lo, snr_hi)


def evaluate(t: Topology, c: ChannelSet, s: Scheme,
             snr_lo: float = SNR_POINTS[0], snr_hi: float = SNR_POINTS[1]) -> SchemeReport:
    """Audit plus slope (``slope`` stays ``None`` when not decodable)."""
    rep = audit(t, c, s)
    rep.snr_points = (snr_lo, snr_hi)
    if rep.all_decodable:
        rep.slope = two_point_slope(lambda snr: sum_rate(t, c, s, snr), snr_lo, snr_hi)
    return rep

"""Multiplexing gain of K-user partially connected MIMO interference channels.

Bounds, beamformer constructions (TDM, zero-forcing, interference
alignment) and numerical verification of their degrees of freedom.
"""

__version__ = "0.1.0"

from .topology import Topology, interferers, pair_has_link, count_interfering_pairs
from .channel import ChannelSet, generate, extend
from .bounds import AntennaProfile, BoundReport, two_user_muxg, pairwise_upper_bound, classify
from .schemes import Scheme, tdm, zf_n1, ia_n2, chain_matrices
from .verify import SchemeReport, audit, rate_slope, subspace_angle
from .infeasibility import InfeasibilityReport, build_DE, common_eigvec_test

__all__ = [
    "Topology", "interferers", "pair_has_link", "count_interfering_pairs",
    "ChannelSet", "generate", "extend",
    "AntennaProfile", "BoundReport", "two_user_muxg", "pairwise_upper_bound", "classify",
    "Scheme", "tdm", "zf_n1", "ia_n2", "chain_matrices",
    "SchemeReport", "audit", "rate_slope", "subspace_angle",
    "InfeasibilityReport", "build_DE", "common_eigvec_test",
]

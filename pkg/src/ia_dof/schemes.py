"""Transmit beamformer constructions: TDM, zero-forcing for N=1, and the
eigenvector-chain interference alignment for N=2.

Beamformers are indexed by 1-based user number. ``V[k]`` has shape
``(M * nrs, d[k])`` with orthonormal columns; users that stay silent carry a
``(M * nrs, 0)`` matrix.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .channel import ChannelSet, extend
from .linalg import orthonormalize
from .topology import Topology, wrap

TDM = "TDM"
ZF_N1 = "ZF_N1"
IA_N2 = "IA_N2"
RANDOM = "RANDOM"

IA_VARIANTS = ("even_M", "odd_M_two_slot", "odd_M_asym")
ZF_VARIANTS = ("even_M", "asym", "two_slot")

# eigenvector matrices worse conditioned than this signal a degenerate draw
EIG_COND_LIMIT = 1e10


class DegenerateChannelError(RuntimeError):
    """The channel draw is too close to a measure-zero degenerate case."""


@dataclass
class Scheme:
    name: str
    variant: str
    nrs: int
    V: dict
    active: dict = field(default_factory=dict)
    chain: dict = field(default_factory=dict, repr=False)

    @property
    def d(self) -> dict:
        return {k: v.shape[1] for k, v in self.V.items()}

    @property
    def streams(self) -> tuple:
        return tuple(self.V[k].shape[1] for k in sorted(self.V))

    @property
    def dof(self) -> Fraction:
        """Advertised per-slot degrees of freedom, ``sum(d) / nrs``."""
        return Fraction(sum(self.streams), self.nrs)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "variant": self.variant,
            "nrs": self.nrs,
            "streams": list(self.streams),
            "active": {str(k): list(v) for k, v in sorted(self.active.items())},
            "V": {
                str(k): [[[float(z.real), float(z.imag)] for z in row] for row in v]
                for k, v in sorted(self.V.items())
            },
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Scheme":
        V = {}
        for k, rows in d["V"].items():
            n_cols = d["streams"][int(k) - 1]
            arr = np.array(rows, dtype=float).reshape(len(rows), n_cols, 2)
            V[int(k)] = arr[..., 0] + 1j * arr[..., 1]
        active = {int(k): tuple(v) for k, v in d.get("active", {}).items()}
        return cls(d["name"], d["variant"], int(d["nrs"]), V, active)


def _require_slots(t: Topology, nrs: int) -> None:
    if t.n_slots != nrs:
        raise ValueError(
            f"scheme spans {nrs} slot(s) but topology has n_slots={t.n_slots}; "
            f"use topology.with_slots({nrs})"
        )


def required_slots(name: str, variant: str | None, M: int | None = None) -> int:
    """Slots a construction spans, so channels can be drawn to match."""
    if name == ZF_N1 and variant in (None, "auto") and M == 1:
        return 2
    return 2 if variant in ("two_slot", "odd_M_two_slot") else 1


def tdm(t: Topology) -> Scheme:
    """Single-slot TDM: pairwise non-interfering users each send M streams.

    Even ``K`` activates users 1, 3, ..., K-1; odd ``K`` activates
    1, 3, ..., K-2.
    """
    if t.N > 2:
        raise ValueError(f"TDM is defined here for N <= 2, got N={t.N}")
    _require_slots(t, 1)
    last = t.K - 1 if t.K % 2 == 0 else t.K - 2
    on = set(range(1, last + 1, 2))
    V = {}
    for k in t.users:
        V[k] = np.eye(t.M, dtype=complex) if k in on else np.zeros((t.M, 0), dtype=complex)
    active = {k: (k in on,) for k in t.users}
    return Scheme(TDM, "", 1, V, active)


def _stacked_identity(M: int, nrs: int, d: int) -> np.ndarray:
    """First ``d`` columns of ``[I; I; ...] / sqrt(nrs)`` (orthonormal)."""
    return np.vstack([np.eye(M, dtype=complex)] * nrs)[:, :d] / np.sqrt(nrs)


def zf_n1(t: Topology, variant: str = "auto") -> Scheme:
    """Zero-forcing construction for one interferer per receiver.

    Parameters
    ----------
    t : Topology
        Must have ``N == 1`` and ``n_slots`` equal to the slots the chosen
        variant spans (2 for ``"two_slot"``, else 1).
    variant : {"auto", "even_M", "asym", "two_slot"}
        ``"auto"`` picks ``"even_M"`` for even M, ``"two_slot"`` for M = 1
        and ``"asym"`` otherwise.

    Notes
    -----
    ``even_M``: every user sends M/2 streams. ``asym``: even users send
    (M+1)/2 and odd users (M-1)/2 streams. ``two_slot``: every user sends M
    streams over two block-diagonal slots. Single-slot beamformers are
    truncated identities; two-slot ones repeat the identity across slots so
    that desired and interfering images stay in generic position.
    """
    if t.N != 1:
        raise ValueError(f"zero-forcing construction needs N=1, got N={t.N}")
    M = t.M
    if variant == "auto":
        variant = "even_M" if M % 2 == 0 else ("two_slot" if M == 1 else "asym")
    if variant not in ZF_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    if variant == "even_M" and M % 2:
        raise ValueError("even_M variant needs even M")
    if variant in ("asym", "two_slot") and M % 2 == 0:
        raise ValueError(f"{variant} variant needs odd M")
    nrs = 2 if variant == "two_slot" else 1
    _require_slots(t, nrs)

    V = {}
    for k in t.users:
        if variant == "even_M":
            d = M // 2
        elif variant == "asym":
            d = (M + 1) // 2 if k % 2 == 0 else (M - 1) // 2
        else:
            d = M
        V[k] = _stacked_identity(M, nrs, d)
    return Scheme(ZF_N1, variant, nrs, V)


# -- interference alignment for N = 2 ---------------------------------------


def _step_factor(Hb: dict, K: int, r: int) -> np.ndarray:
    """``inv(H[r, r-1]) @ H[r, r+1]`` for receiver ``r`` (cyclic)."""
    prev, nxt = wrap(r - 1, K), wrap(r + 1, K)
    return np.linalg.solve(Hb[(r, prev)], Hb[(r, nxt)])


def _product(Hb: dict, K: int, receivers) -> np.ndarray:
    n = next(iter(Hb.values())).shape[0]
    P = np.eye(n, dtype=complex)
    for r in receivers:
        P = P @ _step_factor(Hb, K, r)
    return P


def chain_matrices(t: Topology, c: ChannelSet) -> dict:
    """Closure matrices whose eigenvectors seed the alignment chains.

    Odd ``K`` returns ``{"A": ...}``, even ``K`` returns ``{"B": ..., "C": ...}``.
    Every matrix is a product of factors ``inv(H[r, r-1]) H[r, r+1]``; an
    empty run of factors (``K = 3``) is the identity.
    """
    if t.N != 2:
        raise ValueError(f"alignment chains need N=2, got N={t.N}")
    K = t.K
    Hb = extend(c)
    if K % 2:
        order = list(range(3, K - 1, 2)) + [K] + list(range(2, K, 2)) + [1]
        return {"A": _product(Hb, K, order)}
    return {
        "B": _product(Hb, K, list(range(2, K - 1, 2)) + [K]),
        "C": _product(Hb, K, list(range(3, K, 2)) + [1]),
    }


def chain_orders(K: int) -> list:
    """User visiting order of each chain, seed first.

    Chains are walked downwards: ``u -> u-2`` through receiver ``u-1``, so
    that the closure of a chain applies exactly its closure matrix (whose
    dominant eigenvectors form the seed) and rounding errors are damped
    rather than amplified around the loop.
    """
    if K % 2:
        return [[wrap(2 - 2 * s, K) for s in range(K)]]
    return [[wrap(1 - 2 * s, K) for s in range(K // 2)],
            [wrap(2 - 2 * s, K) for s in range(K // 2)]]


def _eig_order(w: np.ndarray) -> np.ndarray:
    # descending magnitude, then ascending (real, imag)
    return np.lexsort((w.imag, w.real, -np.abs(w)))


def _checked_eig(A: np.ndarray):
    w, X = np.linalg.eig(A)
    if not np.all(np.isfinite(X)) or np.linalg.cond(X) > EIG_COND_LIMIT:
        raise DegenerateChannelError("closure matrix is (numerically) defective")
    return w, X


def select_eigvecs(A: np.ndarray, d: int) -> np.ndarray:
    """First ``d`` eigenvectors of ``A`` under the deterministic ordering."""
    w, X = _checked_eig(A)
    return X[:, _eig_order(w)[:d]]


def select_eigvecs_per_slot(A: np.ndarray, M: int, counts) -> np.ndarray:
    """Eigenvectors of a block-diagonal ``A``, ``counts[l]`` taken from slot ``l``.

    Eigenvectors of a block-diagonal matrix with distinct eigenvalues live in
    a single block, so the slot each one occupies has to be chosen
    explicitly.
    """
    n = A.shape[0]
    cols = []
    for l, cnt in enumerate(counts):
        blk = A[l * M:(l + 1) * M, l * M:(l + 1) * M]
        if cnt == 0:
            continue
        w, X = _checked_eig(blk)
        for idx in _eig_order(w)[:cnt]:
            v = np.zeros(n, dtype=complex)
            v[l * M:(l + 1) * M] = X[:, idx]
            cols.append(v)
    return np.column_stack(cols) if cols else np.zeros((n, 0), dtype=complex)


def propagate(Hb: dict, K: int, order: list, seed: np.ndarray) -> dict:
    """Walk one chain from its seed, returning orthonormal beamformers.

    Receiver ``r`` aligns ``H[r, r-1] V[r-1]`` with ``H[r, r+1] V[r+1]``, so
    the beamformer of ``u - 2`` is ``inv(H[u-1, u-2]) H[u-1, u] V[u]``,
    re-orthonormalized (leading column spans are preserved).
    """
    V = {order[0]: orthonormalize(seed)}
    for prev, nxt in zip(order, order[1:]):
        r = wrap(prev - 1, K)
        V[nxt] = orthonormalize(np.linalg.solve(Hb[(r, nxt)], Hb[(r, prev)] @ V[prev]))
    return V


def ia_n2(t: Topology, c: ChannelSet, variant: str = "even_M") -> Scheme:
    """Interference alignment for two cyclic interferers per receiver.

    Parameters
    ----------
    t : Topology
        ``N == 2``, ``K >= 3``. ``n_slots`` must be 2 for
        ``"odd_M_two_slot"`` and 1 otherwise.
    c : ChannelSet
        Channel draw for ``t``.
    variant : {"even_M", "odd_M_two_slot", "odd_M_asym"}

    Returns
    -------
    Scheme
        ``even_M``: M/2 streams per user. ``odd_M_two_slot``: M streams per
        user over two slots; each chain seed takes (M+1)/2 eigenvectors
        from one slot and (M-1)/2 from the other, the even-user chain
        mirrored. ``odd_M_asym``: chains of width (M+1)/2, odd users keep the
        first (M-1)/2 columns.

    Raises
    ------
    DegenerateChannelError
        When a closure matrix is numerically defective; redraw channels.
    """
    if t.N != 2:
        raise ValueError(f"IA construction needs N=2, got N={t.N}")
    if t.K < 3:
        raise ValueError("IA construction needs K >= 3")
    if c.topology != t:
        raise ValueError("channel set was drawn for a different topology")
    if variant not in IA_VARIANTS:
        raise ValueError(f"unknown variant {variant!r}")
    M, K = t.M, t.K
    if variant == "even_M" and M % 2:
        raise ValueError("even_M variant needs even M")
    if variant != "even_M" and M % 2 == 0:
        raise ValueError(f"{variant} variant needs odd M")
    nrs = 2 if variant == "odd_M_two_slot" else 1
    _require_slots(t, nrs)

    Hb = extend(c)
    mats = chain_matrices(t, c)
    closures = [mats["A"]] if K % 2 else [mats["B"], mats["C"]]
    big, small = (M + 1) // 2, (M - 1) // 2

    V, seeds = {}, {}
    for n_chain, (order, closure) in enumerate(zip(chain_orders(K), closures)):
        if variant == "even_M":
            seed = select_eigvecs(closure, M // 2)
        elif variant == "odd_M_asym":
            seed = select_eigvecs(closure, big)
        else:
            counts = (big, small) if n_chain == 0 else (small, big)
            seed = select_eigvecs_per_slot(closure, M, counts)
        seeds[order[0]] = seed
        V.update(propagate(Hb, K, order, seed))

    if variant == "odd_M_asym":
        V = {k: (v if k % 2 == 0 else v[:, :small]) for k, v in V.items()}
    V = {k: V[k] for k in t.users}
    return Scheme(IA_N2, variant, nrs, V, chain={"matrices": mats, "seeds": seeds})


def random_scheme(t: Topology, streams, rng: np.random.Generator, nrs: int = 1) -> Scheme:
    """Unaligned control: i.i.d. Gaussian beamformers with the given stream counts."""
    from .channel import complex_normal

    _require_slots(t, nrs)
    V = {k: orthonormalize(complex_normal(rng, (t.M * nrs, streams[k - 1]))) for k in t.users}
    return Scheme(RANDOM, "", nrs, V)


def build(t: Topology, c: ChannelSet | None, name: str, variant: str = "auto") -> Scheme:
    """Dispatch to a construction by scheme name."""
    if name == TDM:
        return tdm(t)
    if name == ZF_N1:
        return zf_n1(t, variant)
    if name == IA_N2:
        if variant == "auto":
            variant = "even_M" if t.M % 2 == 0 else "odd_M_asym"
        return ia_n2(t, c, variant)
    raise ValueError(f"unknown scheme {name!r}")

"""Random channel realizations and their block-diagonal slot extensions.

Entries are i.i.d. CN(0, 1) drawn from a Philox counter-based generator.
The draw order is fixed: slot-major, then receiver, then transmitter (over
stored links only), then row-major within each M x M matrix. Each complex
entry consumes two consecutive standard normals, real part first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.linalg import block_diag

from .topology import Topology, links

MAX_RETRIES = 8


class ChannelGenerationError(RuntimeError):
    pass


def make_rng(seed: int, trial: int | tuple | None = None) -> np.random.Generator:
    """Philox generator for ``seed``.

    ``trial`` (an int or a tuple of ints) derives an independent child
    stream, so ``(seed, trial)`` pairs can be generated in any order.
    """
    if trial is None:
        ss = np.random.SeedSequence(seed)
    else:
        key = tuple(trial) if isinstance(trial, tuple) else (trial,)
        ss = np.random.SeedSequence(seed, spawn_key=key)
    return np.random.Generator(np.random.Philox(ss))


def complex_normal(rng: np.random.Generator, shape) -> np.ndarray:
    """CN(0, 1) samples with (re, im) drawn as consecutive pairs."""
    shape = tuple(np.atleast_1d(shape))
    raw = rng.standard_normal(int(np.prod(shape)) * 2).reshape(shape + (2,))
    return (raw[..., 0] + 1j * raw[..., 1]) / np.sqrt(2.0)


def _full_rank(H: np.ndarray) -> bool:
    s = np.linalg.svd(H, compute_uv=False)
    return s[-1] > 1e-12 * s[0]


@dataclass(frozen=True)
class ChannelSet:
    """Per-slot channel matrices of every stored link.

    ``H[(j, i)]`` has shape ``(n_slots, M, M)`` and is the channel from
    transmitter ``i`` to receiver ``j``. Links absent from the topology are
    not stored; :meth:`matrix` returns exact zeros for them.
    """

    topology: Topology
    seed: int | None
    H: dict = field(repr=False)

    def __post_init__(self):
        t = self.topology
        expected = links(t)
        if sorted(self.H) != sorted(expected):
            raise ValueError("channel links do not match the topology")
        for key, arr in self.H.items():
            if arr.shape != (t.n_slots, t.M, t.M):
                raise ValueError(f"link {key} has shape {arr.shape}")
            arr.flags.writeable = False

    def has(self, j: int, i: int) -> bool:
        return (j, i) in self.H

    def matrix(self, j: int, i: int, slot: int = 1) -> np.ndarray:
        """M x M channel of link (j, i) in 1-based ``slot``."""
        t = self.topology
        if not 1 <= slot <= t.n_slots:
            raise IndexError(f"slot {slot} out of range 1..{t.n_slots}")
        if (j, i) not in self.H:
            return np.zeros((t.M, t.M), dtype=complex)
        return self.H[(j, i)][slot - 1]

    def flat(self) -> np.ndarray:
        """All entries as complex values in the canonical draw order."""
        t = self.topology
        order = links(t)
        return np.concatenate(
            [self.H[key][l].ravel() for l in range(t.n_slots) for key in order]
        ) if order else np.zeros(0, dtype=complex)

    # -- dump format: metadata JSON + little-endian float64 (re, im) pairs --

    def metadata(self) -> dict:
        return {
            "topology": self.topology.to_dict(),
            "seed": self.seed,
            "links": [list(k) for k in links(self.topology)],
            "order": "slot,receiver,transmitter,row,col",
            "dtype": "<f8",
            "layout": "interleaved re,im",
        }

    def save(self, stem: str | Path) -> tuple[Path, Path]:
        """Write ``<stem>.json`` and ``<stem>.bin``; returns both paths."""
        stem = Path(stem)
        meta_path = stem.with_suffix(".json")
        bin_path = stem.with_suffix(".bin")
        meta_path.write_text(json.dumps(self.metadata(), indent=2, sort_keys=True) + "\n")
        z = self.flat()
        raw = np.empty(2 * z.size, dtype="<f8")
        raw[0::2] = z.real
        raw[1::2] = z.imag
        bin_path.write_bytes(raw.tobytes())
        return meta_path, bin_path

    @classmethod
    def load(cls, stem: str | Path) -> "ChannelSet":
        stem = Path(stem)
        meta = json.loads(stem.with_suffix(".json").read_text())
        t = Topology.from_dict(meta["topology"])
        raw = np.frombuffer(stem.with_suffix(".bin").read_bytes(), dtype="<f8")
        return cls.from_flat(t, raw[0::2] + 1j * raw[1::2], meta.get("seed"))

    @classmethod
    def from_flat(cls, t: Topology, z: np.ndarray, seed=None) -> "ChannelSet":
        order = links(t)
        per = t.M * t.M
        if z.size != per * len(order) * t.n_slots:
            raise ValueError(f"expected {per * len(order) * t.n_slots} entries, got {z.size}")
        H = {key: np.empty((t.n_slots, t.M, t.M), dtype=complex) for key in order}
        pos = 0
        for l in range(t.n_slots):
            for key in order:
                H[key][l] = z[pos:pos + per].reshape(t.M, t.M)
                pos += per
        return cls(t, seed, H)


def generate(t: Topology, seed: int, trial: int | tuple | None = None) -> ChannelSet:
    """Draw a fresh :class:`ChannelSet` for topology ``t``.

    The same ``(t, seed, trial)`` always yields bit-identical matrices.
    A rank-deficient draw (probability zero) triggers a redraw from the
    continuing stream.
    """
    rng = make_rng(seed, trial)
    n_entries = t.M * t.M * len(links(t)) * t.n_slots
    for _ in range(MAX_RETRIES):
        cs = ChannelSet.from_flat(t, complex_normal(rng, n_entries), seed)
        if all(_full_rank(m) for arr in cs.H.values() for m in arr):
            return cs
    raise ChannelGenerationError(f"{MAX_RETRIES} consecutive rank-deficient draws")


def extend(c: ChannelSet) -> dict:
    """Block-diagonal ``(M*n_slots) x (M*n_slots)`` matrix of every stored link."""
    return {key: block_diag(*arr) for key, arr in c.H.items()}


def extended(c: ChannelSet, j: int, i: int) -> np.ndarray:
    """Extended channel of a single link; zeros if the link is absent."""
    t = c.topology
    if not c.has(j, i):
        return np.zeros((t.dim, t.dim), dtype=complex)
    return block_diag(*c.H[(j, i)])

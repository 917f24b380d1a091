"""
Seeded channel draws and slot extensions
========================================

Every link gets an i.i.d. CN(0, 1) matrix per slot. Coding over several
slots is modelled by block-diagonal extended channels.
"""

# %%
import numpy as np

from ia_dof import Topology
from ia_dof.channel import ChannelSet, extend, generate

t = Topology(K=4, N=2, M=2, n_slots=2)
c = generate(t, seed=0, trial=0)
print(sorted(c.H))
print(c.matrix(1, 4, slot=2))

# %% Same (seed, trial) gives the same bits; a different trial does not
again = generate(t, 0, 0)
print(np.array_equal(c.flat(), again.flat()), np.array_equal(c.flat(), generate(t, 0, 1).flat()))

# %% Entry statistics
z = np.concatenate([generate(Topology(5, 4, 4), 1, k).flat() for k in range(200)])
print("mean", z.mean(), "E|h|^2", np.mean(np.abs(z) ** 2))

# %% Extended channel of one link: slots on the diagonal
Hb = extend(c)
print(np.round(np.abs(Hb[(1, 2)]), 2))

# %% Dump and reload
import tempfile
from pathlib import Path

with tempfile.TemporaryDirectory() as d:
    c.save(Path(d) / "ch")
    back = ChannelSet.load(Path(d) / "ch")
print(np.array_equal(back.flat(), c.flat()))

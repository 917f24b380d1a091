"""
Interference alignment with two interferers
===========================================

Receiver j hears users j-1 and j+1. Aligning their images ties the
beamformers together along chains; eigenvectors of the chain's closure
matrix make the chain consistent.
"""

# %%
import numpy as np

from ia_dof import Topology
from ia_dof.channel import extend, generate
from ia_dof.linalg import subspace_angle
from ia_dof.schemes import chain_orders, ia_n2
from ia_dof.topology import wrap
from ia_dof.verify import audit, rate_slope

t = Topology(K=5, N=2, M=2)
c = generate(t, 3, 0)
s = ia_n2(t, c)
print("chain order", chain_orders(5), "streams", s.streams)

# %% Alignment at each receiver
Hb = extend(c)
for j in t.users:
    a, b = wrap(j - 1, 5), wrap(j + 1, 5)
    print(j, "angle %.2e" % subspace_angle(Hb[(j, a)] @ s.V[a], Hb[(j, b)] @ s.V[b]))

# %% The seed is invariant under the closure matrix
A, seed = s.chain["matrices"]["A"], s.chain["seeds"][2]
print("closure angle %.2e" % subspace_angle(A @ seed, seed))

# %% Odd M: asymmetric split works, two slots on an odd cycle do not
for K, M, variant, slots in [(4, 3, "odd_M_asym", 1), (5, 3, "odd_M_asym", 1),
                             (4, 3, "odd_M_two_slot", 2), (5, 3, "odd_M_two_slot", 2)]:
    t = Topology(K, 2, M, slots)
    c = generate(t, 0, 0)
    s = ia_n2(t, c, variant)
    rep = audit(t, c, s)
    slope = rate_slope(t, c, s) if rep.all_decodable else np.nan
    print(K, M, variant, "dof", s.dof, "d_I", rep.d_interference, "slope %.3f" % slope)

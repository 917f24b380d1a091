"""
TDM and zero forcing with one interferer
========================================

With N = 1 every receiver hears a single interferer, so half of each
receiver's dimensions can be set aside for interference.
"""

# %%
from ia_dof import Topology
from ia_dof.channel import generate
from ia_dof.schemes import tdm, zf_n1
from ia_dof.verify import audit, rate_slope

for K in (4, 5):
    s = tdm(Topology(K, 1, 2))
    print(K, "active", [k for k, (on,) in s.active.items() if on], "dof", s.dof)

# %% Zero forcing: even M, asymmetric odd M, and two slots for M = 1
cases = [(4, 2, "even_M", 1), (4, 3, "asym", 1), (3, 3, "asym", 1), (3, 1, "two_slot", 2)]
for K, M, variant, slots in cases:
    t = Topology(K, 1, M, slots)
    c = generate(t, 0, 0)
    s = zf_n1(t, variant)
    rep = audit(t, c, s)
    print(K, M, variant, s.streams, "dof", s.dof, "slope %.3f" % rate_slope(t, c, s),
          "decodable", rep.all_decodable)

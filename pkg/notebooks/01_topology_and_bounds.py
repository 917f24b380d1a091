"""
Cyclic topologies and the pairwise upper bound
==============================================

Receiver j hears the ceil(N/2) transmitters before it and the floor(N/2)
after it. Grouping users into pairs gives an upper bound on the total
multiplexing gain; we compare it with the KM/2 that alignment achieves.
"""

# %%
from fractions import Fraction

from ia_dof import Topology, interferers
from ia_dof.bounds import classification_grid, classify, pairwise_upper_bound, render_grid
from ia_dof.topology import count_interfering_pairs, pair_count_formula

t = Topology(K=6, N=3, M=2)
for j in t.users:
    print(j, "hears", interferers(t, j))

# %% Interfering pairs: enumeration against the closed form
for K in range(4, 9):
    print(K, [(count_interfering_pairs(Topology(K, N)), pair_count_formula(K, N))
              for N in range(1, K)])

# %% Per-pair values for a small case
rep = pairwise_upper_bound(Topology(4, 1, 1))
for a, b, gamma, linked in rep.pairs:
    print(f"pair ({a},{b}) linked={linked} gamma={gamma}")
print("ub =", rep.ub, " KM/2 =", Fraction(4, 2))

# %% Tight vs loose cells
print(classify(Topology(7, 4, 2)))
print(render_grid(classification_grid(9, 7, M=1)))

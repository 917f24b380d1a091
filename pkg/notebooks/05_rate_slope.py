"""
Measuring multiplexing gain from the rate slope
===============================================

The sum rate under zero-forcing receivers grows like dof * log2(snr). A
two-point slope at high SNR estimates the dof.
"""

# %%
import numpy as np

from ia_dof import Topology
from ia_dof.channel import generate, make_rng
from ia_dof.schemes import ia_n2, random_scheme
from ia_dof.verify import sum_rate, two_point_slope

t = Topology(4, 2, 2)
c = generate(t, 0, 0)
ia = ia_n2(t, c)
for db in range(0, 81, 10):
    print(db, "dB  %.2f bits/slot" % sum_rate(t, c, ia, 10 ** (db / 10)))

# %% Aligned vs random beamformers
# unaligned interferers fill both receive dimensions, so zero forcing leaves
# nothing for the desired stream and the slope collapses
slopes = {"ia": [], "random": []}
for trial in range(20):
    c = generate(t, 0, trial)
    rnd = random_scheme(t, (1, 1, 1, 1), make_rng(1, trial))
    for name, s in (("ia", ia_n2(t, c)), ("random", rnd)):
        slopes[name].append(two_point_slope(lambda snr: sum_rate(t, c, s, snr), 1e4, 1e6))
print({k: (round(min(v), 3), round(max(v), 3)) for k, v in slopes.items()})

# %% Sensitivity to the SNR pair
c = generate(t, 0, 0)
for lo, hi in [(1e2, 1e4), (1e4, 1e6), (1e6, 1e8)]:
    print(lo, hi, two_point_slope(lambda snr: sum_rate(t, c, ia, snr), lo, hi))

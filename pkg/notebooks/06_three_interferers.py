"""
Why three interferers need infinitely many slots
================================================

With N = 3, alignment at receivers 1, 2, K-1 and K forces the beamformer
of user K to be invariant under two channel products D and E. Generic
channels leave them without a common eigenvector.
"""

# %%
import numpy as np

from ia_dof import Topology
from ia_dof.channel import generate
from ia_dof.infeasibility import build_DE, common_eigvec_test, cross_eigen_angle

t = Topology(6, 3, 2)
D, E = build_DE(t, generate(t, 0, 0))
print("angle between eigenvectors of D and E: %.3g" % cross_eigen_angle(D, E)[0])
print("control D vs D: %.3g" % cross_eigen_angle(D, D)[0])

# %% Distribution over trials
for K in (5, 6, 7, 8):
    rep = common_eigvec_test(Topology(K, 3, 2), n_trials=100, seed=0)
    a = np.array(rep.per_trial)
    print(K, "min %.3g  median %.3g  retries %d" % (a.min(), np.median(a), rep.retries))

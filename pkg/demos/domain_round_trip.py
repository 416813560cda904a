"""
The hat matrix and its inverse
==============================

"""

import numpy as np

from su21reps.domain import hat, in_domain_D, reconstruct_P, triangle_slack
from su21reps.linalg import is_su21, random_su21

P = random_su21(3)
M = hat(P)
print(np.round(M.m, 4))

# row and column sums are 1, signs follow diag(1,1,-1)
print("row sums", M.m.sum(axis=1), " in D:", in_domain_D(M), " slack", triangle_slack(M))

# two mirror reconstructions, both land on the same hat matrix
for orientation in (1, -1):
    Q = reconstruct_P(M, orientation)
    print(orientation, is_su21(Q), np.abs(hat(Q).m - M.m).max())

# P and Q differ only by diagonal factors on both sides
Q = reconstruct_P(M)
print("|P| == |Q| entrywise:", np.allclose(np.abs(P), np.abs(Q)))

"""
Trace identities on random SU(2,1) pairs
========================================

"""

import numpy as np

from su21reps.linalg import classify_element, eigen_triple, is_su21, random_su21
from su21reps.traces import (
    IdentityName,
    comm_trace_direct,
    comm_trace_im_sq,
    comm_trace_real,
    identity_residual,
    trace_tuple,
)

# a reproducible pair
A, B = random_su21(7), random_su21(8)
print("A in SU(2,1):", is_su21(A), " class:", classify_element(A).name)
print("eigenvalues of A:", np.round(eigen_triple(A), 6))

# tr A, tr B, tr AB, tr A^-1 B; with conjugates these generate the invariants
t = trace_tuple(A, B)
print(t)

# residual per identity; V only closes once conj(tr AB) is added to its right side
for name in IdentityName:
    print(f"{name.value:>4}  {identity_residual(name, A, B):.2e}")

# the commutator trace is pinned down up to conjugation by the five traces
c = comm_trace_direct(A, B)
print("Re tr[A,B]   direct", c.real, " formula", comm_trace_real(t))
print("Im^2 tr[A,B] direct", c.imag ** 2, " formula", comm_trace_im_sq(t))

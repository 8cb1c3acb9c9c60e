"""
Matrix products and the reflected walk
======================================

The matrix walk multiplies by U diag(p,1,...,1) V at rate-1 Poisson times.
The reflected walk has clocks of rate t, t**2, ..., t**N (t = 1/p), and a
clock that would break the ordering pushes the top of its block instead.
Run at time c' * tau, it should look like the matrix walk at time tau.
"""

import numpy as np

from padic_dyson.processes import RateParams, canonical_process, reflected_step, reflected_walk_simulate

print("reflection: (6,3,3,2,0,0) with clock 3 ->", reflected_step((6, 3, 3, 2, 0, 0), 3))

N, p, tau = 3, 2, 2.0
rp = RateParams.for_prime(p, N)
c = float(rp.time_scale)
print(f"N={N}, p={p}: time change c' = {rp.time_scale}")

tr = canonical_process(N, p, (tau,), seed=4)
print("one matrix-walk path:")
for time, sig in tr.events:
    print(f"  t={time:.3f}  SN={tuple(sig)}")

runs = 3000
mat = [canonical_process(N, p, (tau,), 2, sample=s).state_at(tau) for s in range(runs)]
ref = [reflected_walk_simulate(N, rp.t, (c * tau,), 3, sample=s).state_at(c * tau) for s in range(runs)]
print("mean |SN(X(tau))|  :", np.mean([s.size for s in mat]))
print("mean |S(c' tau)|   :", np.mean([s.size for s in ref]))
print("mean first part    :", np.mean([s[0] for s in mat]), np.mean([s[0] for s in ref]))

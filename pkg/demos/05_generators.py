"""
Exact generators
================

The singular numbers of the matrix walk jump kappa -> kappa + e_l with
probability t**(l-1) (1 - t**m) / (1 - t**N), where m is the size of the
block of equal parts starting at l.  Brute-force enumeration over F_p^N
agrees, and the reflected walk's generator is the same up to c'.
"""

from fractions import Fraction

from padic_dyson.linalg import Signature
from padic_dyson.processes import a_row, b_row, generator_A, generator_B, one_jump_oracle, time_scale
from padic_dyson.verify import verify_generators

p, N = 3, 3
t = Fraction(1, p)
kappa = Signature((2, 1, 0))
print("closed form:", {tuple(k): str(v) for k, v in a_row(kappa, t).items()})
print("enumeration:", {tuple(k): str(v) for k, v in one_jump_oracle(kappa, N, p).items()})
print("reflected  :", {tuple(k): str(v) for k, v in b_row(kappa, t).items()})
print("c' =", time_scale(t, N))

A, B = generator_A(N, p, 4), generator_B(N, t, 4)
c = time_scale(t, N)
print("A == c' B on all entries:", all(A.entries[k] == c * B.entries[k] for k in A.entries))

# With an extra (1 - t) prefactor the rows no longer sum to one
print(verify_generators(2, 2, 6).summary())
print(verify_generators(2, 2, 6, literal_prefactor=True).summary())
print()
print(generator_A(2, 2, 2).to_csv())

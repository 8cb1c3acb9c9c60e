"""
Singular numbers
================

Every nonsingular matrix over Q_p factors as U diag(p**lambda) V with U, V
invertible over Z_p.  lambda is computed two ways: by Smith normal form
elimination and from valuations of minors.
"""

from padic_dyson.linalg import PAdicMatrix, left_diag_multiply, singular_numbers, singular_numbers_minor_oracle
from padic_dyson.sampling import StreamKey, haar_gln_zp
from padic_dyson.verify import random_scaled_matrix

p = 3
A = PAdicMatrix.from_integers([[p, 1], [0, p]], p, 10)
print("SN([[p,1],[0,p]]) =", singular_numbers(A), "oracle:", singular_numbers_minor_oracle(A))

# Multiplying by a Haar matrix does not change singular numbers
U = haar_gln_zp(1, 0, p, 2, 10)
print("SN(U A) =", singular_numbers(U @ A))

# Left multiplication by diag(p**kappa) adds |kappa| to |SN|
kappa = (2, 0)
print("|SN(diag(p^kappa) A)| =", singular_numbers(left_diag_multiply(kappa, A)).size, "= 2 + 2")

# A few random matrices with mixed valuations
for s in range(5):
    M = random_scaled_matrix(StreamKey(7, (s,)), p, 3, 3, 20)
    print(f"sample {s}: SNF {tuple(singular_numbers(M))}  minors {tuple(singular_numbers_minor_oracle(M))}")

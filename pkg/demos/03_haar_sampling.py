"""
Haar measure on GL_N(Z_p)
=========================

Columns are drawn right to left.  Only the lowest digit of each column is
conditioned (it must leave the span mod p of the columns already chosen),
and asking for more digits later never changes the earlier ones.
"""

from fractions import Fraction

from padic_dyson.sampling import haar_gln_zp, haar_rejection
from padic_dyson.verify import chi_square_gof, gl_mod_p, histogram

U = haar_gln_zp(seed=5, event_index=0, p=2, N=3, n=6)
print(U)
print("mod 2:", U.mod_p())

# Same seed at higher precision: the first six digits agree
V = haar_gln_zp(seed=5, event_index=0, p=2, N=3, n=12)
print("entry (0,0) low digits:", U[0, 0].residue(6), V[0, 0].residue(6))

# The reduction mod p is uniform on GL_2(F_3), which has 48 elements
group = gl_mod_p(2, 3)
draws = 20_000
hist = histogram(haar_gln_zp(1, s, 3, 2, 1).mod_p() for s in range(draws))
stat, dof, pval = chi_square_gof(hist, {g: Fraction(1, len(group)) for g in group})
print(f"column sampler vs uniform on GL_2(F_3): chi2={stat:.1f} dof={dof} p={pval:.3f}")

_, tries = haar_rejection(1, 0, 2, 2, 4, with_attempts=True)
print("whole-matrix rejection needed", tries, "attempt(s); mean is 16/6")

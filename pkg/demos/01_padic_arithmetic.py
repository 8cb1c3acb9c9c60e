"""
Truncated p-adic arithmetic
===========================

Numbers are stored as p**v times a unit known to a fixed number of digits.
Valuations are always exact; cancellation is reported, never hidden.
"""

from fractions import Fraction

from padic_dyson.padic import add, from_integer, from_rational, inv, mul, valuation_of

# 12 = 2**2 * 3, so the unit part has digits 1, 1, 0, ...
x = from_integer(12, 2, 8)
print("12 at p=2:", x, "digits", x.digits)

# -1 is the all-ones digit string
print("-1 at p=2:", from_integer(-1, 2, 6).digits)

# Adding 1 and -1 leaves nothing known below p**4
z = add(from_integer(1, 2, 4), from_integer(-1, 2, 4))
print("1 + (-1):", z, "valuation at least", valuation_of(z))

# Inverses live modulo p**precision: 3 * 11 = 33 = 1 mod 16
print("1/3 at p=2, 4 digits: unit", inv(from_integer(3, 2, 4)).unit)

# Rationals with p in the denominator get negative valuation
third = from_rational(Fraction(1, 3), 3, 5)
print("val_3(1/3) =", third.valuation)
print("3 * (1/3) =", mul(from_integer(3, 3, 5), third))

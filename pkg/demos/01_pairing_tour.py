"""
A first look at the pairing suites
==================================

Three interchangeable backends sit behind one interface.  The transparent
ones expose discrete logs, which makes them handy for checking arithmetic
by hand; the curve suite is the real thing.
"""

from bdvtps import curve_suite, large_suite, tiny_suite

# the toy suite: G1 is Z_11 written additively, G2 the order-11 subgroup mod 23
tiny = tiny_suite()
P = tiny.P
print(tiny)
print("e(3P, 5P) =", tiny.pair(3 * P, 5 * P).raw, " g^15 mod 23 =", pow(2, 15 % 11, 23))

# bilinearity, checked on the 160-bit supersingular curve
curve = curve_suite()
Q = curve.P
a, b = 1234567, 7654321
lhs = curve.pair(a * Q, b * Q)
rhs = curve.pair(Q, Q) ** (a * b)
print("curve bilinear:", lhs == rhs)

# multiplying by the group order kills every point
print("q * P is the identity:", curve.q * Q == curve.identity)

# elements know their suite; mixing suites is an error, not a silent bug
try:
    tiny.P + large_suite().P
except ValueError as exc:
    print("mixing suites ->", type(exc).__name__)

"""Arithmetic on the supersingular curve y^2 = x^3 + x over F_p, p = 3 mod 4.

Points are affine ``(x, y)`` tuples with ``None`` for the point at infinity.
Elements of F_{p^2} = F_p[i]/(i^2 + 1) are ``(a, b)`` tuples meaning a + b*i.

The reduced Tate pairing is evaluated with Miller's algorithm on the
distorted second argument phi(x, y) = (-x, i*y).  phi(B) has its x-coordinate
in F_p, so every vertical line value lands in F_p and is erased by the
(p - 1) factor of the final exponentiation; the loop skips them.
"""

from __future__ import annotations

from typing import Optional, Tuple

Point = Optional[Tuple[int, int]]
Fp2 = Tuple[int, int]

FP2_ONE: Fp2 = (1, 0)


def fp2_mul(x: Fp2, y: Fp2, p: int) -> Fp2:
    a, b = x
    c, d = y
    ac = a * c
    bd = b * d
    return ((ac - bd) % p, ((a + b) * (c + d) - ac - bd) % p)


def fp2_sqr(x: Fp2, p: int) -> Fp2:
    a, b = x
    return ((a + b) * (a - b) % p, 2 * a * b % p)


def fp2_inv(x: Fp2, p: int) -> Fp2:
    a, b = x
    norm = pow(a * a + b * b, -1, p)
    return (a * norm % p, -b * norm % p)


def fp2_pow(x: Fp2, k: int, p: int) -> Fp2:
    if k < 0:
        x, k = fp2_inv(x, p), -k
    result = FP2_ONE
    for bit in bin(k)[2:]:
        result = fp2_sqr(result, p)
        if bit == "1":
            result = fp2_mul(result, x, p)
    return result


def fp2_conj(x: Fp2, p: int) -> Fp2:
    # Frobenius: (a + bi)^p = a - bi since p = 3 mod 4
    return (x[0], -x[1] % p)


def on_curve(pt: Point, p: int) -> bool:
    if pt is None:
        return True
    x, y = pt
    if not (0 <= x < p and 0 <= y < p):
        return False
    return (y * y - x * x * x - x) % p == 0


def neg(pt: Point, p: int) -> Point:
    if pt is None:
        return None
    return (pt[0], -pt[1] % p)


def add(a: Point, b: Point, p: int) -> Point:
    if a is None:
        return b
    if b is None:
        return a
    x1, y1 = a
    x2, y2 = b
    if x1 == x2:
        if (y1 + y2) % p == 0:
            return None
        lam = (3 * x1 * x1 + 1) * pow(2 * y1, -1, p) % p
    else:
        lam = (y2 - y1) * pow(x2 - x1, -1, p) % p
    x3 = (lam * lam - x1 - x2) % p
    return (x3, (lam * (x1 - x3) - y1) % p)


def mul(pt: Point, k: int, p: int) -> Point:
    if k < 0:
        pt, k = neg(pt, p), -k
    result = None
    addend = pt
    while k:
        if k & 1:
            result = add(result, addend, p)
        addend = add(addend, addend, p)
        k >>= 1
    return result


def lift_x(x: int, p: int) -> Point:
    """Return a point with the given x-coordinate, or None if x^3 + x is a non-residue."""
    rhs = (x * x * x + x) % p
    y = pow(rhs, (p + 1) // 4, p)
    if y * y % p != rhs:
        return None
    return (x, y)


def tate(a: Point, b: Point, q: int, p: int) -> Fp2:
    """Reduced Tate pairing t(a, phi(b)) for a, b in the order-q subgroup."""
    if a is None or b is None:
        return FP2_ONE
    xb, yb = b
    f = FP2_ONE
    t = a
    bits = bin(q)[3:]
    last = len(bits) - 1
    for pos, bit in enumerate(bits):
        xt, yt = t
        lam = (3 * xt * xt + 1) * pow(2 * yt, -1, p) % p
        # tangent at t evaluated at (-xb, i*yb)
        f = fp2_mul(fp2_sqr(f, p), ((lam * (xb + xt) - yt) % p, yb), p)
        x3 = (lam * lam - 2 * xt) % p
        t = (x3, (lam * (xt - x3) - yt) % p)
        if bit == "1":
            xt, yt = t
            xa, ya = a
            if xt == xa:
                # t = -a only happens on the final step where t + a = O
                if pos != last:
                    raise ArithmeticError("point order does not match q")
                t = None
                continue
            lam = (ya - yt) * pow(xa - xt, -1, p) % p
            f = fp2_mul(f, ((lam * (xb + xt) - yt) % p, yb), p)
            x3 = (lam * lam - xt - xa) % p
            t = (x3, (lam * (xt - x3) - yt) % p)
    # f^((p^2 - 1)/q) = (conj(f)/f)^((p + 1)/q)
    f = fp2_mul(fp2_conj(f, p), fp2_inv(f, p), p)
    return fp2_pow(f, (p + 1) // q, p)

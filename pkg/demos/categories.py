"""
Lenses, Dialectica arrows and polynomial reverse derivatives
=============================================================

Small worked examples on finite sets and on polynomial maps.
"""
import random
from fractions import Fraction

from dialectica.categories import (
    FINSET,
    POLY,
    G,
    Poly,
    T_star,
    dial_check,
    poly_reverse_diff,
)
from dialectica.categories.poly import poly_map
from dialectica.generators import random_dial_arrow, random_dial_object, random_elens, random_finset

rng = random.Random(1)

# a lens between finite sets and its image as a Dialectica arrow
A, X, B, Y = (random_finset(rng, 2, 4) for _ in range(4))
e = random_elens(rng, A, X, B, Y)
print("lens forward table ", e.forward.table)
print("lens backward table", e.backward.table)
d = G(e)
print("G(lens) is a Dial arrow:", dial_check(d))

# random Dial arrows between objects with proper subobjects
found = 0
while found < 3:
    o1, o2 = random_dial_object(rng), random_dial_object(rng)
    arrow = random_dial_arrow(rng, o1, o2)
    if arrow is None:
        continue
    found += 1
    print(f"arrow {o1.A.size}x{o1.X.size} -> {o2.A.size}x{o2.X.size}: check = {dial_check(arrow)}")

# reverse derivative of f(x) = x^2 and g(y) = y + 1
f = poly_map(1, [Poly(1, {(2,): Fraction(1)})])
g = poly_map(1, [Poly(1, {(1,): Fraction(1), (0,): Fraction(1)})])
print()
print("R[f](3, 1)     =", poly_reverse_diff(f)([3, 1]))
print("R[f;g](3, 1)   =", poly_reverse_diff(POLY.compose(f, g))([3, 1]), " (g adds a constant, so same)")
print("T*(f;g) == T*f ; T*g:", T_star(POLY.compose(f, g)).equals(T_star(f).then(T_star(g))))
print("objects live in", type(FINSET).__name__, "and", type(POLY).__name__)

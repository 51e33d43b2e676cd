"""
Gradients through the Dialectica witness
========================================

Differentiate a few source programs by reading off the counter of the
translated term, then compare against dual numbers and finite differences.
"""
import random

from dialectica.numeric import (
    gradient_fd,
    gradient_forward,
    max_relative_error,
    value_and_gradient_dialectica,
)
from dialectica.parsing import parse_source

programs = {
    "x^4 via sq twice": (r"\(x:real). sq (sq x)", 1),
    "product": ("mul", 2),
    "higher order": (r"(\(g:real->real) (x:real). g (g x)) cubic", 1),
    "three args": (r"\(x:real) (y:real) (z:real). add (mul x y) (cubic z)", 3),
}

rng = random.Random(0)
for label, (src, n) in programs.items():
    f = parse_source(src)
    point = [rng.uniform(-2, 2) for _ in range(n)]
    value, grad = value_and_gradient_dialectica(f, point)
    fwd = gradient_forward(f, point)
    fd = gradient_fd(f, point)
    print(f"{label:18s} f = {value:+.6f}")
    print(f"  dialectica  {[round(g, 8) for g in grad]}")
    print(f"  forward err {max_relative_error(grad, fwd):.2e}   fd err {max_relative_error(grad, fd):.2e}")

"""Euclidean lenses and Dialectica arrows over a concrete Cartesian category.

A category here is any object providing::

    identity(obj)          compose(f, g)   # f ; g
    product(a, b)          proj1(a, b)     proj2(a, b)
    pair(f, g)             dom(f)          cod(f)
    equal(f, g) -> bool

An E-lens from ``pi_1 : A*X -> A`` to ``pi_1 : B*Y -> B`` is a forward map
``f : A -> B`` with a backward map ``F : A*Y -> A*X`` such that
``F ; pi_1 = pi_1``.  A Dialectica arrow ``(A, X, a) -> (B, Y, b)`` is a pair
``f : A -> B``, ``F : A*Y -> X``; see :mod:`dialectica.categories.dial`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any


class LensError(ValueError):
    pass


def cross(cat, f, y):
    """``f x 1_Y : A*Y -> B*Y``."""
    a, _ = cat.dom(f), cat.cod(f)
    return cat.pair(cat.compose(cat.proj1(a, y), f), cat.proj2(a, y))


@dataclass(frozen=True)
class ELensArrow:
    cat: Any
    A: Any
    X: Any
    B: Any
    Y: Any
    forward: Any  # A -> B
    backward: Any  # A*Y -> A*X

    @property
    def source(self):
        return (self.A, self.X)

    @property
    def target(self):
        return (self.B, self.Y)

    def lies_over_base(self) -> bool:
        """The triangle ``F ; pi_1 = pi_1``."""
        cat = self.cat
        left = cat.compose(self.backward, cat.proj1(self.A, self.X))
        return cat.equal(left, cat.proj1(self.A, self.Y))

    def validate(self) -> "ELensArrow":
        cat = self.cat
        if cat.dom(self.forward) != self.A or cat.cod(self.forward) != self.B:
            raise LensError("forward map has the wrong type")
        if cat.dom(self.backward) != cat.product(self.A, self.Y):
            raise LensError("backward map has the wrong domain")
        if cat.cod(self.backward) != cat.product(self.A, self.X):
            raise LensError("backward map has the wrong codomain")
        if not self.lies_over_base():
            raise LensError("backward map does not satisfy F;pi_1 = pi_1")
        return self

    def then(self, other: "ELensArrow") -> "ELensArrow":
        return elens_compose(self, other)

    def equals(self, other: "ELensArrow") -> bool:
        return (
            self.source == other.source
            and self.target == other.target
            and self.cat.equal(self.forward, other.forward)
            and self.cat.equal(self.backward, other.backward)
        )


def elens_identity(cat, a, x) -> ELensArrow:
    return ELensArrow(cat, a, x, a, x, cat.identity(a), cat.identity(cat.product(a, x)))


def elens_compose(e1: ELensArrow, e2: ELensArrow) -> ELensArrow:
    """``(f;g, <pi_1, (f x 1);G;pi_2> ; F)``."""
    if e1.target != e2.source:
        raise LensError(f"cannot compose lenses: {e1.target} vs {e2.source}")
    cat = e1.cat
    a, z = e1.A, e2.Y
    f, big_f, big_g = e1.forward, e1.backward, e2.backward
    pulled = cat.compose(cat.compose(cross(cat, f, z), big_g), cat.proj2(e1.B, e1.Y))
    back = cat.compose(cat.pair(cat.proj1(a, z), pulled), big_f)
    return ELensArrow(cat, a, e1.X, e2.B, z, cat.compose(f, e2.forward), back)

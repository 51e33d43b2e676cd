"""Dialectica categories and the isomorphism with Euclidean lenses.

An object ``(A, X, a)`` carries a subobject ``a`` of ``A*X``.  Over finite
sets a subobject is a subset, stored as a predicate table; every mono into
``A*X`` is an injection, so its class is determined by its image.  For the
other categories used here only the full subobject is available.

``(f, F) : (A, X, a) -> (B, Y, b)`` is an arrow when for all ``(x, y)`` in
``A*Y``, ``(x, F(x, y)) in a`` implies ``(f(x), y) in b``.  In Set the
comparison map required between the two pullbacks is automatically unique
once it exists, so only this inclusion is checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional, Tuple

from .finset import FinSet, FinSetCategory
from .lens import ELensArrow, cross


class DialError(ValueError):
    pass


@dataclass(frozen=True)
class Subobject:
    """A subset of ``A*X`` given by one boolean per element (encoded as in FinSet)."""

    A: FinSet
    X: FinSet
    table: Tuple[bool, ...]

    def __post_init__(self):
        if len(self.table) != self.A.size * self.X.size:
            raise DialError("predicate table does not match the carrier")

    def __contains__(self, pair) -> bool:
        i, j = pair
        return self.table[i * self.X.size + j]

    @property
    def is_full(self) -> bool:
        return all(self.table)

    @classmethod
    def full(cls, a: FinSet, x: FinSet) -> "Subobject":
        return cls(a, x, (True,) * (a.size * x.size))


@dataclass(frozen=True)
class DialObject:
    A: Any
    X: Any
    sub: Optional[Subobject] = None  # None: the full subobject

    @property
    def is_full(self) -> bool:
        return self.sub is None or self.sub.is_full

    def holds(self, i, j) -> bool:
        return True if self.sub is None else (i, j) in self.sub

    def canonical(self) -> "DialObject":
        """Full subobjects collapse to ``None`` so equal classes compare equal."""
        return DialObject(self.A, self.X, None) if self.is_full else self


@dataclass(frozen=True)
class DialArrow:
    cat: Any
    source: DialObject
    target: DialObject
    forward: Any  # A -> B
    counter: Any  # A*Y -> X

    def then(self, other: "DialArrow") -> "DialArrow":
        return dial_compose(self, other)

    def equals(self, other: "DialArrow") -> bool:
        return (
            self.source.canonical() == other.source.canonical()
            and self.target.canonical() == other.target.canonical()
            and self.cat.equal(self.forward, other.forward)
            and self.cat.equal(self.counter, other.counter)
        )


def dial_check(arrow: DialArrow) -> bool:
    """Whether ``arrow`` satisfies the Dialectica condition."""
    src, tgt = arrow.source, arrow.target
    cat = arrow.cat
    if cat.dom(arrow.forward) != src.A or cat.cod(arrow.forward) != tgt.A:
        raise DialError("forward map has the wrong type")
    if cat.dom(arrow.counter) != cat.product(src.A, tgt.X) or cat.cod(arrow.counter) != src.X:
        raise DialError("counter map has the wrong type")
    if tgt.is_full:
        return True
    if not isinstance(cat, FinSetCategory):
        raise DialError("non-full subobjects are only supported over finite sets")
    f, big_f = arrow.forward, arrow.counter
    y_size = tgt.X.size
    for a in range(src.A.size):
        for y in range(y_size):
            if src.holds(a, big_f(a * y_size + y)) and not tgt.holds(f(a), y):
                return False
    return True


def dial_identity(cat, obj: DialObject) -> DialArrow:
    """``(1_A, pi_2)``."""
    return DialArrow(cat, obj, obj, cat.identity(obj.A), cat.proj2(obj.A, obj.X))


def dial_compose(d1: DialArrow, d2: DialArrow, check: bool = True) -> DialArrow:
    """``(f;g, <pi_1, (f x 1);G> ; F)``."""
    if d1.target.canonical() != d2.source.canonical():
        raise DialError("Dialectica arrows are not composable")
    cat = d1.cat
    a, z = d1.source.A, d2.target.X
    inner = cat.pair(cat.proj1(a, z), cat.compose(cross(cat, d1.forward, z), d2.counter))
    result = DialArrow(
        cat,
        d1.source,
        d2.target,
        cat.compose(d1.forward, d2.forward),
        cat.compose(inner, d1.counter),
    )
    if check and not dial_check(result):
        raise AssertionError("composite of Dialectica arrows violates the Dialectica condition")
    return result


# ---------------------------------------------------------------------------
# G : ELens(L) -> EDial(L) and its inverse


def G(e: ELensArrow) -> DialArrow:
    """``(f, F) |-> (f, F ; pi_2)`` with full subobjects."""
    cat = e.cat
    return DialArrow(
        cat,
        DialObject(e.A, e.X),
        DialObject(e.B, e.Y),
        e.forward,
        cat.compose(e.backward, cat.proj2(e.A, e.X)),
    )


def G_inv(d: DialArrow) -> ELensArrow:
    """``(f, F) |-> (f, <pi_1, F>)``; defined on full subobjects only."""
    if not (d.source.is_full and d.target.is_full):
        raise DialError("G_inv is only defined on full subobjects")
    cat = d.cat
    a, y = d.source.A, d.target.X
    return ELensArrow(
        cat, a, d.source.X, d.target.A, y, d.forward, cat.pair(cat.proj1(a, y), d.counter)
    )

"""Primitive constants: real-valued functions with their partial derivatives.

A :class:`Signature` names the primitives available to source programs.  The
target calculus additionally sees, for every primitive ``f`` of arity ``n``,
the partial-derivative symbols ``d1_f, ..., dn_f`` (same curried type as
``f``) and the product ``mul``, which the Dialectica witness of a primitive
uses to scale cotangents.  Numeric literals such as ``3.0`` are primitives of
type ``real`` in both calculi.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Callable, Dict, Optional, Tuple

from .syntax import REAL, Prim, Type, arrows


class UnknownPrimitive(KeyError):
    pass


@dataclass(frozen=True)
class PrimitiveImpl:
    """A smooth function ``real^arity -> real`` and its partial derivatives."""

    name: str
    arity: int
    fn: Callable[..., float]
    partials: Tuple[Callable[..., float], ...]

    def __post_init__(self):
        if self.arity < 1:
            raise ValueError("primitive functions need arity >= 1; use literals for constants")
        if len(self.partials) != self.arity:
            raise ValueError(f"{self.name}: need {self.arity} partials, got {len(self.partials)}")

    @property
    def type(self) -> Type:
        return arrows(*([REAL] * (self.arity + 1)))


_LITERAL = re.compile(r"^-?(\d+\.\d*|\d*\.\d+|\d+)([eE][-+]?\d+)?$")
_PARTIAL = re.compile(r"^d(\d+)_(.+)$")


def is_literal(name: str) -> bool:
    return bool(_LITERAL.match(name)) and name != "0"


def literal(value: float) -> Prim:
    return Prim(repr(float(value)), REAL)


@dataclass
class Signature:
    """Registry of primitives, keyed by symbol."""

    prims: Dict[str, PrimitiveImpl] = field(default_factory=dict)

    def register(self, impl: PrimitiveImpl) -> None:
        if is_literal(impl.name) or _PARTIAL.match(impl.name):
            raise ValueError(f"reserved primitive name: {impl.name}")
        self.prims[impl.name] = impl

    def __contains__(self, name: str) -> bool:
        return name in self.prims or is_literal(name)

    def __getitem__(self, name: str) -> PrimitiveImpl:
        try:
            return self.prims[name]
        except KeyError:
            raise UnknownPrimitive(name) from None

    def source_prim(self, name: str) -> Optional[Prim]:
        """The source-calculus constant for ``name``, or None."""
        if is_literal(name):
            return Prim(name, REAL)
        if name in self.prims:
            return Prim(name, self.prims[name].type)
        return None

    def target_prim(self, name: str) -> Optional[Prim]:
        """Like :meth:`source_prim` but also resolving ``mul`` and ``dK_f``."""
        p = self.source_prim(name)
        if p is not None:
            return p
        if name == "mul":
            return Prim("mul", arrows(REAL, REAL, REAL))
        m = _PARTIAL.match(name)
        if m and m.group(2) in self.prims:
            impl = self.prims[m.group(2)]
            if 1 <= int(m.group(1)) <= impl.arity:
                return Prim(name, impl.type)
            raise UnknownPrimitive(f"{name}: {impl.name} has arity {impl.arity}")
        return None

    def evaluator(self, name: str) -> Tuple[int, Callable[..., float]]:
        """``(arity, python function)`` interpreting a target-calculus symbol.

        Arity 0 means a literal, whose function takes no argument.
        """
        if is_literal(name):
            value = float(name)
            return 0, lambda: value
        if name in self.prims:
            impl = self.prims[name]
            return impl.arity, impl.fn
        if name == "mul":
            return 2, _mul
        m = _PARTIAL.match(name)
        if m and m.group(2) in self.prims:
            impl = self.prims[m.group(2)]
            k = int(m.group(1))
            if 1 <= k <= impl.arity:
                return impl.arity, impl.partials[k - 1]
        raise UnknownPrimitive(name)

    def copy(self) -> "Signature":
        return Signature(dict(self.prims))


def partial_symbol(name: str, k: int) -> str:
    return f"d{k}_{name}"


def _mul(a, b):
    return a * b


def _cubic(u):
    return u * u * u + u


def default_signature() -> Signature:
    """add, mul, neg, sq and the smooth unary ``cubic(u) = u^3 + u``."""
    sig = Signature()
    sig.register(PrimitiveImpl("add", 2, lambda a, b: a + b, (lambda a, b: 1.0, lambda a, b: 1.0)))
    sig.register(PrimitiveImpl("mul", 2, _mul, (lambda a, b: b, lambda a, b: a)))
    sig.register(PrimitiveImpl("neg", 1, lambda a: -a, (lambda a: -1.0,)))
    sig.register(PrimitiveImpl("sq", 1, lambda a: a * a, (lambda a: 2.0 * a,)))
    sig.register(PrimitiveImpl("cubic", 1, _cubic, (lambda a: 3.0 * a * a + 1.0,)))
    return sig


DEFAULT_SIGNATURE = default_signature()

"""Abstract syntax shared by the source calculus and the target calculus.

The source calculus is the simply typed lambda-calculus with primitive
constants (``Var``, ``Lam``, ``App``, ``Prim``).  The target calculus adds
pairs, projections, a monad (``Ret``, ``Bind``) and a commutative monoid at
monadic types (``Zero``, ``Plus``).  Both calculi use the same node classes;
:func:`is_source` tells whether a term stays inside the source fragment.

Variables are named.  Fresh names are produced by avoidance against an
explicit set of names in use, so every operation here is pure.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Optional, Union

# ---------------------------------------------------------------------------
# Types


class Type:
    """Base class of simple types (source) and their product/monad extension."""

    __slots__ = ()

    def __str__(self) -> str:
        from .printing import pretty_type

        return pretty_type(self)


@dataclass(frozen=True, eq=True, repr=True)
class Ground(Type):
    name: str


@dataclass(frozen=True)
class Arrow(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True)
class Prod(Type):
    left: Type
    right: Type


@dataclass(frozen=True)
class Monad(Type):
    inner: Type


REAL = Ground("real")


def arrows(*types: Type) -> Type:
    """Right-nested arrow type ``t1 -> t2 -> ... -> tn``."""
    result = types[-1]
    for t in reversed(types[:-1]):
        result = Arrow(t, result)
    return result


def is_source_type(t: Type) -> bool:
    if isinstance(t, Ground):
        return True
    if isinstance(t, Arrow):
        return is_source_type(t.dom) and is_source_type(t.cod)
    return False


# ---------------------------------------------------------------------------
# Terms


class Term:
    __slots__ = ()

    @cached_property
    def free_vars(self) -> frozenset:
        return _free_vars(self)

    def __str__(self) -> str:
        from .printing import pretty

        return pretty(self)


@dataclass(frozen=True)
class Var(Term):
    name: str


@dataclass(frozen=True)
class Lam(Term):
    var: str
    body: Term
    ty: Optional[Type] = field(default=None, compare=True)


@dataclass(frozen=True)
class App(Term):
    fun: Term
    arg: Term


@dataclass(frozen=True)
class Prim(Term):
    """A primitive constant together with its declared type."""

    name: str
    ty: Type


@dataclass(frozen=True)
class Pair(Term):
    fst: Term
    snd: Term


@dataclass(frozen=True)
class Proj(Term):
    index: int
    of: Term

    def __post_init__(self):
        if self.index not in (1, 2):
            raise ValueError(f"projection index must be 1 or 2, got {self.index}")


@dataclass(frozen=True)
class Ret(Term):
    inner: Term


@dataclass(frozen=True)
class Bind(Term):
    action: Term
    cont: Term


@dataclass(frozen=True)
class Zero(Term):
    pass


@dataclass(frozen=True)
class Plus(Term):
    left: Term
    right: Term


ZERO = Zero()

SOURCE_NODES = (Var, Lam, App, Prim)


def apps(head: Term, *args: Term) -> Term:
    for a in args:
        head = App(head, a)
    return head


def pairs(*items: Term) -> Term:
    """Right-nested tuple ``<t1, <t2, ... tn>>``."""
    result = items[-1]
    for t in reversed(items[:-1]):
        result = Pair(t, result)
    return result


def fst(t: Term) -> Term:
    return Proj(1, t)


def snd(t: Term) -> Term:
    return Proj(2, t)


def children(t: Term) -> tuple:
    if isinstance(t, (Var, Prim, Zero)):
        return ()
    if isinstance(t, Lam):
        return (t.body,)
    if isinstance(t, App):
        return (t.fun, t.arg)
    if isinstance(t, Pair):
        return (t.fst, t.snd)
    if isinstance(t, Proj):
        return (t.of,)
    if isinstance(t, Ret):
        return (t.inner,)
    if isinstance(t, Bind):
        return (t.action, t.cont)
    if isinstance(t, Plus):
        return (t.left, t.right)
    raise TypeError(f"not a term: {t!r}")


def is_source(t: Term) -> bool:
    if not isinstance(t, SOURCE_NODES):
        return False
    return all(is_source(c) for c in children(t))


def _free_vars(t: Term) -> frozenset:
    if isinstance(t, Var):
        return frozenset((t.name,))
    if isinstance(t, Lam):
        return t.body.free_vars - {t.var}
    result = frozenset()
    for c in children(t):
        result |= c.free_vars
    return result


def free_vars(t: Term) -> frozenset:
    return t.free_vars


def all_names(t: Term) -> set:
    """Every variable name occurring in ``t``, bound or free."""
    names = set()
    stack = [t]
    while stack:
        u = stack.pop()
        if isinstance(u, Var):
            names.add(u.name)
        elif isinstance(u, Lam):
            names.add(u.var)
        stack.extend(children(u))
    return names


def size(t: Term) -> int:
    return 1 + sum(size(c) for c in children(t))


def depth(t: Term) -> int:
    return 1 + max((depth(c) for c in children(t)), default=0)


# ---------------------------------------------------------------------------
# Fresh names

_SUFFIX = re.compile(r"^(.*?)(\d+)$")


def fresh(base: str, avoid: Iterable[str]) -> str:
    """Return ``base`` or ``base`` with a numeric suffix, not in ``avoid``."""
    avoid = avoid if isinstance(avoid, (set, frozenset)) else set(avoid)
    if base not in avoid:
        return base
    m = _SUFFIX.match(base)
    stem = m.group(1) if m and m.group(1) else base
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


# ---------------------------------------------------------------------------
# Substitution


def rebuild(t: Term, kids: tuple) -> Term:
    """A copy of ``t`` whose immediate subterms are replaced by ``kids``."""
    if isinstance(t, Lam):
        return Lam(t.var, kids[0], t.ty)
    if isinstance(t, App):
        return App(*kids)
    if isinstance(t, Pair):
        return Pair(*kids)
    if isinstance(t, Proj):
        return Proj(t.index, kids[0])
    if isinstance(t, Ret):
        return Ret(kids[0])
    if isinstance(t, Bind):
        return Bind(*kids)
    if isinstance(t, Plus):
        return Plus(*kids)
    return t


def subst(t: Term, var: str, replacement: Term) -> Term:
    """Capture-avoiding substitution ``t{replacement/var}``."""
    return subst_many(t, {var: replacement})


def subst_many(t: Term, mapping: dict) -> Term:
    """Simultaneous capture-avoiding substitution of several variables."""
    mapping = {k: v for k, v in mapping.items() if k in t.free_vars}
    if not mapping:
        return t
    if isinstance(t, Var):
        return mapping.get(t.name, t)
    if isinstance(t, Lam):
        inner = {k: v for k, v in mapping.items() if k != t.var}
        if not inner:
            return t
        incoming = frozenset().union(*(v.free_vars for v in inner.values()))
        if t.var in incoming:
            avoid = incoming | t.body.free_vars | set(inner)
            new = fresh(t.var, avoid)
            inner[t.var] = Var(new)
            return Lam(new, subst_many(t.body, inner), t.ty)
        return Lam(t.var, subst_many(t.body, inner), t.ty)
    return rebuild(t, tuple(subst_many(c, mapping) for c in children(t)))


def rename_bound(t: Term, old: str, new: str) -> Term:
    """Rename the binder of ``Lam(old, ...)`` to ``new`` (``new`` must be fresh)."""
    assert isinstance(t, Lam) and t.var == old
    return Lam(new, subst(t.body, old, Var(new)), t.ty)


# ---------------------------------------------------------------------------
# Alpha-equivalence


def alpha_eq(a: Term, b: Term) -> bool:
    """True iff ``a`` and ``b`` differ only by renaming of bound variables."""
    return _alpha(a, b, {}, {}, 0)


def _alpha(a: Term, b: Term, env_a: dict, env_b: dict, level: int) -> bool:
    if type(a) is not type(b):
        return False
    if isinstance(a, Var):
        la, lb = env_a.get(a.name), env_b.get(b.name)
        if la is None and lb is None:
            return a.name == b.name
        return la == lb
    if isinstance(a, Lam):
        if a.ty != b.ty:
            return False
        return _alpha(
            a.body, b.body, {**env_a, a.var: level}, {**env_b, b.var: level}, level + 1
        )
    if isinstance(a, Prim):
        return a.name == b.name and a.ty == b.ty
    if isinstance(a, Proj) and a.index != b.index:
        return False
    ca, cb = children(a), children(b)
    return all(_alpha(x, y, env_a, env_b, level) for x, y in zip(ca, cb))


def canonical(t: Term) -> Term:
    """Alpha-normal representative: binders renamed ``_0, _1, ...`` by depth."""
    return _canon(t, {}, 0)


def _canon(t: Term, env: dict, level: int) -> Term:
    if isinstance(t, Var):
        return Var(env.get(t.name, t.name))
    if isinstance(t, Lam):
        name = f"_{level}"
        return Lam(name, _canon(t.body, {**env, t.var: name}, level + 1), t.ty)
    return rebuild(t, tuple(_canon(c, env, level) for c in children(t)))


SyntaxTerm = Union[Var, Lam, App, Prim, Pair, Proj, Ret, Bind, Zero, Plus]

"""Type checking for the source calculus and the target calculus.

Source terms carry binder annotations, so their types are computed by plain
syntax-directed inference.

Target terms produced by the Dialectica transformation have unannotated
binders (the transformation is untyped), and ``0`` has no type of its own.
:func:`infer_target` therefore works bidirectionally against an optional
expected type and resolves the remaining unknowns by first-order
unification.  There is no polymorphism: every unknown must be determined by
the context and the expected type, otherwise checking fails.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Iterable, List, Optional, Tuple

from .syntax import (
    App,
    Arrow,
    Bind,
    Ground,
    Lam,
    Monad,
    Pair,
    Plus,
    Prim,
    Prod,
    Proj,
    Ret,
    Term,
    Type,
    Var,
    Zero,
    is_source,
    is_source_type,
)


class TypeCheckError(TypeError):
    pass


class Context:
    """Ordered typing context; later entries shadow earlier ones."""

    __slots__ = ("entries",)

    def __init__(self, entries: Iterable[Tuple[str, Type]] = ()):
        self.entries = tuple(entries)

    @classmethod
    def of(cls, mapping=None, **kwargs) -> "Context":
        items = list((mapping or {}).items()) + list(kwargs.items())
        return cls(items)

    def extend(self, name: str, ty: Type) -> "Context":
        return Context(self.entries + ((name, ty),))

    def lookup(self, name: str) -> Optional[Type]:
        for n, t in reversed(self.entries):
            if n == name:
                return t
        return None

    def names(self) -> List[str]:
        seen, out = set(), []
        for n, _ in reversed(self.entries):
            if n not in seen:
                seen.add(n)
                out.append(n)
        return list(reversed(out))

    def items(self) -> List[Tuple[str, Type]]:
        return [(n, self.lookup(n)) for n in self.names()]

    def map(self, f) -> "Context":
        return Context((n, f(t)) for n, t in self.items())

    def __iter__(self):
        return iter(self.items())

    def __len__(self):
        return len(self.names())

    def __repr__(self):
        return "Context(" + ", ".join(f"{n}:{t}" for n, t in self.items()) + ")"

    def __str__(self):
        return ", ".join(f"{n} : {t}" for n, t in self.items())


EMPTY = Context()


# ---------------------------------------------------------------------------
# Source calculus


def infer_source(ctx: Context, t: Term) -> Type:
    """The simple type of ``t`` in ``ctx``; binders must be annotated."""
    if isinstance(t, Var):
        ty = ctx.lookup(t.name)
        if ty is None:
            raise TypeCheckError(f"unbound variable {t.name}")
        return ty
    if isinstance(t, Prim):
        return t.ty
    if isinstance(t, Lam):
        if t.ty is None:
            raise TypeCheckError(f"unannotated binder {t.var}")
        if not is_source_type(t.ty):
            raise TypeCheckError(f"binder {t.var} has non-simple type {t.ty}")
        return Arrow(t.ty, infer_source(ctx.extend(t.var, t.ty), t.body))
    if isinstance(t, App):
        f = infer_source(ctx, t.fun)
        a = infer_source(ctx, t.arg)
        if not isinstance(f, Arrow) or f.dom != a:
            raise TypeCheckError(f"application mismatch: cannot apply {t.fun} : {f} to {t.arg} : {a}")
        return f.cod
    raise TypeCheckError(f"{type(t).__name__} is not a source-calculus construct")


def check_source(ctx: Context, t: Term, ty: Type) -> None:
    got = infer_source(ctx, t)
    if got != ty:
        raise TypeCheckError(f"{t} has type {got}, expected {ty}")


# ---------------------------------------------------------------------------
# Target calculus


@dataclass(frozen=True)
class Meta(Type):
    """An unknown type, solved by unification."""

    id: int

    def __str__(self):
        return f"?{self.id}"


@dataclass
class _Unifier:
    solution: dict = field(default_factory=dict)
    counter: itertools.count = field(default_factory=itertools.count)

    def fresh(self) -> Meta:
        return Meta(next(self.counter))

    def resolve(self, t: Type) -> Type:
        while isinstance(t, Meta) and t in self.solution:
            t = self.solution[t]
        return t

    def zonk(self, t: Type) -> Type:
        t = self.resolve(t)
        if isinstance(t, Arrow):
            return Arrow(self.zonk(t.dom), self.zonk(t.cod))
        if isinstance(t, Prod):
            return Prod(self.zonk(t.left), self.zonk(t.right))
        if isinstance(t, Monad):
            return Monad(self.zonk(t.inner))
        return t

    def occurs(self, m: Meta, t: Type) -> bool:
        t = self.resolve(t)
        if t == m:
            return True
        if isinstance(t, Arrow):
            return self.occurs(m, t.dom) or self.occurs(m, t.cod)
        if isinstance(t, Prod):
            return self.occurs(m, t.left) or self.occurs(m, t.right)
        if isinstance(t, Monad):
            return self.occurs(m, t.inner)
        return False

    def unify(self, a: Type, b: Type, where: Term) -> None:
        a, b = self.resolve(a), self.resolve(b)
        if a == b:
            return
        if isinstance(a, Meta) or isinstance(b, Meta):
            m, other = (a, b) if isinstance(a, Meta) else (b, a)
            if self.occurs(m, other):
                raise TypeCheckError(f"infinite type in {where}")
            self.solution[m] = other
            return
        if type(a) is type(b) and not isinstance(a, Ground):
            if isinstance(a, Arrow):
                self.unify(a.dom, b.dom, where)
                self.unify(a.cod, b.cod, where)
            elif isinstance(a, Prod):
                self.unify(a.left, b.left, where)
                self.unify(a.right, b.right, where)
            else:
                self.unify(a.inner, b.inner, where)
            return
        raise TypeCheckError(f"type mismatch in {where}: {self.zonk(a)} vs {self.zonk(b)}")

    def as_monad(self, t: Type, where: Term, what: str) -> Type:
        r = self.resolve(t)
        if isinstance(r, Monad):
            return r.inner
        if isinstance(r, Meta):
            inner = self.fresh()
            self.solution[r] = Monad(inner)
            return inner
        raise TypeCheckError(f"{what} at non-monadic type {self.zonk(r)} in {where}")


def _has_meta(t: Type) -> bool:
    if isinstance(t, Meta):
        return True
    if isinstance(t, Arrow):
        return _has_meta(t.dom) or _has_meta(t.cod)
    if isinstance(t, Prod):
        return _has_meta(t.left) or _has_meta(t.right)
    if isinstance(t, Monad):
        return _has_meta(t.inner)
    return False


def _contains_zero(t: Term) -> bool:
    from .syntax import children

    return isinstance(t, Zero) or any(_contains_zero(c) for c in children(t))


class _TargetChecker:
    def __init__(self):
        self.u = _Unifier()

    def check(self, ctx: Context, t: Term, expected: Type) -> None:
        u = self.u
        exp = u.resolve(expected)
        if isinstance(t, Lam):
            if isinstance(exp, Meta):
                dom, cod = u.fresh(), u.fresh()
                u.unify(exp, Arrow(dom, cod), t)
                exp = u.resolve(exp)
            if not isinstance(exp, Arrow):
                raise TypeCheckError(f"lambda {t} checked against non-arrow type {u.zonk(exp)}")
            if t.ty is not None:
                u.unify(t.ty, exp.dom, t)
            self.check(ctx.extend(t.var, exp.dom), t.body, exp.cod)
        elif isinstance(t, Pair):
            left, right = u.fresh(), u.fresh()
            u.unify(exp, Prod(left, right), t)
            self.check(ctx, t.fst, left)
            self.check(ctx, t.snd, right)
        elif isinstance(t, Ret):
            inner = u.as_monad(exp, t, "return")
            self.check(ctx, t.inner, inner)
        elif isinstance(t, Zero):
            u.as_monad(exp, t, "0")
        elif isinstance(t, Plus):
            u.as_monad(exp, t, "+")
            self.check(ctx, t.left, exp)
            self.check(ctx, t.right, exp)
        elif isinstance(t, Bind):
            out = u.as_monad(exp, t, "bind")
            a = u.fresh()
            self.check(ctx, t.action, Monad(a))
            self.check(ctx, t.cont, Arrow(a, Monad(out)))
        elif isinstance(t, App):
            a = self.infer(ctx, t.arg)
            self.check(ctx, t.fun, Arrow(a, exp))
        else:
            u.unify(self.infer(ctx, t), exp, t)

    def infer(self, ctx: Context, t: Term) -> Type:
        u = self.u
        if isinstance(t, Var):
            ty = ctx.lookup(t.name)
            if ty is None:
                raise TypeCheckError(f"unbound variable {t.name}")
            return ty
        if isinstance(t, Prim):
            return t.ty
        if isinstance(t, Proj):
            left, right = u.fresh(), u.fresh()
            self.check(ctx, t.of, Prod(left, right))
            return left if t.index == 1 else right
        if isinstance(t, App):
            f = u.resolve(self.infer(ctx, t.fun))
            if isinstance(f, Arrow):
                self.check(ctx, t.arg, f.dom)
                return f.cod
            cod = u.fresh()
            a = self.infer(ctx, t.arg)
            u.unify(f, Arrow(a, cod), t)
            return cod
        m = u.fresh()
        self.check(ctx, t, m)
        return m


def infer_target(ctx: Context, t: Term, expected: Optional[Type] = None) -> Type:
    """The type of a target term, checked against ``expected`` when given.

    Raises :class:`TypeCheckError` on ill-typed terms and on terms whose type
    is left undetermined (for instance a bare ``0`` with no expected type).
    """
    checker = _TargetChecker()
    if expected is None:
        ty = checker.infer(ctx, t)
    else:
        checker.check(ctx, t, expected)
        ty = expected
    ty = checker.u.zonk(ty)
    if _has_meta(ty):
        if _contains_zero(t):
            raise TypeCheckError(f"0 requires expected monadic type (in {t}, inferred {ty})")
        raise TypeCheckError(f"cannot determine the type of {t}: inferred {ty}")
    return ty


def check_target(ctx: Context, t: Term, expected: Type) -> None:
    infer_target(ctx, t, expected)


def well_typed_target(ctx: Context, t: Term, expected: Type) -> bool:
    try:
        infer_target(ctx, t, expected)
    except TypeCheckError:
        return False
    return True


# ---------------------------------------------------------------------------
# Soundness of the transformation


@dataclass
class SoundnessReport:
    ok: bool
    judgments: List[str]
    failure: Optional[str] = None

    def __bool__(self):
        return self.ok


def check_soundness(ctx: Context, t: Term, ty: Type, signature=None) -> SoundnessReport:
    """Check that the Dialectica image of ``ctx |- t : ty`` is well typed.

    Verifies ``{x_i : W(A_i)} |- t_witness : W(ty)`` and, for every ``x_j`` in
    the context, ``{x_i : W(A_i)} |- t_counter(x_j) : C(ty) -> M[C(A_j)]``.
    """
    from .transform import counter, counter_type, witness, witness_type

    if not is_source(t):
        return SoundnessReport(False, [], f"{t} is not a source term")
    try:
        check_source(ctx, t, ty)
    except TypeCheckError as exc:
        return SoundnessReport(False, [], f"source judgment fails: {exc}")
    wctx = ctx.map(witness_type)
    judgments = []
    obligations = [(witness(t, signature), witness_type(ty), "witness")]
    for x, a in ctx.items():
        obligations.append(
            (counter(t, x, signature), Arrow(counter_type(ty), Monad(counter_type(a))), f"counter {x}")
        )
    for term, expected, label in obligations:
        judgment = f"{wctx} |- {term} : {expected}"
        try:
            check_target(wctx, term, expected)
        except TypeCheckError as exc:
            return SoundnessReport(False, judgments, f"{label}: {judgment} fails: {exc}")
        judgments.append(judgment)
    return SoundnessReport(True, judgments)

"""The Dialectica program transformation.

Types are translated to witness and counter types::

    W(a) = a_W                    C(a) = a_C
    W(E -> F) = (W(E) -> W(F)) * (W(E) * C(F) -> M[C(E)])
    C(E -> F) = W(E) * C(F)

and terms to a witness ``t•`` and, for every variable ``y``, a counter ``t_y``::

    x•       = x
    (\\x.M)•  = <\\x. M•, \\π. (\\x. M_x) π^1 π^2>
    (P Q)•   = P•^1 Q•

    x_y      = \\π. [π]    if x = y,   \\π. 0 otherwise
    (\\x.M)_y = \\π. (\\x. M_y) π^1 π^2
    (P Q)_y  = \\π. P_y <Q•, π> + P•^2 <Q•, π> >>= Q_y

The counter takes its second argument uncurried (``C(E -> F)`` pairs a point
with a cotangent), so ``t_y`` has the shape of a transposed derivative.

Counters follow the variable convention: in ``(\\x.M)_y`` with ``x = y`` the
binder is renamed first, so the counter only sees free occurrences.  The
witness of ``\\x.M`` uses :func:`binder_counter`, the counter of the body
with respect to the binder itself.

For the ground type ``real`` both ``real_W`` and ``real_C`` are ``real``;
other ground types ``o`` map to the abstract grounds ``o_W`` and ``o_C``.
"""

from __future__ import annotations

from typing import Optional

from .primitives import DEFAULT_SIGNATURE, Signature, UnknownPrimitive, is_literal, partial_symbol
from .syntax import (
    REAL,
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
    Ret,
    Term,
    Type,
    Var,
    ZERO,
    apps,
    fresh,
    fst,
    snd,
    subst,
)

PI = "π"


# ---------------------------------------------------------------------------
# Types


def witness_type(t: Type) -> Type:
    if isinstance(t, Ground):
        return t if t == REAL else Ground(f"{t.name}_W")
    if isinstance(t, Arrow):
        we, wf = witness_type(t.dom), witness_type(t.cod)
        return Prod(Arrow(we, wf), Arrow(Prod(we, counter_type(t.cod)), Monad(counter_type(t.dom))))
    raise TypeError(f"not a simple type: {t}")


def counter_type(t: Type) -> Type:
    if isinstance(t, Ground):
        return t if t == REAL else Ground(f"{t.name}_C")
    if isinstance(t, Arrow):
        return Prod(witness_type(t.dom), counter_type(t.cod))
    raise TypeError(f"not a simple type: {t}")


# ---------------------------------------------------------------------------
# Primitives


def _arity(ty: Type) -> int:
    n = 0
    while isinstance(ty, Arrow):
        if ty.dom != REAL:
            raise UnknownPrimitive(f"primitive argument of type {ty.dom}, only real is supported")
        n, ty = n + 1, ty.cod
    if ty != REAL:
        raise UnknownPrimitive(f"primitive result of type {ty}, only real is supported")
    return n


def primitive_lens(prim: Prim, signature: Signature = DEFAULT_SIGNATURE) -> Term:
    """The witness of a primitive: its value paired with its transposed derivative.

    For ``f : real^n -> real`` (curried) the witness after ``k`` arguments
    ``a_1..a_k`` is ``<\\a. W_{k+1}, \\π. [mul (d_{k+1}f a_1..a_k π^1 ...) w]>``
    where ``π = <a_{k+1}, <a_{k+2}, ... <a_n, w>>>``.
    """
    if is_literal(prim.name):
        return prim
    if prim.name not in signature.prims:
        raise UnknownPrimitive(prim.name)
    n = signature[prim.name].arity
    if _arity(prim.ty) != n:
        raise UnknownPrimitive(f"{prim.name} declared at {prim.ty}, expected arity {n}")
    args = [f"a{i}" for i in range(1, n + 1)]
    mul = Prim("mul", Arrow(REAL, Arrow(REAL, REAL)))

    def build(k: int) -> Term:
        if k == n:
            return apps(prim, *(Var(a) for a in args))
        # π = <a_{k+1}, <..., <a_n, w>>>: unpack the point and the cotangent
        pi = Var(PI)
        rest = pi
        point = []
        for _ in range(k, n):
            point.append(fst(rest))
            rest = snd(rest)
        dk = Prim(partial_symbol(prim.name, k + 1), prim.ty)
        slope = apps(dk, *(Var(a) for a in args[:k]), *point)
        counter = Lam(PI, Ret(apps(mul, slope, rest)))
        return Pair(Lam(args[k], build(k + 1)), counter)

    return build(0)


# ---------------------------------------------------------------------------
# Terms


def witness(t: Term, signature: Optional[Signature] = None) -> Term:
    """The witness ``t•`` of a source term."""
    signature = signature or DEFAULT_SIGNATURE
    if isinstance(t, Var):
        return t
    if isinstance(t, Prim):
        return primitive_lens(t, signature)
    if isinstance(t, Lam):
        return Pair(Lam(t.var, witness(t.body, signature)), binder_counter(t, signature))
    if isinstance(t, App):
        return App(fst(witness(t.fun, signature)), witness(t.arg, signature))
    raise TypeError(f"{type(t).__name__} is not a source-calculus construct")


def binder_counter(t: Lam, signature: Optional[Signature] = None) -> Term:
    """``\\π. (\\x. M_x) π^1 π^2`` for ``t = \\x. M``: the second witness component."""
    pi = fresh(PI, t.free_vars)
    body = counter(t.body, t.var, signature)
    return Lam(pi, apps(Lam(t.var, body), fst(Var(pi)), snd(Var(pi))))


def counter(t: Term, y: str, signature: Optional[Signature] = None) -> Term:
    """The counter ``t_y`` of a source term with respect to variable ``y``."""
    signature = signature or DEFAULT_SIGNATURE
    if isinstance(t, Var):
        return Lam(PI, Ret(Var(PI)) if t.name == y else ZERO)
    if isinstance(t, Prim):
        primitive_lens(t, signature)  # rejects unknown symbols
        return Lam(PI, ZERO)
    if isinstance(t, Lam):
        if t.var == y:
            x = fresh(t.var, t.body.free_vars | {y})
            t = Lam(x, subst(t.body, t.var, Var(x)), t.ty)
        pi = fresh(PI, t.free_vars | {y})
        body = counter(t.body, y, signature)
        return Lam(pi, apps(Lam(t.var, body), fst(Var(pi)), snd(Var(pi))))
    if isinstance(t, App):
        pw, qw = witness(t.fun, signature), witness(t.arg, signature)
        pi = fresh(PI, t.free_vars | {y})
        arg = Pair(qw, Var(pi))
        left = App(counter(t.fun, y, signature), arg)
        right = Bind(App(snd(pw), arg), counter(t.arg, y, signature))
        return Lam(pi, Plus(left, right))
    raise TypeError(f"{type(t).__name__} is not a source-calculus construct")


def counters(t: Term, signature: Optional[Signature] = None) -> dict:
    """All counters ``{x: t_x}`` for the free variables of ``t``, sorted by name."""
    return {x: counter(t, x, signature) for x in sorted(t.free_vars)}


# ---------------------------------------------------------------------------
# Functor into Euclidean lenses over the target calculus


def functor_object(a: Type):
    """Image of a source type: the trivial bundle ``z : W(A) * M[C(A)] |- z^1 : W(A)``."""
    from .categories.terms import TermMap

    total = Prod(witness_type(a), Monad(counter_type(a)))
    return TermMap("z", total, witness_type(a), fst(Var("z")))


def functor_image(var: str, dom: Type, body: Term, signature: Optional[Signature] = None):
    """Image of the source arrow ``var : dom |- body`` as a Euclidean lens over terms.

    Forward part ``z : W(A) |- body• : W(B)``; backward leg
    ``z : W(A) * M[C(B)] |- <z^1, z^2 >>= body_z{z^1/z}> : W(A) * M[C(A)]``.
    """
    from .categories.lens import ELensArrow
    from .categories.terms import TermCategory, TermMap
    from .typecheck import Context, TypeCheckError, infer_source

    extra = body.free_vars - {var}
    if extra:
        raise TypeCheckError(f"arrow must have exactly one free variable, found {sorted(extra)}")
    cod = infer_source(Context([(var, dom)]), body)
    wa, wb = witness_type(dom), witness_type(cod)
    ca, cb = counter_type(dom), counter_type(cod)

    forward = TermMap(var, wa, wb, witness(body, signature))
    z = fresh("z", {var} | body.free_vars)
    zv = Var(z)
    count = subst(counter(body, var, signature), var, fst(zv))
    backward = TermMap(
        z,
        Prod(wa, Monad(cb)),
        Prod(wa, Monad(ca)),
        Pair(fst(zv), Bind(snd(zv), count)),
    )
    cat = TermCategory(signature or DEFAULT_SIGNATURE)
    return ELensArrow(cat, wa, Monad(ca), wb, Monad(cb), forward, backward)

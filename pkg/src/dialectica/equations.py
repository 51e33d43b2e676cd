"""Equational semantics of the target calculus, by normalization.

The equations (beta, eta, the monad laws, the commutative-monoid laws and
their compatibility with bind) are oriented as rewrite rules::

    (\\x. M) N              ->  M{N/x}
    <M, N>^1, <M, N>^2      ->  M, N
    \\x. M x                ->  M                (x not free in M)
    <M^1, M^2>             ->  M
    [M] >>= K              ->  K M
    (M >>= K) >>= L        ->  M >>= \\z. K z >>= L
    M >>= \\z. [z]          ->  M
    0 >>= K                ->  0
    (M + N) >>= K          ->  M >>= K + N >>= K
    M >>= \\z. 0            ->  0
    M >>= \\z. (K + L)      ->  M >>= \\z. K + M >>= \\z. L
    M + 0, 0 + M           ->  M

Sums are flattened, stripped of ``0`` and sorted by the printed form of their
alpha-canonical summands, which makes ``+`` associative and commutative on
normal forms.  Eta is used as a contraction, so normal forms are eta-short.

The rewrite system is sound but not complete for the theory; :func:`equal`
says so by answering ``UNKNOWN`` when normal forms differ but are blocked on
a bind over a neutral term.
"""

from __future__ import annotations

import enum
from typing import List

from .syntax import (
    App,
    Bind,
    Lam,
    Pair,
    Plus,
    Proj,
    Ret,
    Term,
    Var,
    Zero,
    ZERO,
    alpha_eq,
    canonical,
    children,
    fresh,
    subst,
)

DEFAULT_FUEL = 200_000


class NormalizationError(RuntimeError):
    pass


class Verdict(enum.Enum):
    EQUAL = "equal"
    UNEQUAL = "unequal_by_normal_forms"
    UNKNOWN = "unknown"

    def __str__(self):
        return self.value


def summands(t: Term) -> List[Term]:
    if isinstance(t, Plus):
        return summands(t.left) + summands(t.right)
    if isinstance(t, Zero):
        return []
    return [t]


def _order_key(t: Term) -> str:
    return str(canonical(t))


def make_sum(terms: List[Term]) -> Term:
    """Canonical sum: zeros dropped, summands sorted, nested to the left."""
    terms = sorted((s for t in terms for s in summands(t)), key=_order_key)
    if not terms:
        return ZERO
    result = terms[0]
    for t in terms[1:]:
        result = Plus(result, t)
    return result


class _Normalizer:
    def __init__(self, fuel: int):
        self.fuel = fuel

    def tick(self):
        self.fuel -= 1
        if self.fuel < 0:
            raise NormalizationError("normalization fuel exhausted (non-terminating term?)")

    def norm(self, t: Term) -> Term:
        self.tick()
        if isinstance(t, Lam):
            return self.lam(t.var, self.norm(t.body), t.ty)
        if isinstance(t, App):
            return self.apply(self.norm(t.fun), self.norm(t.arg))
        if isinstance(t, Pair):
            a, b = self.norm(t.fst), self.norm(t.snd)
            if (
                isinstance(a, Proj)
                and isinstance(b, Proj)
                and a.index == 1
                and b.index == 2
                and alpha_eq(a.of, b.of)
            ):
                return a.of
            return Pair(a, b)
        if isinstance(t, Proj):
            return self.project(t.index, self.norm(t.of))
        if isinstance(t, Ret):
            return Ret(self.norm(t.inner))
        if isinstance(t, Plus):
            return make_sum([self.norm(t.left), self.norm(t.right)])
        if isinstance(t, Bind):
            return self.bind(self.norm(t.action), self.norm(t.cont))
        return t

    def lam(self, var: str, body: Term, ty=None) -> Term:
        """``\\var. body`` for normal ``body``, eta-contracted when possible."""
        if (
            isinstance(body, App)
            and isinstance(body.arg, Var)
            and body.arg.name == var
            and var not in body.fun.free_vars
        ):
            return body.fun
        return Lam(var, body, ty)

    def project(self, index: int, t: Term) -> Term:
        if isinstance(t, Pair):
            return t.fst if index == 1 else t.snd
        return Proj(index, t)

    def apply(self, f: Term, a: Term) -> Term:
        """Normal form of ``f a`` for normal ``f`` and ``a``."""
        self.tick()
        if isinstance(f, Lam):
            return self.norm(subst(f.body, f.var, a))
        return App(f, a)

    def bind(self, m: Term, k: Term) -> Term:
        """Normal form of ``m >>= k`` for normal ``m`` and ``k``."""
        self.tick()
        if isinstance(m, Zero):
            return ZERO
        if isinstance(m, Plus):
            return make_sum([self.bind(s, k) for s in summands(m)])
        if isinstance(m, Ret):
            return self.apply(k, m.inner)
        if isinstance(k, Lam):
            if isinstance(k.body, Zero):
                return ZERO
            if isinstance(k.body, Plus):
                return make_sum([self.bind(m, self.lam(k.var, s, k.ty)) for s in summands(k.body)])
            if isinstance(k.body, Ret) and isinstance(k.body.inner, Var) and k.body.inner.name == k.var:
                return m
        if isinstance(m, Bind):
            # (m1 >>= k1) >>= k  ->  m1 >>= \z. k1 z >>= k
            z = fresh("z", m.cont.free_vars | k.free_vars)
            inner = self.bind(self.apply(m.cont, Var(z)), k)
            cont = self.lam(z, inner)
            return self.bind(m.action, cont)
        return Bind(m, k)


def normalize(t: Term, fuel: int = DEFAULT_FUEL) -> Term:
    """Normal form of ``t`` under the oriented equations above."""
    return _Normalizer(fuel).norm(t)


def _has_bind(t: Term) -> bool:
    return isinstance(t, Bind) or any(_has_bind(c) for c in children(t))


def equal(a: Term, b: Term, ctx=None, ty=None, fuel: int = DEFAULT_FUEL) -> Verdict:
    """Decide ``a = b`` as far as normalization allows.

    ``EQUAL`` is sound.  ``UNKNOWN`` means the normal forms differ but contain
    binds blocked on neutral terms, where the theory may identify more than
    the rewrite rules do.  ``UNEQUAL`` is reported for distinct bind-free
    normal forms and is advisory.  When ``ctx`` and ``ty`` are given both
    terms are first checked at ``ty``.
    """
    if ty is not None:
        from .typecheck import EMPTY, check_target

        check_target(ctx or EMPTY, a, ty)
        check_target(ctx or EMPTY, b, ty)
    na, nb = normalize(a, fuel), normalize(b, fuel)
    if alpha_eq(na, nb):
        return Verdict.EQUAL
    if _has_bind(na) or _has_bind(nb):
        return Verdict.UNKNOWN
    return Verdict.UNEQUAL

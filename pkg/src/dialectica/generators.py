"""Random instances for the property suites.

Everything takes an explicit :class:`random.Random`, so a seed replays a run.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import List, Optional, Tuple

from .categories.dial import DialArrow, DialObject, Subobject, dial_check
from .categories.finset import FINSET, FinSet, FinSetMap, product
from .categories.lens import ELensArrow
from .categories.poly import Poly, PolyMap
from .primitives import DEFAULT_SIGNATURE, Signature
from .syntax import REAL, App, Arrow, Lam, Prim, Term, Type, Var, arrows, fresh, subst

R = REAL
R2R = arrows(R, R)
POOL: Tuple[Type, ...] = (R, R2R, arrows(R, R, R), arrows(R2R, R), arrows(R2R, R, R))
LITERALS = ("0.5", "1", "1.5", "2")
NAMES = ("x", "y", "u", "v", "w")


class TermGenerator:
    """Random well-typed source terms over ``real`` and the default primitives.

    ``max_depth`` bounds the tree depth (a leaf has depth 1) and
    ``max_binders`` the number of distinct variables in scope; once the bound
    is hit a new binder shadows a variable of the context instead.
    """

    def __init__(
        self,
        rng: random.Random,
        max_depth: int = 6,
        max_binders: int = 3,
        signature: Signature = DEFAULT_SIGNATURE,
        redex_rate: float = 0.15,
    ):
        self.rng = rng
        self.max_depth = max_depth
        self.max_binders = max_binders
        self.signature = signature
        self.redex_rate = redex_rate
        self._prims = {}
        for name, impl in sorted(signature.prims.items()):
            self._prims.setdefault(impl.type, []).append(Prim(name, impl.type))

    # -- helpers

    def _binder(self, ctx: List[Tuple[str, Type]]) -> str:
        names = [n for n, _ in ctx]
        if len(set(names)) >= self.max_binders:
            return self.rng.choice(names)
        return fresh(self.rng.choice(NAMES), set(names))

    def _vars(self, ctx, ty):
        seen, out = set(), []
        for n, t in reversed(ctx):
            if n not in seen:
                seen.add(n)
                if t == ty:
                    out.append(Var(n))
        return out

    def _leaf(self, ctx, ty) -> Optional[Term]:
        options = self._vars(ctx, ty) + list(self._prims.get(ty, []))
        if ty == R:
            options.append(Prim(self.rng.choice(LITERALS), R))
        return self.rng.choice(options) if options else None

    def _lam(self, ctx, ty: Arrow, budget: int) -> Term:
        x = self._binder(ctx)
        body = self.term(ctx + [(x, ty.dom)], ty.cod, budget - 1)
        return Lam(x, body, ty.dom)

    # -- generation

    def need(self, ctx, ty: Type) -> int:
        """A depth at which a term of type ``ty`` always exists.

        Variables are ignored on purpose: shadowing can remove them from scope.
        """
        if ty == R or ty in self._prims:
            return 1
        if isinstance(ty, Arrow):
            return 1 + self.need(ctx, ty.cod)
        raise ValueError(f"no terms of type {ty}")

    def term(self, ctx: List[Tuple[str, Type]], ty: Type, budget: Optional[int] = None) -> Term:
        """A term of type ``ty`` in ``ctx`` of depth at most ``budget``."""
        budget = self.max_depth if budget is None else budget
        if budget < self.need(ctx, ty):
            raise ValueError(f"depth {budget} is too small for a term of type {ty}")
        rng = self.rng
        leaf = self._leaf(ctx, ty)
        options = []
        if leaf is not None:
            options.append(("leaf", 1))
        if isinstance(ty, Arrow) and budget >= 1 + self.need(ctx + [("_", ty.dom)], ty.cod):
            options.append(("lam", 3))
        if ty == R and budget >= 3:
            options.append(("prim", 5))
        elif ty == R and budget >= 2:
            options.append(("prim1", 3))
        for a in (R, R2R):
            fun_ty = Arrow(a, ty)
            if budget >= 1 + max(self.need(ctx, fun_ty), self.need(ctx, a)):
                options.append((("app", a), 2 if a == R else 1))
                if budget >= 2 + max(self.need(ctx + [("_", a)], ty), self.need(ctx, a)):
                    options.append((("redex", a), 6 * self.redex_rate))
        kinds, weights = zip(*options)
        kind = rng.choices(kinds, weights)[0]
        if kind == "leaf":
            return leaf
        if kind == "lam":
            return self._lam(ctx, ty, budget)
        if kind in ("prim", "prim1"):
            prims = [p for t, ps in self._prims.items() for p in ps]
            if kind == "prim1":
                prims = [p for p in prims if not isinstance(p.ty.cod, Arrow)]
            head: Term = rng.choice(prims)
            pty = head.ty
            args = []
            while isinstance(pty, Arrow):
                args.append(pty.dom)
                pty = pty.cod
            # the k-th argument sits at depth 1 + (number of later arguments)
            for k, a in enumerate(args):
                head = App(head, self.term(ctx, a, budget - (len(args) - k)))
            return head
        tag, a = kind
        if tag == "redex":
            fun = self._lam(ctx, Arrow(a, ty), budget - 1)
        else:
            fun = self.term(ctx, Arrow(a, ty), budget - 1)
        return App(fun, self.term(ctx, a, budget - 1))

    def context(self, size: Optional[int] = None) -> List[Tuple[str, Type]]:
        size = self.rng.randint(0, self.max_binders) if size is None else size
        names = list(NAMES[:size])
        return [(n, self.rng.choice(POOL)) for n in names]

    def open_term(self) -> Tuple[List[Tuple[str, Type]], Term, Type]:
        """``(ctx, t, ty)`` with ``ctx |- t : ty``."""
        ctx = self.context()
        ty = self.rng.choice(POOL)
        return ctx, self.term(ctx, ty, self.max_depth), ty

    def real_function(self, n: int) -> Term:
        """A closed term of type ``real -> ... -> real`` with ``n`` arguments."""
        xs = [f"x{i}" for i in range(1, n + 1)]
        ctx = [(x, R) for x in xs]
        saved = self.max_binders
        self.max_binders = max(saved, n + 1)
        try:
            for _ in range(100):
                body = self.term(ctx, R, max(2, self.max_depth - n))
                if any(x in body.free_vars for x in xs):
                    break
        finally:
            self.max_binders = saved
        for x in reversed(xs):
            body = Lam(x, body, R)
        return body


# ---------------------------------------------------------------------------
# Beta reduction on source terms


def beta_step(t: Term) -> Optional[Term]:
    """One leftmost-outermost beta step, or ``None`` for a normal form."""
    if isinstance(t, App):
        if isinstance(t.fun, Lam):
            return subst(t.fun.body, t.fun.var, t.arg)
        f = beta_step(t.fun)
        if f is not None:
            return App(f, t.arg)
        a = beta_step(t.arg)
        return None if a is None else App(t.fun, a)
    if isinstance(t, Lam):
        b = beta_step(t.body)
        return None if b is None else Lam(t.var, b, t.ty)
    return None


def has_redex(t: Term) -> bool:
    return beta_step(t) is not None


# ---------------------------------------------------------------------------
# Finite sets


def random_finset(rng: random.Random, lo: int = 1, hi: int = 5) -> FinSet:
    return FinSet(rng.randint(lo, hi))


def random_map(rng: random.Random, dom: FinSet, cod: FinSet) -> FinSetMap:
    return FinSetMap(dom, cod, tuple(rng.randrange(cod.size) for _ in range(dom.size)))


def random_elens(
    rng: random.Random, A: FinSet, X: FinSet, B: FinSet, Y: FinSet
) -> ELensArrow:
    """A random E-lens: the backward map keeps the base point, ``F;pi_1 = pi_1``."""
    f = random_map(rng, A, B)
    big_x = product(A, X)
    table = []
    for k in range(A.size * Y.size):
        a = k // Y.size
        table.append(a * X.size + rng.randrange(X.size))
    return ELensArrow(FINSET, A, X, B, Y, f, FinSetMap(product(A, Y), big_x, tuple(table)))


def random_subobject(rng: random.Random, A: FinSet, X: FinSet, density: float = 0.6) -> Subobject:
    return Subobject(A, X, tuple(rng.random() < density for _ in range(A.size * X.size)))


def random_dial_object(rng: random.Random, hi: int = 4, full: bool = False) -> DialObject:
    A, X = random_finset(rng, 1, hi), random_finset(rng, 1, hi)
    return DialObject(A, X, None if full else random_subobject(rng, A, X))


def random_dial_arrow(
    rng: random.Random, source: DialObject, target: DialObject, attempts: int = 200
) -> Optional[DialArrow]:
    """A random valid Dialectica arrow, or ``None`` if none was found.

    ``f`` is drawn uniformly; each value ``F(a, y)`` is then redrawn until the
    condition holds at ``(a, y)``, which gives the uniform distribution over
    the valid ``F`` for that ``f``.  When some point admits no value the
    forward map is rejected and redrawn.
    """
    ax = product(source.A, target.X)
    for _ in range(attempts):
        f = random_map(rng, source.A, target.A)
        table = []
        for k in range(ax.size):
            a, y = divmod(k, target.X.size)
            if target.holds(f(a), y):
                table.append(rng.randrange(source.X.size))
                continue
            allowed = [x for x in range(source.X.size) if not source.holds(a, x)]
            if not allowed:
                break
            while True:
                x = rng.randrange(source.X.size)
                if x in allowed:
                    table.append(x)
                    break
        else:
            d = DialArrow(FINSET, source, target, f, FinSetMap(ax, source.X, tuple(table)))
            assert dial_check(d)
            return d
    return None


# ---------------------------------------------------------------------------
# Polynomials


def random_rational(rng: random.Random, bound: int = 5) -> Fraction:
    return Fraction(rng.randint(-bound, bound), rng.randint(1, bound))


def random_poly(rng: random.Random, nvars: int, max_degree: int = 3, max_terms: int = 4) -> Poly:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        total = rng.randint(0, max_degree)
        mono = [0] * nvars
        for _ in range(total if nvars else 0):
            mono[rng.randrange(nvars)] += 1
        terms[tuple(mono)] = random_rational(rng)
    return Poly(nvars, terms)


def random_poly_map(rng: random.Random, dom: int, cod: int, max_degree: int = 3) -> PolyMap:
    return PolyMap(dom, cod, tuple(random_poly(rng, dom, max_degree) for _ in range(cod)))


def random_point(rng: random.Random, n: int, lo: float = -2.0, hi: float = 2.0) -> List[float]:
    return [rng.uniform(lo, hi) for _ in range(n)]


def random_rational_point(rng: random.Random, n: int) -> List[Fraction]:
    return [random_rational(rng) for _ in range(n)]

"""The target calculus as a Cartesian category.

An arrow ``A -> B`` is a term with one free variable, ``z : A |- t : B``.
Composition is substitution.  Two arrows are equal when their normal forms
coincide, or failing that when they agree on random inputs: the rewrite
system is incomplete for bind, so some true equations need the extensional
check.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ..equations import Verdict, equal as terms_equal
from ..primitives import DEFAULT_SIGNATURE, Signature
from ..syntax import Lam, Pair, Prod, Term, Type, Var, fst, snd, subst


@dataclass(frozen=True)
class TermMap:
    var: str
    dom: Type
    cod: Type
    body: Term

    def __post_init__(self):
        extra = self.body.free_vars - {self.var}
        if extra:
            raise ValueError(f"term map has free variables besides {self.var}: {sorted(extra)}")

    def as_lambda(self) -> Lam:
        return Lam(self.var, self.body, self.dom)

    def __str__(self):
        return f"{self.var} : {self.dom} |- {self.body} : {self.cod}"


class TermCategory:
    def __init__(self, signature: Signature = DEFAULT_SIGNATURE, trials: int = 10, tol: float = 1e-9, seed: int = 0):
        self.signature = signature
        self.trials = trials
        self.tol = tol
        self.seed = seed

    def identity(self, a: Type) -> TermMap:
        return TermMap("z", a, a, Var("z"))

    def compose(self, f: TermMap, g: TermMap) -> TermMap:
        if f.cod != g.dom:
            raise ValueError(f"cannot compose {f.dom} -> {f.cod} with {g.dom} -> {g.cod}")
        return TermMap(f.var, f.dom, g.cod, subst(g.body, g.var, f.body))

    def product(self, a: Type, b: Type) -> Type:
        return Prod(a, b)

    def proj1(self, a: Type, b: Type) -> TermMap:
        return TermMap("z", Prod(a, b), a, fst(Var("z")))

    def proj2(self, a: Type, b: Type) -> TermMap:
        return TermMap("z", Prod(a, b), b, snd(Var("z")))

    def pair(self, f: TermMap, g: TermMap) -> TermMap:
        if f.dom != g.dom:
            raise ValueError("pairing maps with different domains")
        return TermMap(f.var, f.dom, Prod(f.cod, g.cod), Pair(f.body, subst(g.body, g.var, Var(f.var))))

    def dom(self, f: TermMap) -> Type:
        return f.dom

    def cod(self, f: TermMap) -> Type:
        return f.cod

    def equal(self, f: TermMap, g: TermMap) -> bool:
        if f.dom != g.dom or f.cod != g.cod:
            return False
        if terms_equal(f.as_lambda(), g.as_lambda()) is Verdict.EQUAL:
            return True
        return self.pointwise_equal(f, g)

    def pointwise_equal(self, f: TermMap, g: TermMap) -> bool:
        from ..numeric import EvalError, eval_closed, random_value, values_close

        rng = random.Random(self.seed)
        try:
            for _ in range(self.trials):
                x = random_value(f.dom, rng)
                u = eval_closed(f.body, {f.var: x}, self.signature)
                v = eval_closed(g.body, {g.var: x}, self.signature)
                if not values_close(u, v, f.cod, rng, self.tol):
                    return False
        except EvalError:
            return False
        return True

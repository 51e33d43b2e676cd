"""Numeric model of the target calculus and gradient extraction.

Denotations: ``real`` is a Python float, ``A * B`` a 2-tuple, arrows are
:class:`Closure` or :class:`PrimValue`, and ``M[A]`` is a :class:`Bag`, a
finite multiset of values.  ``0`` is the empty bag, ``+`` multiset union,
``[v]`` a singleton and ``m >>= k`` the union of ``k`` over the elements of
``m``.  Bags are summed (:func:`collapse`) only when a gradient is read off.

The oracles :func:`gradient_forward` (dual numbers) and
:func:`gradient_fd` (central differences) evaluate *source* terms directly
and never go through the Dialectica transformation.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Optional, Sequence, Tuple

from .primitives import DEFAULT_SIGNATURE, Signature, is_literal
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
    Proj,
    Ret,
    Term,
    Type,
    Var,
    Zero,
)


class EvalError(RuntimeError):
    pass


# ---------------------------------------------------------------------------
# Values


@dataclass(frozen=True)
class Bag:
    """Finite multiset; element order carries no meaning."""

    items: Tuple[Any, ...] = ()

    def __len__(self):
        return len(self.items)

    def __iter__(self):
        return iter(self.items)


EMPTY_BAG = Bag()


@dataclass(frozen=True)
class Closure:
    env: Dict[str, Any]
    var: str
    body: Term
    machine: "Evaluator"

    def __call__(self, v):
        return self.machine.eval(self.body, {**self.env, self.var: v})


@dataclass(frozen=True)
class PrimValue:
    name: str
    arity: int
    fn: Callable
    args: Tuple = ()

    def __call__(self, v):
        args = self.args + (v,)
        if len(args) == self.arity:
            if not all(isinstance(a, float) for a in args):
                raise EvalError(f"primitive {self.name} applied to non-real {args}")
            return float(self.fn(*args))
        return PrimValue(self.name, self.arity, self.fn, args)


def apply(f, v):
    if isinstance(f, (Closure, PrimValue)) or callable(f):
        return f(v)
    raise EvalError(f"cannot apply non-function value {f!r}")


# ---------------------------------------------------------------------------
# Evaluation


class Evaluator:
    def __init__(self, signature: Signature = DEFAULT_SIGNATURE):
        self.signature = signature

    def eval(self, t: Term, env: Dict[str, Any]):
        if isinstance(t, Var):
            try:
                return env[t.name]
            except KeyError:
                raise EvalError(f"unbound variable {t.name}") from None
        if isinstance(t, Lam):
            return Closure(env, t.var, t.body, self)
        if isinstance(t, App):
            return apply(self.eval(t.fun, env), self.eval(t.arg, env))
        if isinstance(t, Prim):
            arity, fn = self.signature.evaluator(t.name)
            return float(fn()) if arity == 0 else PrimValue(t.name, arity, fn)
        if isinstance(t, Pair):
            return (self.eval(t.fst, env), self.eval(t.snd, env))
        if isinstance(t, Proj):
            v = self.eval(t.of, env)
            if not isinstance(v, tuple):
                raise EvalError(f"projection of non-pair {v!r}")
            return v[t.index - 1]
        if isinstance(t, Ret):
            return Bag((self.eval(t.inner, env),))
        if isinstance(t, Zero):
            return EMPTY_BAG
        if isinstance(t, Plus):
            a, b = self.eval(t.left, env), self.eval(t.right, env)
            if not (isinstance(a, Bag) and isinstance(b, Bag)):
                raise EvalError("'+' on non-monadic values")
            return Bag(a.items + b.items)
        if isinstance(t, Bind):
            m = self.eval(t.action, env)
            if not isinstance(m, Bag):
                raise EvalError(f"bind on non-monadic value {m!r}")
            k = self.eval(t.cont, env)
            out: List[Any] = []
            for item in m.items:
                r = apply(k, item)
                if not isinstance(r, Bag):
                    raise EvalError("bind continuation returned a non-monadic value")
                out.extend(r.items)
            return Bag(tuple(out))
        raise EvalError(f"cannot evaluate {t!r}")


def eval_closed(t: Term, env: Optional[Dict[str, Any]] = None, signature: Signature = DEFAULT_SIGNATURE):
    """Evaluate a target term in an environment of values."""
    return Evaluator(signature).eval(t, dict(env or {}))


def _shape(v):
    if isinstance(v, float):
        return "real"
    if isinstance(v, tuple):
        return tuple(_shape(x) for x in v)
    raise EvalError(f"cannot collapse a bag containing {v!r}")


def _zero_like(shape):
    if shape == "real":
        return 0.0
    return tuple(_zero_like(s) for s in shape)


def collapse(v: Bag, shape=None):
    """Sum a bag of reals (or of congruent real tuples) componentwise.

    The sum is correctly rounded (``math.fsum``), hence independent of the
    order of the elements.  The empty bag collapses to ``0.0``, or to the zero
    of ``shape`` when a shape is given.
    """
    if not isinstance(v, Bag):
        raise EvalError(f"collapse expects a bag, got {v!r}")
    if not v.items:
        return 0.0 if shape is None else _zero_like(shape)
    shapes = {_shape(x) for x in v.items}
    if len(shapes) != 1:
        raise EvalError(f"incongruent bag elements: {sorted(map(str, shapes))}")
    shape = shapes.pop()
    return _sum_shape(list(v.items), shape)


def _sum_shape(items, shape):
    if shape == "real":
        return math.fsum(items)
    return tuple(_sum_shape([x[i] for x in items], s) for i, s in enumerate(shape))


# ---------------------------------------------------------------------------
# Gradients through the Dialectica transformation


def real_arity(ty: Type) -> int:
    """``n`` for ``ty = real -> ... -> real`` with ``n`` arguments."""
    n = 0
    while isinstance(ty, Arrow):
        if ty.dom != REAL:
            raise TypeError(f"expected a function of reals, found argument type {ty.dom}")
        n, ty = n + 1, ty.cod
    if ty != REAL:
        raise TypeError(f"expected a real result, found {ty}")
    return n


def _arity_of(f: Term) -> int:
    from .typecheck import EMPTY, infer_source

    return real_arity(infer_source(EMPTY, f))


def _nest(values: Sequence):
    result = values[-1]
    for v in reversed(values[:-1]):
        result = (v, result)
    return result


def value_and_gradient_dialectica(
    f: Term, point: Sequence[float], signature: Signature = DEFAULT_SIGNATURE, cotangent: float = 1.0
) -> Tuple[float, Tuple[float, ...]]:
    """Value and gradient of a closed ``f : real^n -> real`` read off its witness.

    The witness of ``f`` is evaluated once.  After feeding ``a_1..a_{j-1}``
    to first components, the second component applied to
    ``<a_j, <..., <a_n, cotangent>>>`` is a bag whose sum is the ``j``-th
    partial derivative scaled by ``cotangent``.
    """
    from .transform import witness

    n = _arity_of(f)
    point = [float(a) for a in point]
    if len(point) != n:
        raise ValueError(f"{n}-ary function evaluated at a point of dimension {len(point)}")
    w = eval_closed(witness(f, signature), signature=signature)
    if n == 0:
        return w, ()
    grads = []
    for j in range(n):
        grads.append(collapse(apply(w[1], _nest(point[j:] + [float(cotangent)]))))
        w = apply(w[0], point[j])
    return w, tuple(grads)


def gradient_dialectica(f: Term, point: Sequence[float], signature: Signature = DEFAULT_SIGNATURE):
    return value_and_gradient_dialectica(f, point, signature)[1]


def counter_gradient(
    t: Term,
    names: Sequence[str],
    point: Sequence[float],
    cotangent: float = 1.0,
    signature: Signature = DEFAULT_SIGNATURE,
) -> Tuple[float, ...]:
    """Gradient of an open real-valued term through its counters ``t_x``."""
    from .transform import counter

    env = {x: float(a) for x, a in zip(names, point)}
    return tuple(
        collapse(apply(eval_closed(counter(t, x, signature), env, signature), float(cotangent)))
        for x in names
    )


# ---------------------------------------------------------------------------
# Oracles on source terms


@dataclass(frozen=True)
class Dual:
    val: float
    tan: float = 0.0


def _source_eval(t: Term, env: dict, lift: Callable, prim: Callable):
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvalError(f"unbound variable {t.name}") from None
    if isinstance(t, Lam):
        return lambda v: _source_eval(t.body, {**env, t.var: v}, lift, prim)
    if isinstance(t, App):
        return _source_eval(t.fun, env, lift, prim)(_source_eval(t.arg, env, lift, prim))
    if isinstance(t, Prim):
        return prim(t.name)
    raise EvalError(f"{type(t).__name__} is not a source-calculus construct")


def _curry(n: int, fn: Callable, args=()):
    if len(args) == n:
        return fn(*args)
    return lambda v: _curry(n, fn, args + (v,))


def eval_source(t: Term, env: Optional[dict] = None, signature: Signature = DEFAULT_SIGNATURE):
    """Direct float evaluation of a source term."""

    def prim(name):
        if is_literal(name):
            return float(name)
        impl = signature[name]
        return _curry(impl.arity, lambda *a: float(impl.fn(*a)))

    return _source_eval(t, dict(env or {}), float, prim)


def eval_source_dual(t: Term, env: Optional[dict] = None, signature: Signature = DEFAULT_SIGNATURE):
    """Dual-number evaluation of a source term: forward-mode tangents."""

    def prim(name):
        if is_literal(name):
            return Dual(float(name), 0.0)
        impl = signature[name]

        def run(*args):
            vals = [a.val for a in args]
            tan = math.fsum(d(*vals) * a.tan for d, a in zip(impl.partials, args))
            return Dual(float(impl.fn(*vals)), tan)

        return _curry(impl.arity, run)

    return _source_eval(t, dict(env or {}), Dual, prim)


def _apply_all(f, args):
    for a in args:
        f = f(a)
    return f


def gradient_forward(f: Term, point: Sequence[float], signature: Signature = DEFAULT_SIGNATURE):
    """Forward-mode gradient, one dual-number pass per coordinate."""
    n = _arity_of(f)
    fv = eval_source_dual(f, signature=signature)
    grads = []
    for i in range(n):
        args = [Dual(float(a), 1.0 if k == i else 0.0) for k, a in enumerate(point)]
        grads.append(_apply_all(fv, args).tan)
    return tuple(grads)


def gradient_fd(f: Term, point: Sequence[float], h: float = 1e-5, signature: Signature = DEFAULT_SIGNATURE):
    """Central finite differences ``(f(a + h e_i) - f(a - h e_i)) / 2h``."""
    if h <= 0:
        raise ValueError("step must be positive")
    n = _arity_of(f)
    fv = eval_source(f, signature=signature)
    grads = []
    for i in range(n):
        up = [float(a) + (h if k == i else 0.0) for k, a in enumerate(point)]
        down = [float(a) - (h if k == i else 0.0) for k, a in enumerate(point)]
        grads.append((_apply_all(fv, up) - _apply_all(fv, down)) / (2 * h))
    return tuple(grads)


def value_source(f: Term, point: Sequence[float], signature: Signature = DEFAULT_SIGNATURE) -> float:
    return _apply_all(eval_source(f, signature=signature), [float(a) for a in point])


def relative_error(a: float, b: float) -> float:
    """``|a - b| / max(|a|, |b|, 1)``: relative above 1, absolute below."""
    return abs(a - b) / max(abs(a), abs(b), 1.0)


def max_relative_error(xs: Sequence[float], ys: Sequence[float]) -> float:
    return max((relative_error(a, b) for a, b in zip(xs, ys)), default=0.0)


# ---------------------------------------------------------------------------
# Random values and extensional comparison


class SmoothFunction:
    """A deterministic smooth random function value, used as a test input.

    Its outputs are affine in a feature vector extracted from its inputs, so
    inputs that agree up to rounding give outputs that agree up to rounding.
    """

    def __init__(self, ty: Arrow, seed: int, features: Tuple[float, ...] = ()):
        self.ty = ty
        self.seed = seed
        self.features = features

    def __call__(self, v):
        feats = self.features + tuple(fingerprint(v, self.ty.dom, self.seed))
        return _affine_value(self.ty.cod, self.seed * 31 + len(feats), feats)


def _affine_value(ty: Type, seed: int, feats: Tuple[float, ...]):
    rng = random.Random(seed)
    if ty == REAL:
        return rng.uniform(-1, 1) + math.fsum(rng.uniform(-1, 1) * x for x in feats)
    if isinstance(ty, Prod):
        return (_affine_value(ty.left, rng.randrange(2**31), feats), _affine_value(ty.right, rng.randrange(2**31), feats))
    if isinstance(ty, Monad):
        k = rng.randrange(3)
        return Bag(tuple(_affine_value(ty.inner, rng.randrange(2**31), feats) for _ in range(k)))
    if isinstance(ty, Arrow):
        return SmoothFunction(ty, rng.randrange(2**31), feats)
    raise EvalError(f"no numeric values at type {ty}")


def random_value(ty: Type, rng: random.Random, lo: float = -2.0, hi: float = 2.0):
    """A random denotation of a target type whose grounds are all ``real``."""
    if ty == REAL:
        return rng.uniform(lo, hi)
    if isinstance(ty, Ground):
        raise EvalError(f"no numeric values at abstract ground type {ty}")
    if isinstance(ty, Prod):
        return (random_value(ty.left, rng, lo, hi), random_value(ty.right, rng, lo, hi))
    if isinstance(ty, Monad):
        return Bag(tuple(random_value(ty.inner, rng, lo, hi) for _ in range(rng.randrange(3))))
    if isinstance(ty, Arrow):
        return SmoothFunction(ty, rng.randrange(2**31))
    raise EvalError(f"no numeric values at type {ty}")


def fingerprint(v, ty: Type, seed: int = 0) -> List[float]:
    """Real features of a value: reals, tuple parts, bag sums, probed functions."""
    if ty == REAL:
        return [float(v)]
    if isinstance(ty, Prod):
        return fingerprint(v[0], ty.left, seed) + fingerprint(v[1], ty.right, seed + 1)
    if isinstance(ty, Monad):
        parts = [fingerprint(x, ty.inner, seed) for x in v.items]
        width = len(_probe_width(ty.inner, seed))
        return [float(len(parts))] + [math.fsum(p[i] for p in parts) for i in range(width)]
    if isinstance(ty, Arrow):
        probe = random_value(ty.dom, random.Random(seed + 7))
        return fingerprint(apply(v, probe), ty.cod, seed + 2)
    raise EvalError(f"no numeric values at type {ty}")


def _probe_width(ty: Type, seed: int) -> List[float]:
    return fingerprint(random_value(ty, random.Random(seed + 11)), ty, seed)


def values_close(u, v, ty: Type, rng: random.Random, tol: float = 1e-9, probes: int = 3) -> bool:
    """Extensional comparison at ``ty``.

    Reals agree up to :func:`relative_error` ``<= tol``; functions are compared
    on ``probes`` random arguments; bags must agree as multisets, elements
    being matched greedily up to ``tol``.
    """
    if ty == REAL:
        return relative_error(u, v) <= tol
    if isinstance(ty, Prod):
        return values_close(u[0], v[0], ty.left, rng, tol, probes) and values_close(
            u[1], v[1], ty.right, rng, tol, probes
        )
    if isinstance(ty, Arrow):
        for _ in range(probes):
            x = random_value(ty.dom, rng)
            if not values_close(apply(u, x), apply(v, x), ty.cod, rng, tol, probes):
                return False
        return True
    if isinstance(ty, Monad):
        if len(u.items) != len(v.items):
            return False
        seed = rng.randrange(2**31)
        left = sorted((fingerprint(x, ty.inner, seed), i) for i, x in enumerate(u.items))
        right = [(fingerprint(x, ty.inner, seed), i) for i, x in enumerate(v.items)]
        for fp, _ in left:
            match = next(
                (k for k, (g, _) in enumerate(right) if all(relative_error(a, b) <= tol for a, b in zip(fp, g))),
                None,
            )
            if match is None:
                return False
            right.pop(match)
        return True
    raise EvalError(f"cannot compare values at type {ty}")

"""Property suites over random instances, shared by the CLI and the tests.

Each ``run_*`` function returns a :class:`SuiteResult`; a failing case is
kept as a serializable counterexample.  Seeds make every run replayable.
"""

from __future__ import annotations

import random
import time
from dataclasses import asdict, dataclass
from typing import Any, Callable, Dict, List, Optional

from .categories.dial import G, G_inv, DialArrow, DialObject, dial_check, dial_compose, dial_identity
from .categories.finset import FINSET, product
from .categories.lens import elens_identity
from .categories.poly import POLY, T_star, D_functor, poly_reverse_diff
from .equations import Verdict, equal
from .generators import (
    POOL,
    TermGenerator,
    beta_step,
    random_dial_arrow,
    random_dial_object,
    random_elens,
    random_finset,
    random_map,
    random_point,
    random_poly_map,
)
from .numeric import (
    EvalError,
    counter_gradient,
    eval_closed,
    gradient_dialectica,
    gradient_fd,
    gradient_forward,
    max_relative_error,
    random_value,
    values_close,
)
from .printing import pretty
from .syntax import Arrow, Lam, Monad, Var, subst
from .transform import counter, counter_type, functor_image, witness, witness_type
from .typecheck import Context, check_soundness

TOL_AD = 1e-9
TOL_FD = 1e-4
TOL_LINEAR = 1e-12
TOL_POINTWISE = 1e-9


@dataclass
class SuiteResult:
    name: str
    passed: bool
    cases: int
    seconds: float = 0.0
    metric: Optional[float] = None
    detail: str = ""
    counterexample: Optional[Dict[str, Any]] = None

    def as_record(self) -> Dict[str, Any]:
        return asdict(self)

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        metric = "" if self.metric is None else f" metric={self.metric:.3g}"
        return f"{status} {self.name}: {self.cases} cases in {self.seconds:.2f}s{metric} {self.detail}".rstrip()


def _timed(fn: Callable[..., SuiteResult]) -> Callable[..., SuiteResult]:
    def run(*args, **kwargs) -> SuiteResult:
        start = time.perf_counter()
        result = fn(*args, **kwargs)
        result.seconds = time.perf_counter() - start
        return result

    run.__name__ = fn.__name__
    run.__doc__ = fn.__doc__
    return run


def _ctx_record(ctx) -> List[List[str]]:
    return [[n, str(t)] for n, t in ctx]


# ---------------------------------------------------------------------------
# Transformation suites


@_timed
def run_soundness(seed: int = 0, count: int = 500, max_depth: int = 6, max_binders: int = 3) -> SuiteResult:
    """Random well-typed terms: the witness and every counter typecheck."""
    gen = TermGenerator(random.Random(seed), max_depth=max_depth, max_binders=max_binders)
    for i in range(count):
        ctx, t, ty = gen.open_term()
        report = check_soundness(Context(ctx), t, ty)
        if not report.ok:
            return SuiteResult(
                "typing soundness",
                False,
                i + 1,
                detail=report.failure or "",
                counterexample={"context": _ctx_record(ctx), "term": pretty(t), "type": str(ty)},
            )
    return SuiteResult("typing soundness", True, count)


@_timed
def run_gradients(
    seed: int = 0,
    count: int = 100,
    points: int = 10,
    max_arity: int = 4,
    tol_ad: float = TOL_AD,
    tol_fd: float = TOL_FD,
    fd_floor: float = 1e-3,
) -> SuiteResult:
    """Gradients read off the witness against dual numbers and finite differences."""
    rng = random.Random(seed)
    gen = TermGenerator(rng)
    worst_ad = worst_fd = 0.0
    fd_checked = 0
    for i in range(count):
        n = rng.randint(1, max_arity)
        f = gen.real_function(n)
        for _ in range(points):
            p = random_point(rng, n)
            rev = gradient_dialectica(f, p)
            fwd = gradient_forward(f, p)
            err = max_relative_error(rev, fwd)
            worst_ad = max(worst_ad, err)
            bad = None
            if err > tol_ad:
                bad = ("forward", fwd, err)
            elif all(abs(g) >= fd_floor for g in fwd):
                fd_checked += 1
                fd = gradient_fd(f, p)
                err_fd = max_relative_error(rev, fd)
                worst_fd = max(worst_fd, err_fd)
                if err_fd > tol_fd:
                    bad = ("finite differences", fd, err_fd)
            if bad:
                return SuiteResult(
                    "reverse = forward",
                    False,
                    i + 1,
                    metric=bad[2],
                    detail=f"disagreement with {bad[0]}",
                    counterexample={"term": pretty(f), "point": p, "dialectica": rev, "oracle": bad[1]},
                )
    return SuiteResult(
        "reverse = forward",
        True,
        count,
        metric=worst_ad,
        detail=f"worst fd error {worst_fd:.3g} over {fd_checked} well-conditioned points",
    )


@_timed
def run_linearity(seed: int = 0, count: int = 50, points: int = 5, tol: float = TOL_LINEAR) -> SuiteResult:
    """Counters are linear in the cotangent: scaling and additivity."""
    rng = random.Random(seed)
    gen = TermGenerator(rng)
    worst = 0.0
    for i in range(count):
        n = rng.randint(1, 3)
        f = gen.real_function(n)
        body, names = f, []
        while isinstance(body, Lam):
            names.append(body.var)
            body = body.body
        for _ in range(points):
            p = random_point(rng, n)
            v, w, c = rng.uniform(-2, 2), rng.uniform(-2, 2), rng.uniform(-3, 3)
            gv = counter_gradient(body, names, p, v)
            gw = counter_gradient(body, names, p, w)
            gcv = counter_gradient(body, names, p, c * v)
            gvw = counter_gradient(body, names, p, v + w)
            err = max(
                max_relative_error(gcv, [c * a for a in gv]),
                max_relative_error(gvw, [a + b for a, b in zip(gv, gw)]),
            )
            worst = max(worst, err)
            if err > tol:
                return SuiteResult(
                    "counter linearity",
                    False,
                    i + 1,
                    metric=err,
                    counterexample={"term": pretty(body), "point": p, "v": v, "w": w, "c": c},
                )
    return SuiteResult("counter linearity", True, count, metric=worst)


def _agree_pointwise(ctx, a_terms, b_terms, types, rng, trials, tol) -> bool:
    for _ in range(trials):
        env = {x: random_value(witness_type(t), rng) for x, t in ctx}
        for a, b, ty in zip(a_terms, b_terms, types):
            probe = random.Random(rng.randrange(2**31))
            if not values_close(eval_closed(a, env), eval_closed(b, env), ty, probe, tol):
                return False
    return True


@_timed
def run_beta_invariance(
    seed: int = 0, count: int = 100, trials: int = 10, tol: float = TOL_POINTWISE
) -> SuiteResult:
    """A term and its beta reduct have equal witnesses and counters."""
    rng = random.Random(seed)
    gen = TermGenerator(rng, redex_rate=0.6)
    by_normal_form = 0
    done = 0
    while done < count:
        ctx, t, ty = gen.open_term()
        reduct = beta_step(t)
        if reduct is None:
            continue
        done += 1
        names = [x for x, _ in ctx]
        a_terms = [witness(t)] + [counter(t, x) for x in names]
        b_terms = [witness(reduct)] + [counter(reduct, x) for x in names]
        types = [witness_type(ty)] + [
            Arrow(counter_type(ty), Monad(counter_type(a))) for _, a in ctx
        ]
        if all(equal(a, b) is Verdict.EQUAL for a, b in zip(a_terms, b_terms)):
            by_normal_form += 1
            continue
        try:
            ok = _agree_pointwise(ctx, a_terms, b_terms, types, rng, trials, tol)
        except EvalError:
            ok = False
        if not ok:
            return SuiteResult(
                "beta invariance",
                False,
                done,
                counterexample={"context": _ctx_record(ctx), "term": pretty(t), "reduct": pretty(reduct)},
            )
    return SuiteResult(
        "beta invariance", True, count, detail=f"{by_normal_form} decided by normal forms, rest pointwise"
    )


@_timed
def run_functor_image(seed: int = 0, count: int = 50, max_depth: int = 4) -> SuiteResult:
    """The source term category maps functorially into lenses over target terms."""
    rng = random.Random(seed)
    gen = TermGenerator(rng, max_depth=max_depth, max_binders=2)
    for i in range(count):
        a, b, c = (rng.choice(POOL) for _ in range(3))
        m = gen.term([("x", a)], b)
        n = gen.term([("y", b)], c)
        fm, fn = functor_image("x", a, m), functor_image("y", b, n)
        composite = functor_image("x", a, subst(n, "y", m))
        ident = functor_image("x", a, Var("x"))
        cat = fm.cat
        checks = {
            "identity": ident.equals(elens_identity(cat, witness_type(a), Monad(counter_type(a)))),
            "composition": composite.equals(fm.then(fn)),
        }
        failed = [k for k, ok in checks.items() if not ok]
        if failed:
            return SuiteResult(
                "functor image",
                False,
                i + 1,
                detail=f"{failed[0]} law fails",
                counterexample={"types": [str(a), str(b), str(c)], "M": pretty(m), "N": pretty(n)},
            )
    return SuiteResult("functor image", True, count)


# ---------------------------------------------------------------------------
# Categorical suites


def _poly_record(p) -> Dict[str, Any]:
    return {"dom": p.dom, "cod": p.cod, "polys": [str(q) for q in p.polys]}


def chain_rule_rhs(f, g):
    """``(a, w) |-> R f (a, R g (f a, w))`` as a polynomial map ``n + k -> n``."""
    n, k = f.dom, g.cod
    push = POLY.pair(POLY.compose(POLY.proj1(n, k), f), POLY.proj2(n, k))
    inner = POLY.compose(push, poly_reverse_diff(g))
    return POLY.compose(POLY.pair(POLY.proj1(n, k), inner), poly_reverse_diff(f))


def _random_poly_pair(rng, max_dim=3, max_degree=3):
    n, m, k = (rng.randint(1, max_dim) for _ in range(3))
    return random_poly_map(rng, n, m, max_degree), random_poly_map(rng, m, k, max_degree)


@_timed
def run_chain_rule(seed: int = 0, count: int = 200) -> SuiteResult:
    """``R(f;g) = <pi_1, (f x 1);R g>;R f`` exactly."""
    rng = random.Random(seed)
    for i in range(count):
        f, g = _random_poly_pair(rng)
        if poly_reverse_diff(POLY.compose(f, g)) != chain_rule_rhs(f, g):
            return SuiteResult(
                "reverse chain rule", False, i + 1, counterexample={"f": _poly_record(f), "g": _poly_record(g)}
            )
    return SuiteResult("reverse chain rule", True, count)


@_timed
def run_tstar_functor(seed: int = 0, count: int = 200) -> SuiteResult:
    """``T*`` and ``D`` preserve identities and composition exactly."""
    rng = random.Random(seed)
    for i in range(count):
        f, g = _random_poly_pair(rng)
        for name, functor in (("T*", T_star), ("D", D_functor)):
            ident = functor(POLY.identity(f.dom)).equals(elens_identity(POLY, f.dom, f.dom))
            comp = functor(POLY.compose(f, g)).equals(functor(f).then(functor(g)))
            if not (ident and comp):
                return SuiteResult(
                    "T* functor laws",
                    False,
                    i + 1,
                    detail=f"{name} {'identity' if not ident else 'composition'} law fails",
                    counterexample={"f": _poly_record(f), "g": _poly_record(g)},
                )
    return SuiteResult("T* functor laws", True, count)


def _lens_record(e) -> Dict[str, Any]:
    return {"forward": list(e.forward.table), "backward": list(e.backward.table)}


def _dial_record(d) -> Dict[str, Any]:
    out = {"forward": list(d.forward.table), "counter": list(d.counter.table)}
    for key, obj in (("source", d.source), ("target", d.target)):
        out[key] = {
            "A": obj.A.size,
            "X": obj.X.size,
            "sub": None if obj.sub is None else [int(b) for b in obj.sub.table],
        }
    return out


@_timed
def run_g_iso(seed: int = 0, count: int = 100, max_carrier: int = 5) -> SuiteResult:
    """``G`` and ``G_inv`` are inverse, and ``G`` is functorial."""
    rng = random.Random(seed)

    def carrier():
        return random_finset(rng, 1, max_carrier)

    for i in range(count):
        A, X, B, Y, C, Z = (carrier() for _ in range(6))
        e1 = random_elens(rng, A, X, B, Y)
        e2 = random_elens(rng, B, Y, C, Z)
        d = DialArrow(
            FINSET, DialObject(A, X), DialObject(B, Y), random_map(rng, A, B), random_map(rng, product(A, Y), X)
        )
        checks = {
            "G;G_inv = id": G_inv(G(e1)).equals(e1),
            "G_inv;G = id": G(G_inv(d)).equals(d),
            "G functorial": G(e1.then(e2)).equals(dial_compose(G(e1), G(e2))),
        }
        failed = [k for k, ok in checks.items() if not ok]
        if failed:
            return SuiteResult(
                "G isomorphism",
                False,
                i + 1,
                detail=failed[0],
                counterexample={"e1": _lens_record(e1), "e2": _lens_record(e2), "d": _dial_record(d)},
            )
    return SuiteResult("G isomorphism", True, count)


@_timed
def run_dial_category(seed: int = 0, count: int = 200, max_carrier: int = 4) -> SuiteResult:
    """Composites of valid Dialectica arrows are valid; identities are units."""
    rng = random.Random(seed)
    done = 0
    while done < count:
        o1, o2, o3 = (random_dial_object(rng, max_carrier) for _ in range(3))
        d1 = random_dial_arrow(rng, o1, o2)
        d2 = random_dial_arrow(rng, o2, o3) if d1 else None
        if d2 is None:
            continue
        done += 1
        comp = dial_compose(d1, d2, check=False)
        checks = {
            "closure": dial_check(comp),
            "left identity": dial_compose(dial_identity(FINSET, o1), d1, check=False).equals(d1),
            "right identity": dial_compose(d1, dial_identity(FINSET, o2), check=False).equals(d1),
            "identity valid": dial_check(dial_identity(FINSET, o1)),
        }
        failed = [k for k, ok in checks.items() if not ok]
        if failed:
            return SuiteResult(
                "Dialectica category",
                False,
                done,
                detail=failed[0],
                counterexample={"d1": _dial_record(d1), "d2": _dial_record(d2)},
            )
    return SuiteResult("Dialectica category", True, count)


# ---------------------------------------------------------------------------

TRANSFORMATION_SUITES = {
    "soundness": run_soundness,
    "gradients": run_gradients,
    "linearity": run_linearity,
    "beta": run_beta_invariance,
    "functor": run_functor_image,
}

LAW_SUITES = {
    "chain-rule": run_chain_rule,
    "tstar": run_tstar_functor,
    "g-iso": run_g_iso,
    "dial": run_dial_category,
}

# acceptance criterion number -> suite
CRITERIA = {
    1: run_soundness,
    2: run_gradients,
    3: run_linearity,
    4: run_beta_invariance,
    5: run_chain_rule,
    6: run_tstar_functor,
    7: run_g_iso,
    8: run_dial_category,
    9: run_functor_image,
}

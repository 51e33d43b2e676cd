import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dialectica.numeric import (
    Bag,
    EvalError,
    collapse,
    counter_gradient,
    eval_closed,
    eval_source,
    gradient_dialectica,
    gradient_fd,
    gradient_forward,
    random_value,
    relative_error,
    value_and_gradient_dialectica,
    values_close,
)
from dialectica.parsing import parse_source, parse_target
from dialectica.primitives import DEFAULT_SIGNATURE, PrimitiveImpl
from dialectica.syntax import REAL, Arrow, Monad, Prod, arrows
from dialectica.transform import counter

R = REAL


def ev(text, **env):
    return eval_closed(parse_target(text), env)


def test_eval_examples():
    assert ev(r"[3.0] >>= \z. [z]") == Bag((3.0,))
    assert ev("0 + [2.0]") == Bag((2.0,))
    assert ev("<1.0, 2.0>^2") == 2.0
    assert ev(r"(\x. mul x x) 3.0") == 9.0
    assert ev(r"([1.0] + [2.0]) >>= \z. [z] + [z]") == Bag((1.0, 1.0, 2.0, 2.0))


def test_eval_errors():
    with pytest.raises(EvalError, match="unbound"):
        ev("x")
    with pytest.raises(EvalError):
        ev("1.5^1")
    with pytest.raises(EvalError):
        ev(r"1.5 >>= \z. [z]")


def test_collapse():
    assert collapse(Bag()) == 0.0
    assert collapse(Bag((1.5, 2.5))) == 4.0
    assert collapse(Bag(((1.0, 0.0), (0.0, 2.0)))) == (1.0, 2.0)
    with pytest.raises(EvalError):
        collapse(Bag((1.0, (1.0, 2.0))))


def test_collapse_is_order_independent():
    items = [1e16, 1.0, -1e16, 3.0]
    assert collapse(Bag(tuple(items))) == collapse(Bag(tuple(reversed(items)))) == 4.0


def test_gradient_examples():
    assert gradient_dialectica(parse_source(r"\(x:real). x"), [7.0]) == (1.0,)
    f = parse_source(r"\(x:real). sq (sq x)")
    value, grad = value_and_gradient_dialectica(f, [3.0])
    assert (value, grad) == (81.0, (108.0,))
    assert gradient_forward(f, [3.0]) == (108.0,)
    assert gradient_dialectica(parse_source("mul"), [2.0, 5.0]) == (5.0, 2.0)
    assert gradient_forward(parse_source("mul"), [2.0, 5.0]) == (5.0, 2.0)
    assert gradient_forward(parse_source("add"), [0.3, -4.0]) == (1.0, 1.0)


def test_fd_examples():
    assert gradient_fd(parse_source(r"\(x:real). x"), [2.0]) == pytest.approx((1.0,), abs=1e-10)
    (d,) = gradient_fd(parse_source("sq"), [3.0])
    assert abs(d - 6.0) < 1e-8  # central differences are exact for quadratics up to rounding
    assert gradient_fd(parse_source(r"\(x:real) (y:real). 2.0"), [1.0, 2.0]) == (0.0, 0.0)
    with pytest.raises(ValueError):
        gradient_fd(parse_source("sq"), [1.0], h=0.0)


def test_gradient_dimension_mismatch():
    with pytest.raises(ValueError):
        gradient_dialectica(parse_source("mul"), [1.0])


def test_gradient_rejects_non_real_functions():
    with pytest.raises(TypeError):
        gradient_dialectica(parse_source(r"\(f:real->real). f 1.0"), [1.0])


def test_primitive_partials_match_central_differences():
    rng = random.Random(0)
    h = 1e-6
    for impl in DEFAULT_SIGNATURE.prims.values():
        for _ in range(100):
            a = [rng.uniform(-2, 2) for _ in range(impl.arity)]
            for k, d in enumerate(impl.partials):
                up, down = list(a), list(a)
                up[k] += h
                down[k] -= h
                fd = (impl.fn(*up) - impl.fn(*down)) / (2 * h)
                assert relative_error(d(*a), fd) <= 1e-6, (impl.name, a)


def test_registered_primitive():
    sig = DEFAULT_SIGNATURE.copy()
    sig.register(PrimitiveImpl("sub", 2, lambda a, b: a - b, (lambda a, b: 1.0, lambda a, b: -1.0)))
    f = parse_source(r"\(x:real) (y:real). sub (sq x) y", sig)
    assert gradient_dialectica(f, [3.0, 1.0], sig) == (6.0, -1.0)
    assert gradient_forward(f, [3.0, 1.0], sig) == (6.0, -1.0)


def test_zero_counter():
    t = parse_source("sq (mul x 2.0)")
    c = eval_closed(counter(t, "y"), {"x": 1.0, "y": 2.0})
    for v in (0.0, 1.0, -3.5):
        assert c(v) == Bag()


def test_counter_gradient_of_open_term():
    t = parse_source("mul x (sq y)")
    assert counter_gradient(t, ["x", "y"], [2.0, 3.0]) == (9.0, 12.0)
    assert counter_gradient(t, ["x", "y"], [2.0, 3.0], cotangent=2.0) == (18.0, 24.0)


def test_source_evaluation():
    assert eval_source(parse_source(r"(\(g:real->real) (x:real). g (g x)) sq 3.0")) == 81.0


# ---------------------------------------------------------------------------
# Monad and monoid laws hold extensionally

reals = st.floats(-10, 10, allow_nan=False)
bags = st.lists(reals, max_size=4).map(lambda xs: Bag(tuple(xs)))


def _same(a, b):
    return values_close(a, b, Monad(R), random.Random(0), tol=1e-12)


@settings(max_examples=100, deadline=None)
@given(reals, bags)
def test_left_unit(a, m):
    k = parse_target(r"\z. [mul z z] + [z]")
    assert _same(eval_closed(parse_target(r"[a] >>= k"), {"a": a, "k": eval_closed(k)}),
                 eval_closed(parse_target("k a"), {"a": a, "k": eval_closed(k)}))


@settings(max_examples=100, deadline=None)
@given(bags)
def test_right_unit(m):
    assert _same(eval_closed(parse_target(r"m >>= \z. [z]"), {"m": m}), m)


@settings(max_examples=100, deadline=None)
@given(bags)
def test_bind_associativity(m):
    env = {
        "m": m,
        "k": eval_closed(parse_target(r"\z. [sq z] + [neg z]")),
        "l": eval_closed(parse_target(r"\z. [add z 1.0]")),
    }
    a = eval_closed(parse_target(r"(m >>= k) >>= l"), env)
    b = eval_closed(parse_target(r"m >>= \z. k z >>= l"), env)
    assert _same(a, b)


@settings(max_examples=100, deadline=None)
@given(bags, bags, bags)
def test_monoid_laws(a, b, c):
    env = {"a": a, "b": b, "c": c}
    e = lambda s: eval_closed(parse_target(s), env)  # noqa: E731
    assert _same(e("a + b"), e("b + a"))
    assert _same(e("(a + b) + c"), e("a + (b + c)"))
    assert e("a + 0") == a
    k = eval_closed(parse_target(r"\z. [mul 2.0 z]"))
    env["k"] = k
    assert _same(e("(a + b) >>= k"), e("a >>= k + b >>= k"))


def test_values_close_distinguishes():
    rng = random.Random(0)
    assert not values_close(Bag((1.0,)), Bag((1.0, 0.0)), Monad(R), rng)
    assert not values_close(Bag((1.0, 2.0)), Bag((1.0, 3.0)), Monad(R), rng)
    assert values_close(Bag((1.0, 2.0)), Bag((2.0, 1.0)), Monad(R), rng)
    f = eval_closed(parse_target(r"\x. mul x 2.0"))
    g = eval_closed(parse_target(r"\x. add x x"))
    h = eval_closed(parse_target(r"\x. sq x"))
    ty = arrows(R, R)
    assert values_close(f, g, ty, rng) and not values_close(f, h, ty, rng)


def test_random_values_have_the_requested_shape():
    rng = random.Random(4)
    ty = Prod(Arrow(R, R), Arrow(Prod(R, R), Monad(R)))
    f, b = random_value(ty, rng)
    assert isinstance(f(1.0), float)
    out = b((1.0, 2.0))
    assert isinstance(out, Bag) and all(isinstance(v, float) for v in out)
    # smooth: nearby inputs give nearby outputs
    assert abs(f(1.0) - f(1.0 + 1e-12)) < 1e-9

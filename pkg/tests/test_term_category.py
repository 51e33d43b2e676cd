import random

import pytest

from dialectica.categories import TermCategory, TermMap, elens_identity
from dialectica.generators import POOL, TermGenerator
from dialectica.parsing import parse_source, parse_target
from dialectica.syntax import REAL, Monad, Prod, Var, arrows, subst
from dialectica.transform import counter_type, functor_image, functor_object, witness_type

R = REAL
cat = TermCategory()


def tm(var, dom, cod, text):
    return TermMap(var, dom, cod, parse_target(text))


def test_term_maps_have_one_free_variable():
    with pytest.raises(ValueError):
        tm("z", R, R, "add z w")


def test_category_laws():
    f = tm("x", R, Prod(R, R), "<sq x, x>")
    g = tm("p", Prod(R, R), R, "mul p^1 p^2")
    h = tm("r", R, R, "neg r")
    assert cat.equal(cat.compose(cat.identity(R), f), f)
    assert cat.equal(cat.compose(f, cat.identity(Prod(R, R))), f)
    assert cat.equal(cat.compose(cat.compose(f, g), h), cat.compose(f, cat.compose(g, h)))
    paired = cat.pair(cat.proj1(R, R), cat.proj2(R, R))
    assert cat.equal(paired, cat.identity(Prod(R, R)))


def test_equality_is_not_trivial():
    assert not cat.equal(tm("x", R, R, "sq x"), tm("x", R, R, "mul x 2.0"))
    assert not cat.equal(tm("x", R, Monad(R), "[x] + [x]"), tm("x", R, Monad(R), "[x]"))
    assert not cat.equal(tm("x", R, R, "x"), tm("x", R, Prod(R, R), "<x, x>"))


def test_pointwise_fallback_decides_commuting_binds():
    ty = Prod(Monad(R), Monad(R))
    a = tm("p", ty, Monad(R), r"p^1 >>= \x. p^2 >>= \y. [mul x y]")
    b = tm("p", ty, Monad(R), r"p^2 >>= \y. p^1 >>= \x. [mul x y]")
    assert cat.equal(a, b)


def test_functor_object():
    obj = functor_object(arrows(R, R))
    assert obj.dom == Prod(witness_type(arrows(R, R)), Monad(counter_type(arrows(R, R))))
    assert obj.cod == witness_type(arrows(R, R))


def test_functor_image_shape():
    lens = functor_image("x", R, parse_source("sq x"))
    lens.validate()
    assert lens.X == Monad(R) and lens.Y == Monad(R)
    # backward leg at (a, [w]) is (a, [2 a w])
    from dialectica.numeric import Bag, eval_closed

    a, out = eval_closed(lens.backward.body, {lens.backward.var: (3.0, Bag((1.0,)))})
    assert a == 3.0 and out == Bag((6.0,))


def test_functor_identity_and_composition():
    rng = random.Random(0)
    gen = TermGenerator(rng, max_depth=4, max_binders=2)
    for _ in range(15):
        a, b, c = (rng.choice(POOL) for _ in range(3))
        m, n = gen.term([("x", a)], b), gen.term([("y", b)], c)
        fm, fn = functor_image("x", a, m), functor_image("y", b, n)
        assert functor_image("x", a, Var("x")).equals(elens_identity(cat, witness_type(a), Monad(counter_type(a))))
        assert functor_image("x", a, subst(n, "y", m)).equals(fm.then(fn))


def test_functor_composition_catches_a_wrong_lens():
    """Negative control: dropping a counter summand breaks the composition law."""
    m = parse_source("mul x x")
    n = parse_source("sq y")
    fm, fn = functor_image("x", R, m), functor_image("y", R, n)
    wrong = functor_image("x", R, parse_source("mul x 1.0"))
    composite = fm.then(fn)
    broken = type(composite)(
        composite.cat, composite.A, composite.X, composite.B, composite.Y, composite.forward, wrong.backward
    )
    assert not functor_image("x", R, subst(n, "y", m)).equals(broken)


def test_functor_rejects_extra_free_variables():
    from dialectica.typecheck import TypeCheckError

    with pytest.raises(TypeCheckError):
        functor_image("x", R, parse_source("mul x y"))

import itertools
import random
from fractions import Fraction

import pytest
import sympy

from dialectica.categories import (
    FINSET,
    POLY,
    DialArrow,
    DialError,
    DialObject,
    D_functor,
    FinSet,
    FinSetMap,
    G,
    G_inv,
    LensError,
    Poly,
    Subobject,
    T_star,
    dial_check,
    dial_compose,
    dial_identity,
    elens_compose,
    elens_identity,
    poly_reverse_diff,
)
from dialectica.categories.finset import product
from dialectica.categories.lens import ELensArrow
from dialectica.categories.poly import constant_map, poly_apply, poly_map
from dialectica.generators import (
    random_dial_arrow,
    random_dial_object,
    random_elens,
    random_finset,
    random_map,
    random_poly_map,
    random_rational_point,
)
from dialectica.suites import chain_rule_rhs

# ---------------------------------------------------------------------------
# Finite sets and lenses


def test_finset_maps_are_validated():
    with pytest.raises(ValueError):
        FinSetMap(FinSet(2), FinSet(2), (0,))
    with pytest.raises(ValueError):
        FinSetMap(FinSet(1), FinSet(2), (2,))


def test_finset_product_encoding():
    a, b = FinSet(2, ("p", "q")), FinSet(3)
    ab = product(a, b)
    assert ab.size == 6 and ab.label(4) == ("q", 1)
    assert FINSET.proj1(a, b).table == (0, 0, 0, 1, 1, 1)
    assert FINSET.proj2(a, b).table == (0, 1, 2, 0, 1, 2)


def _backward_oracle(e1, e2, a, z):
    """Pointwise lens composition: y = pi_2 G(f a, z), then F(a, y)."""
    f, big_f, big_g = e1.forward, e1.backward, e2.backward
    b = f(a)
    y = big_g(b * e2.Y.size + z) % e1.Y.size
    return big_f(a * e1.Y.size + y)


def _lens_triple(rng, hi=4):
    objs = [(random_finset(rng, 1, hi), random_finset(rng, 1, hi)) for _ in range(4)]
    return [random_elens(rng, *objs[i], *objs[i + 1]) for i in range(3)]


def test_elens_composition_matches_pointwise_oracle():
    rng = random.Random(0)
    for _ in range(100):
        e1, e2, _ = _lens_triple(rng)
        comp = elens_compose(e1, e2).validate()
        for a in e1.A:
            for z in e2.Y:
                assert comp.backward(a * e2.Y.size + z) == _backward_oracle(e1, e2, a, z)
        assert comp.forward.table == tuple(e2.forward(e1.forward(a)) for a in e1.A)


def test_elens_category_laws():
    rng = random.Random(1)
    for _ in range(100):
        e1, e2, e3 = _lens_triple(rng)
        assert elens_identity(FINSET, e1.A, e1.X).then(e1).equals(e1)
        assert e1.then(elens_identity(FINSET, e1.B, e1.Y)).equals(e1)
        assert e1.then(e2).then(e3).equals(e1.then(e2.then(e3)))


def test_elens_validation():
    a, x = FinSet(2), FinSet(2)
    ax = product(a, x)
    # backward map that moves the base point
    bad = ELensArrow(FINSET, a, x, a, x, FINSET.identity(a), FinSetMap(ax, ax, (2, 3, 0, 1)))
    with pytest.raises(LensError):
        bad.validate()
    e = random_elens(random.Random(0), a, x, a, x)
    with pytest.raises(LensError):
        elens_compose(e, random_elens(random.Random(0), FinSet(3), x, a, x))


# ---------------------------------------------------------------------------
# Dialectica categories


def _dial_oracle(d):
    """The Dialectica arrow condition, read in Set and enumerated directly."""
    src, tgt = d.source, d.target
    for a in range(src.A.size):
        for y in range(tgt.X.size):
            x = d.counter(a * tgt.X.size + y)
            if src.holds(a, x) and not tgt.holds(d.forward(a), y):
                return False
    return True


def test_identity_is_a_dialectica_arrow():
    rng = random.Random(2)
    for _ in range(50):
        o = random_dial_object(rng)
        assert dial_check(dial_identity(FINSET, o))


def test_arrows_into_full_subobjects_always_pass():
    rng = random.Random(3)
    for _ in range(50):
        src = random_dial_object(rng)
        tgt = random_dial_object(rng, full=True)
        d = DialArrow(FINSET, src, tgt, random_map(rng, src.A, tgt.A), random_map(rng, product(src.A, tgt.X), src.X))
        assert dial_check(d)


def test_a_violating_pair_is_rejected():
    two = FinSet(2)
    # exhaustive search on 2-element carriers for a candidate that fails
    found = None
    for sub_a, sub_b in itertools.product(itertools.product((False, True), repeat=4), repeat=2):
        src = DialObject(two, two, Subobject(two, two, sub_a))
        tgt = DialObject(two, two, Subobject(two, two, sub_b))
        d = DialArrow(FINSET, src, tgt, FINSET.identity(two), FINSET.proj2(two, two))
        if not _dial_oracle(d):
            found = d
            break
    assert found is not None
    assert dial_check(found) is False


def test_dial_check_agrees_with_oracle():
    rng = random.Random(4)
    for _ in range(300):
        src, tgt = random_dial_object(rng, 3), random_dial_object(rng, 3)
        d = DialArrow(FINSET, src, tgt, random_map(rng, src.A, tgt.A), random_map(rng, product(src.A, tgt.X), src.X))
        assert dial_check(d) == _dial_oracle(d)


def test_dial_composite_formula_pointwise():
    rng = random.Random(5)
    n = 0
    while n < 50:
        o1, o2, o3 = (random_dial_object(rng) for _ in range(3))
        d1 = random_dial_arrow(rng, o1, o2)
        d2 = d1 and random_dial_arrow(rng, o2, o3)
        if not d2:
            continue
        n += 1
        comp = dial_compose(d1, d2)
        for a in o1.A:
            for z in o3.X:
                y = d2.counter(d1.forward(a) * o3.X.size + z)
                assert comp.counter(a * o3.X.size + z) == d1.counter(a * o2.X.size + y)
        assert dial_compose(dial_identity(FINSET, o1), d1).equals(d1)
        assert dial_compose(d1, dial_identity(FINSET, o2)).equals(d1)


def test_dial_shape_errors():
    a = FinSet(2)
    o = DialObject(a, a)
    with pytest.raises(DialError):
        dial_check(DialArrow(FINSET, o, o, FINSET.identity(a), FINSET.identity(a)))
    with pytest.raises(DialError):
        dial_compose(dial_identity(FINSET, o), dial_identity(FINSET, DialObject(FinSet(3), a)))


def test_g_round_trips():
    a, x = FinSet(2), FinSet(3)
    ident = elens_identity(FINSET, a, x)
    assert G(ident).equals(dial_identity(FINSET, DialObject(a, x)))
    assert G_inv(G(ident)).equals(ident)
    d = DialArrow(FINSET, DialObject(a, x), DialObject(a, x), FINSET.identity(a), random_map(random.Random(0), product(a, x), x))
    back = G_inv(d)
    assert back.backward == FINSET.pair(FINSET.proj1(a, x), d.counter)
    assert G(back).equals(d)


def test_g_inv_requires_full_subobjects():
    a = FinSet(2)
    sub = DialObject(a, a, Subobject(a, a, (True, False, True, True)))
    with pytest.raises(DialError):
        G_inv(dial_identity(FINSET, sub))


def test_g_is_functorial():
    rng = random.Random(6)
    for _ in range(100):
        e1, e2, _ = _lens_triple(rng, 5)
        assert G(e1.then(e2)).equals(G(e1).then(G(e2)))


# ---------------------------------------------------------------------------
# Polynomials


def P(n, terms):
    return Poly(n, {k: Fraction(v) for k, v in terms.items()})


def test_poly_apply_examples():
    assert poly_apply(POLY.identity(2), [3, 5]) == (3, 5)
    sq = poly_map(1, [P(1, {(2,): 1})])
    assert poly_apply(sq, [3]) == (9,)
    xy = poly_map(2, [P(2, {(1, 1): 1}), P(2, {(1, 0): 1, (0, 1): 1})])
    assert poly_apply(xy, [2, 3]) == (6, 5)
    with pytest.raises(ValueError):
        poly_apply(xy, [1])


def test_reverse_diff_examples():
    r = poly_reverse_diff(POLY.identity(2))
    assert poly_apply(r, [1, 2, 7, 9]) == (7, 9)
    r = poly_reverse_diff(constant_map(2, [3]))
    assert poly_apply(r, [1, 2, 5]) == (0, 0)
    sq = poly_map(1, [P(1, {(2,): 1})])
    r = poly_reverse_diff(sq)
    assert r.polys[0] == P(2, {(1, 1): 2})
    assert poly_apply(r, [3, 1]) == (6,)


def _to_sympy(p: Poly, syms):
    return sum(sympy.Rational(c.numerator, c.denominator) * sympy.prod([s**e for s, e in zip(syms, m)]) for m, c in p.terms.items())


def test_reverse_diff_matches_sympy_jacobian_transpose():
    rng = random.Random(7)
    for _ in range(40):
        n, m = rng.randint(1, 3), rng.randint(1, 3)
        p = random_poly_map(rng, n, m)
        a = sympy.symbols(f"a0:{n}")
        w = sympy.symbols(f"w0:{m}")
        jac = sympy.Matrix([_to_sympy(q, a) for q in p.polys]).jacobian(a)
        expected = jac.T * sympy.Matrix(w)
        got = [_to_sympy(q, a + w) for q in poly_reverse_diff(p).polys]
        for g, e in zip(got, expected):
            assert sympy.expand(g - e) == 0


def test_reverse_diff_is_linear_in_the_cotangent():
    rng = random.Random(8)
    for _ in range(50):
        p = random_poly_map(rng, rng.randint(1, 3), rng.randint(1, 3))
        r = poly_reverse_diff(p)
        a = random_rational_point(rng, p.dom)
        w, w2 = random_rational_point(rng, p.cod), random_rational_point(rng, p.cod)
        c = Fraction(rng.randint(-5, 5), 3)
        lhs = r(a + [c * u + v for u, v in zip(w, w2)])
        rhs = [c * u + v for u, v in zip(r(a + w), r(a + w2))]
        assert list(lhs) == rhs


def test_tstar_example():
    f = poly_map(1, [P(1, {(2,): 1})])  # x^2
    g = poly_map(1, [P(1, {(1,): 1, (0,): 1})])  # y + 1
    left = T_star(POLY.compose(f, g))
    right = T_star(f).then(T_star(g))
    assert left.equals(right)
    # backward leg (a, w) |-> (a, 2aw)
    assert left.backward.polys[1] == P(2, {(1, 1): 2})
    assert T_star(POLY.identity(2)).equals(elens_identity(POLY, 2, 2))


def test_chain_rule_with_exact_points():
    rng = random.Random(9)
    for _ in range(30):
        n, m, k = (rng.randint(1, 3) for _ in range(3))
        f, g = random_poly_map(rng, n, m), random_poly_map(rng, m, k)
        a, w = random_rational_point(rng, n), random_rational_point(rng, k)
        lhs = poly_reverse_diff(POLY.compose(f, g))(a + w)
        inner = poly_reverse_diff(g)(list(f(a)) + w)
        assert lhs == poly_reverse_diff(f)(a + list(inner))
        assert chain_rule_rhs(f, g)(a + w) == lhs


def test_d_then_g_is_the_dial_arrow_of_the_reverse_derivative():
    rng = random.Random(10)
    for _ in range(30):
        f = random_poly_map(rng, rng.randint(1, 3), rng.randint(1, 3))
        d = G(D_functor(f))
        assert d.forward == f
        assert d.counter == poly_reverse_diff(f)
        assert D_functor(f).equals(T_star(f))

"""Polynomial maps over the rationals: a Cartesian reverse differential category.

Objects are dimensions ``n``; an arrow ``n -> m`` is a tuple of ``m``
polynomials in ``n`` variables with :class:`fractions.Fraction` coefficients.
The reverse differential of ``p : n -> m`` is the arrow ``R p : n + m -> n``,
``R p(a, w) = J_p(a)^T w``, obtained by exact symbolic differentiation.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, Sequence, Tuple

from .lens import ELensArrow

Monomial = Tuple[int, ...]


class Poly:
    """Sparse polynomial in ``nvars`` variables: ``{exponents: coefficient}``."""

    __slots__ = ("nvars", "terms", "_key")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction] = None):
        self.nvars = nvars
        clean = {}
        for mono, c in (terms or {}).items():
            if len(mono) != nvars:
                raise ValueError(f"monomial {mono} does not have {nvars} exponents")
            if c:
                clean[tuple(mono)] = Fraction(c)
        self.terms = clean
        self._key = None

    @classmethod
    def const(cls, nvars: int, c) -> "Poly":
        return cls(nvars, {(0,) * nvars: Fraction(c)})

    @classmethod
    def var(cls, nvars: int, i: int) -> "Poly":
        if not 0 <= i < nvars:
            raise ValueError(f"variable index {i} out of range for {nvars} variables")
        return cls(nvars, {tuple(int(k == i) for k in range(nvars)): Fraction(1)})

    def key(self):
        if self._key is None:
            self._key = (self.nvars, tuple(sorted(self.terms.items())))
        return self._key

    def __eq__(self, other):
        return isinstance(other, Poly) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    def __add__(self, other: "Poly") -> "Poly":
        self._same(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            out[m] = out.get(m, 0) + c
        return Poly(self.nvars, out)

    def __neg__(self) -> "Poly":
        return Poly(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "Poly") -> "Poly":
        return self + (-other)

    def __mul__(self, other) -> "Poly":
        if not isinstance(other, Poly):
            return Poly(self.nvars, {m: c * Fraction(other) for m, c in self.terms.items()})
        self._same(other)
        out: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                out[m] = out.get(m, 0) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly":
        result, base = Poly.const(self.nvars, 1), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def _same(self, other: "Poly"):
        if self.nvars != other.nvars:
            raise ValueError(f"polynomials in {self.nvars} and {other.nvars} variables")

    def __call__(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise ValueError(f"expected {self.nvars} coordinates, got {len(point)}")
        total = Fraction(0)
        for mono, c in self.terms.items():
            term = c
            for x, e in zip(point, mono):
                if e:
                    term *= Fraction(x) ** e
            total += term
        return total

    def diff(self, i: int) -> "Poly":
        """Partial derivative with respect to variable ``i``."""
        out = {}
        for mono, c in self.terms.items():
            e = mono[i]
            if e:
                m = mono[:i] + (e - 1,) + mono[i + 1 :]
                out[m] = out.get(m, 0) + c * e
        return Poly(self.nvars, out)

    def substitute(self, values: Sequence["Poly"]) -> "Poly":
        """Replace variable ``i`` by ``values[i]`` (all in a common variable set)."""
        if len(values) != self.nvars:
            raise ValueError("one polynomial per variable")
        if not values:
            return self
        nv = values[0].nvars
        total = Poly(nv)
        powers: Dict[Tuple[int, int], Poly] = {}
        for mono, c in self.terms.items():
            term = Poly.const(nv, c)
            for i, e in enumerate(mono):
                if e:
                    if (i, e) not in powers:
                        powers[(i, e)] = values[i] ** e
                    term = term * powers[(i, e)]
            total = total + term
        return total

    def __repr__(self):
        return f"Poly({self.nvars}, {self})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for mono, c in sorted(self.terms.items(), reverse=True):
            factors = [
                f"x{i}" if e == 1 else f"x{i}^{e}" for i, e in enumerate(mono) if e
            ]
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts)


@dataclass(frozen=True)
class PolyMap:
    dom: int
    cod: int
    polys: Tuple[Poly, ...]

    def __post_init__(self):
        if len(self.polys) != self.cod:
            raise ValueError(f"{len(self.polys)} components for codomain {self.cod}")
        if any(p.nvars != self.dom for p in self.polys):
            raise ValueError("component polynomials must live in the domain's variables")

    def __call__(self, point: Sequence) -> Tuple[Fraction, ...]:
        return poly_apply(self, point)

    def __str__(self):
        return "(" + ", ".join(str(p) for p in self.polys) + ")"


def poly_map(dom: int, polys: Iterable[Poly]) -> PolyMap:
    polys = tuple(polys)
    return PolyMap(dom, len(polys), polys)


def poly_apply(p: PolyMap, point: Sequence) -> Tuple[Fraction, ...]:
    if len(point) != p.dom:
        raise ValueError(f"point of dimension {len(point)}, map expects {p.dom}")
    return tuple(q(point) for q in p.polys)


class PolyCategory:
    """Cartesian structure on polynomial maps; products are concatenation."""

    def identity(self, n: int) -> PolyMap:
        return PolyMap(n, n, tuple(Poly.var(n, i) for i in range(n)))

    def compose(self, f: PolyMap, g: PolyMap) -> PolyMap:
        """``f ; g``, i.e. ``g`` after ``f``."""
        if f.cod != g.dom:
            raise ValueError(f"cannot compose {f.dom}->{f.cod} with {g.dom}->{g.cod}")
        if f.cod == 0:
            return PolyMap(f.dom, g.cod, tuple(Poly(f.dom, {(0,) * f.dom: q.terms.get((), 0)}) for q in g.polys))
        return PolyMap(f.dom, g.cod, tuple(q.substitute(f.polys) for q in g.polys))

    def product(self, n: int, m: int) -> int:
        return n + m

    def proj1(self, n: int, m: int) -> PolyMap:
        return PolyMap(n + m, n, tuple(Poly.var(n + m, i) for i in range(n)))

    def proj2(self, n: int, m: int) -> PolyMap:
        return PolyMap(n + m, m, tuple(Poly.var(n + m, n + i) for i in range(m)))

    def pair(self, f: PolyMap, g: PolyMap) -> PolyMap:
        if f.dom != g.dom:
            raise ValueError("pairing maps with different domains")
        return PolyMap(f.dom, f.cod + g.cod, f.polys + g.polys)

    def dom(self, f: PolyMap) -> int:
        return f.dom

    def cod(self, f: PolyMap) -> int:
        return f.cod

    def equal(self, f: PolyMap, g: PolyMap) -> bool:
        return f == g


POLY = PolyCategory()


def constant_map(dom: int, values: Sequence) -> PolyMap:
    return poly_map(dom, (Poly.const(dom, v) for v in values))


def poly_reverse_diff(p: PolyMap) -> PolyMap:
    """``R p : dom + cod -> dom`` with ``R p(a, w)_i = sum_k d p_k / d a_i (a) * w_k``."""
    n, m = p.dom, p.cod
    lift = [Poly.var(n + m, i) for i in range(n)]
    ws = [Poly.var(n + m, n + k) for k in range(m)]
    out = []
    for i in range(n):
        total = Poly(n + m)
        for k, q in enumerate(p.polys):
            d = q.diff(i)
            if not d.is_zero():
                total = total + d.substitute(lift) * ws[k]
        out.append(total)
    return PolyMap(n + m, n, tuple(out))


def T_star(p: PolyMap) -> ELensArrow:
    """``p |-> (p, <pi_1, R p>)`` from ``pi_1 : n*n -> n`` to ``pi_1 : m*m -> m``."""
    cat = POLY
    back = cat.pair(cat.proj1(p.dom, p.cod), poly_reverse_diff(p))
    return ELensArrow(cat, p.dom, p.dom, p.cod, p.cod, p, back)


def D_functor(p: PolyMap) -> ELensArrow:
    """The lens of ``p`` built from its differential, with cotangents identified with tangents.

    In the Euclidean polynomial model the dual of the pushforward is the
    transposed Jacobian, so this coincides with :func:`T_star`.
    """
    return T_star(p)


def tstar_object(n: int):
    """``n |-> pi_1 : n*n -> n``."""
    return (n, n)

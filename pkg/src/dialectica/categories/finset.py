"""The category of finite sets and total functions, as lookup tables.

Elements of a carrier of size ``n`` are ``0..n-1``.  The product ``A*B`` has
size ``|A|*|B|`` with ``(a, b)`` encoded as ``a*|B| + b``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence, Tuple


@dataclass(frozen=True)
class FinSet:
    size: int
    labels: Optional[Tuple] = None

    def __post_init__(self):
        if self.size < 0:
            raise ValueError("negative carrier size")
        if self.labels is not None and len(self.labels) != self.size:
            raise ValueError("one label per element")

    def __iter__(self):
        return iter(range(self.size))

    def label(self, i: int):
        return self.labels[i] if self.labels is not None else i


@dataclass(frozen=True)
class FinSetMap:
    dom: FinSet
    cod: FinSet
    table: Tuple[int, ...]

    def __post_init__(self):
        if len(self.table) != self.dom.size:
            raise ValueError(f"table has {len(self.table)} entries, domain has {self.dom.size}")
        if any(not 0 <= v < self.cod.size for v in self.table):
            raise ValueError("table value outside the codomain")

    def __call__(self, i: int) -> int:
        return self.table[i]

    def as_dict(self) -> dict:
        return {self.dom.label(i): self.cod.label(v) for i, v in enumerate(self.table)}


def product(a: FinSet, b: FinSet) -> FinSet:
    labels = tuple((a.label(i), b.label(j)) for i in a for j in b)
    return FinSet(a.size * b.size, labels)


def encode(a: FinSet, b: FinSet, i: int, j: int) -> int:
    return i * b.size + j


def decode(a: FinSet, b: FinSet, k: int) -> Tuple[int, int]:
    return divmod(k, b.size)


def from_function(dom: FinSet, cod: FinSet, fn) -> FinSetMap:
    return FinSetMap(dom, cod, tuple(fn(i) for i in dom))


class FinSetCategory:
    """Cartesian structure of finite sets (see :mod:`dialectica.categories.lens`)."""

    def identity(self, a: FinSet) -> FinSetMap:
        return FinSetMap(a, a, tuple(range(a.size)))

    def compose(self, f: FinSetMap, g: FinSetMap) -> FinSetMap:
        if f.cod != g.dom:
            raise ValueError("maps are not composable")
        return FinSetMap(f.dom, g.cod, tuple(g.table[v] for v in f.table))

    def product(self, a: FinSet, b: FinSet) -> FinSet:
        return product(a, b)

    def proj1(self, a: FinSet, b: FinSet) -> FinSetMap:
        return from_function(product(a, b), a, lambda k: k // b.size)

    def proj2(self, a: FinSet, b: FinSet) -> FinSetMap:
        return from_function(product(a, b), b, lambda k: k % b.size)

    def pair(self, f: FinSetMap, g: FinSetMap) -> FinSetMap:
        if f.dom != g.dom:
            raise ValueError("pairing maps with different domains")
        target = product(f.cod, g.cod)
        return FinSetMap(f.dom, target, tuple(u * g.cod.size + v for u, v in zip(f.table, g.table)))

    def dom(self, f: FinSetMap) -> FinSet:
        return f.dom

    def cod(self, f: FinSetMap) -> FinSet:
        return f.cod

    def equal(self, f: FinSetMap, g: FinSetMap) -> bool:
        return f == g


FINSET = FinSetCategory()


def tabulate(dom: FinSet, cod: FinSet, values: Sequence[int]) -> FinSetMap:
    return FinSetMap(dom, cod, tuple(values))

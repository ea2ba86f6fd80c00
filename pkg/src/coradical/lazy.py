"""Co-algebras given by procedures on sparse elements.

Used where the underlying space is infinite-dimensional (e.g. the group
algebra of Z^r).  Elements are mappings ``basis key -> Fraction`` with finite
support; tensors are mappings ``tuple of keys -> Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Hashable, Mapping

Key = Hashable
Element = Mapping[Key, Fraction]
Tensor = Mapping[tuple, Fraction]


def _clean(d: dict) -> dict:
    return {k: v for k, v in d.items() if v}


def add_into(acc: dict, other: Mapping, scale=1) -> dict:
    for k, v in other.items():
        s = acc.get(k, 0) + scale * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


@dataclass(frozen=True)
class LazyCoalgebra:
    """Co-algebra structure specified on basis keys and extended linearly."""

    comult_basis: Callable[[Key], Mapping[tuple, Fraction]]
    counit_basis: Callable[[Key], Fraction]
    name: str = ""

    def comult(self, x: Element) -> dict[tuple, Fraction]:
        out: dict[tuple, Fraction] = {}
        for k, c in x.items():
            add_into(out, self.comult_basis(k), c)
        return out

    def counit(self, x: Element) -> Fraction:
        return sum((c * self.counit_basis(k) for k, c in x.items()), Fraction(0))


def tensor(*factors: Element) -> dict[tuple, Fraction]:
    out: dict[tuple, Fraction] = {(): Fraction(1)}
    for f in factors:
        nxt: dict[tuple, Fraction] = {}
        for word, a in out.items():
            for k, b in f.items():
                key = word + (k,)
                nxt[key] = nxt.get(key, 0) + a * b
        out = _clean(nxt)
    return out


def tensor_power(x: Element, k: int) -> dict[tuple, Fraction]:
    return tensor(*([x] * k))


def is_unit(lc: LazyCoalgebra, u: Element) -> bool:
    return lc.counit(u) == 1 and lc.comult(u) == tensor(u, u)


def counit_complement(lc: LazyCoalgebra, u: Element, x: Element) -> dict:
    """p-bar(x) = x - eps(x) u."""
    return add_into(dict(x), u, -lc.counit(x))


def reduced_comult(lc: LazyCoalgebra, u: Element, x: Element) -> dict[tuple, Fraction]:
    y = counit_complement(lc, u, x)
    out = lc.comult(y)
    add_into(out, tensor(u, y), -1)
    add_into(out, tensor(y, u), -1)
    return out


def iterated_reduced_comult(lc: LazyCoalgebra, u: Element, x: Element, k: int) -> dict[tuple, Fraction]:
    """delta-bar^k(x) in the (k+1)-fold tensor power, expanded on the leftmost factor."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if k == 0:
        return {(key,): c for key, c in counit_complement(lc, u, x).items()}
    t = reduced_comult(lc, u, x)
    cache: dict = {}
    for _ in range(k - 1):
        nxt: dict[tuple, Fraction] = {}
        for word, c in t.items():
            head = word[0]
            if head not in cache:
                cache[head] = reduced_comult(lc, u, {head: Fraction(1)})
            for pair, d in cache[head].items():
                key = pair + word[1:]
                nxt[key] = nxt.get(key, 0) + c * d
        t = _clean(nxt)
    return t


lazy_iterated_reduced_comult = iterated_reduced_comult

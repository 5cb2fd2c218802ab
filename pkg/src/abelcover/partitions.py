"""Partitions as types of finite abelian p-groups.

A partition is stored as a plain tuple of positive integers in weakly
decreasing order.  The trivial group has the empty partition ``()``; zero
parts are never stored.

>>> conjugate((3, 1))
(2, 1, 1)
>>> complement(2, 3, (1,))
(2, 2, 1)
>>> group_type_of([4, 2])
GroupType({2: (2, 1)})
"""

from __future__ import annotations

import json
from collections.abc import Iterable, Iterator, Mapping
from itertools import groupby
from math import prod

from sympy import factorint, isprime

Partition = tuple[int, ...]


def partition(parts: Iterable[int]) -> Partition:
    """Validate ``parts`` and return it as a canonical partition tuple.

    Parts must already be weakly decreasing and positive.  Use
    :func:`normalize` to sort arbitrary input.
    """
    result = tuple(int(x) for x in parts)
    for x in result:
        if x < 1:
            raise ValueError(f"partition parts must be positive, got {result}")
    for a, b in zip(result, result[1:]):
        if a < b:
            raise ValueError(f"partition parts must be weakly decreasing, got {result}")
    return result


def normalize(parts: Iterable[int]) -> Partition:
    """Sort non-negative parts into decreasing order, dropping zeros."""
    values = [int(x) for x in parts]
    if any(x < 0 for x in values):
        raise ValueError(f"negative part in {values}")
    return tuple(sorted((x for x in values if x), reverse=True))


def weight(beta: Iterable[int]) -> int:
    return sum(beta)


def contains(alpha: Partition, beta: Partition) -> bool:
    """True iff ``beta`` fits inside ``alpha`` part by part."""
    if len(beta) > len(alpha):
        return False
    return all(b <= a for a, b in zip(alpha, beta))


def conjugate(alpha: Partition) -> Partition:
    if not alpha:
        return ()
    return tuple(sum(1 for a in alpha if a >= i) for i in range(1, alpha[0] + 1))


def multiplicity_form(beta: Partition) -> list[tuple[int, int]]:
    """Run-length encoding ``[(value, multiplicity), ...]`` with decreasing values."""
    return [(value, len(list(run))) for value, run in groupby(beta)]


def rectangle(k: int, n: int) -> Partition:
    """The partition ``k^n``; empty when either argument is zero."""
    if k <= 0 or n <= 0:
        return ()
    return (k,) * n


def complement(k: int, n: int, beta: Partition) -> Partition:
    """Type of ``Z_{p^k}^n / K`` for a subgroup ``K`` of type ``beta``.

    Parts equal to ``k`` in ``beta`` produce zero parts, which are dropped.
    """
    beta = partition(beta)
    if len(beta) > n:
        raise ValueError(f"{beta} has more than n={n} parts")
    if beta and beta[0] > k:
        raise ValueError(f"{beta} has a part larger than k={k}")
    return normalize([k] * (n - len(beta)) + [k - b for b in reversed(beta)])


def partitions_of(total: int, largest: int | None = None) -> Iterator[Partition]:
    """All partitions of ``total`` with parts at most ``largest``, in reverse lex order."""
    if largest is None:
        largest = total
    if total == 0:
        yield ()
        return
    for first in range(min(total, largest), 0, -1):
        for rest in partitions_of(total - first, first):
            yield (first,) + rest


def sub_partitions(alpha: Partition, total: int | None = None) -> Iterator[Partition]:
    """All ``beta`` contained in ``alpha``, optionally restricted to weight ``total``."""

    def rec(i: int, cap: int, remaining: int | None) -> Iterator[Partition]:
        if remaining is None or remaining == 0:
            yield ()
            if remaining == 0:
                return
        if i == len(alpha):
            return
        top = min(cap, alpha[i])
        if remaining is not None:
            top = min(top, remaining)
        for b in range(top, 0, -1):
            for rest in rec(i + 1, b, None if remaining is None else remaining - b):
                yield (b,) + rest

    yield from rec(0, alpha[0] if alpha else 0, total)


def reduce_ambient(alpha: Partition, beta: Partition) -> Partition:
    """Shrink ``alpha`` to ``beta_1^n`` when every part of ``alpha`` is at least ``beta_1``.

    Subgroups of type ``beta`` all lie in the ``p^{beta_1}``-torsion, so the
    count of such subgroups is unchanged.
    """
    alpha, beta = partition(alpha), partition(beta)
    if not beta:
        raise ValueError("beta must be non-empty")
    if not alpha or beta[0] > alpha[-1]:
        raise ValueError(f"largest part of {beta} exceeds smallest part of {alpha}")
    return rectangle(beta[0], len(alpha))


class GroupType(Mapping):
    """Primary decomposition of a finite abelian group: ``{prime: partition}``.

    Immutable and hashable.  Primes with an empty partition are dropped.
    """

    __slots__ = ("_items",)

    def __init__(self, components: Mapping[int, Iterable[int]] | None = None):
        items = []
        for p, parts in dict(components or {}).items():
            p = int(p)
            if not isprime(p):
                raise ValueError(f"{p} is not prime")
            alpha = partition(parts)
            if alpha:
                items.append((p, alpha))
        self._items = tuple(sorted(items))

    def __getitem__(self, p: int) -> Partition:
        for q, alpha in self._items:
            if q == p:
                return alpha
        raise KeyError(p)

    def get(self, p, default=()):  # type: ignore[override]
        return super().get(p, default)

    def __iter__(self):
        return (p for p, _ in self._items)

    def __len__(self) -> int:
        return len(self._items)

    def __hash__(self) -> int:
        return hash(self._items)

    def __eq__(self, other) -> bool:
        if isinstance(other, GroupType):
            return self._items == other._items
        if isinstance(other, Mapping):
            return self == GroupType(other)
        return NotImplemented

    def __repr__(self) -> str:
        return f"GroupType({dict(self._items)})"

    def __str__(self) -> str:
        if not self._items:
            return "trivial"
        return ";".join(f"{p}:[{','.join(map(str, a))}]" for p, a in self._items)

    @property
    def primes(self) -> tuple[int, ...]:
        return tuple(p for p, _ in self._items)

    @property
    def order(self) -> int:
        return prod(p ** weight(a) for p, a in self._items)

    @property
    def exponent(self) -> int:
        return prod(p ** a[0] for p, a in self._items)

    def is_cyclic(self) -> bool:
        return all(len(a) == 1 for _, a in self._items)

    def invariant_factors(self) -> list[int]:
        """Cyclic factor orders ``d_1 | d_2 | ...`` describing the same group."""
        depth = max((len(a) for _, a in self._items), default=0)
        return sorted(
            prod(p ** a[i] for p, a in self._items if i < len(a)) for i in range(depth)
        )

    def to_json(self) -> dict[str, list[int]]:
        return {str(p): list(a) for p, a in self._items}

    @classmethod
    def from_json(cls, data: Mapping[str, Iterable[int]] | str) -> GroupType:
        if isinstance(data, str):
            data = json.loads(data)
        return cls({int(p): parts for p, parts in data.items()})

    @classmethod
    def parse(cls, text: str) -> GroupType:
        """Parse the command-line syntax ``"2:[2,1];3:[1]"``.

        ``""``, ``"1"`` and ``"trivial"`` denote the trivial group.
        """
        text = text.strip()
        if text in ("", "1", "trivial", "{}"):
            return cls()
        components: dict[int, Partition] = {}
        for item in text.split(";"):
            if not item.strip():
                continue
            try:
                p_text, parts_text = item.split(":", 1)
                p = int(p_text)
                body = parts_text.strip()
                if not (body.startswith("[") and body.endswith("]")):
                    raise ValueError
                inner = body[1:-1].strip()
                parts = tuple(int(x) for x in inner.split(",")) if inner else ()
            except ValueError:
                raise ValueError(f"cannot parse group type component {item!r}") from None
            if p in components:
                raise ValueError(f"prime {p} given twice")
            components[p] = parts
        return cls(components)


def group_type_of(orders: Iterable[int]) -> GroupType:
    """Primary decomposition of ``Z_{orders[0]} x Z_{orders[1]} x ...``."""
    exponents: dict[int, list[int]] = {}
    for n in orders:
        n = int(n)
        if n <= 1:
            raise ValueError(f"cyclic factor orders must be >= 2, got {n}")
        for p, e in factorint(n).items():
            exponents.setdefault(int(p), []).append(int(e))
    return GroupType({p: sorted(es, reverse=True) for p, es in exponents.items()})


def group_types_of_order(n: int) -> Iterator[GroupType]:
    """Every abelian group type of order ``n``."""
    factors = sorted((int(p), int(e)) for p, e in factorint(n).items()) if n > 1 else []

    def rec(i: int) -> Iterator[dict[int, Partition]]:
        if i == len(factors):
            yield {}
            return
        p, e = factors[i]
        for alpha in partitions_of(e):
            for rest in rec(i + 1):
                yield {p: alpha, **rest}

    for components in rec(0):
        yield GroupType(components)

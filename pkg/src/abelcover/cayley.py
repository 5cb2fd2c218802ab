"""Cayley graphs on finite abelian groups and their relation lattices."""

from __future__ import annotations

import json
from dataclasses import dataclass
from math import lcm, prod
from typing import Iterable, Sequence

from .modring import IntLattice, integer_kernel, rank_gf2
from .partitions import GroupType, group_type_of

CLOSURE_LIMIT = 10**6

GroupElement = tuple[int, ...]


class InvalidCayleySpec(ValueError):
    """Base class for rejected Cayley-graph descriptions."""


class MissingInverse(InvalidCayleySpec):
    pass


class ContainsZero(InvalidCayleySpec):
    pass


class NotGenerating(InvalidCayleySpec):
    pass


class DuplicateGenerator(InvalidCayleySpec):
    pass


def _neg(y: GroupElement, orders: Sequence[int]) -> GroupElement:
    return tuple(-c % n for c, n in zip(y, orders))


def _is_involution(y: GroupElement, orders: Sequence[int]) -> bool:
    return all(2 * c % n == 0 for c, n in zip(y, orders))


@dataclass(frozen=True)
class CayleySpec:
    """``Cay(B, Y)`` with ``Y = {+-y_1, ..., +-y_l} u {y'_1, ..., y'_l'}``.

    ``pairs`` holds one representative of each inverse pair and
    ``involutions`` the generators of order two.  Construction validates the
    description; :func:`parse_and_validate` builds one from a raw generator set.
    """

    factor_orders: tuple[int, ...]
    pairs: tuple[GroupElement, ...]
    involutions: tuple[GroupElement, ...]

    def __post_init__(self):
        orders = tuple(int(n) for n in self.factor_orders)
        if not orders or any(n < 2 for n in orders):
            raise InvalidCayleySpec(f"factor orders must be >= 2, got {list(orders)}")
        object.__setattr__(self, "factor_orders", orders)
        object.__setattr__(self, "pairs", tuple(self._reduce(y) for y in self.pairs))
        object.__setattr__(self, "involutions", tuple(self._reduce(y) for y in self.involutions))

        seen: set[GroupElement] = set()
        zero = (0,) * len(orders)
        for y in self.pairs:
            if y == zero:
                raise ContainsZero("0 cannot be a generator")
            if _is_involution(y, orders):
                raise InvalidCayleySpec(f"pair representative {y} has order 2")
            for z in (y, _neg(y, orders)):
                if z in seen:
                    raise DuplicateGenerator(f"generator {z} appears twice")
                seen.add(z)
        for y in self.involutions:
            if y == zero:
                raise ContainsZero("0 cannot be a generator")
            if not _is_involution(y, orders):
                raise InvalidCayleySpec(f"involution {y} does not satisfy 2y = 0")
            if y in seen:
                raise DuplicateGenerator(f"generator {y} appears twice")
            seen.add(y)
        if not _generates(orders, list(self.pairs) + list(self.involutions)):
            raise NotGenerating("generators do not generate the group")

    def _reduce(self, y) -> GroupElement:
        y = tuple(int(c) for c in y)
        if len(y) != len(self.factor_orders):
            raise InvalidCayleySpec(f"element {y} has wrong length for orders {list(self.factor_orders)}")
        return tuple(c % n for c, n in zip(y, self.factor_orders))

    @property
    def l(self) -> int:
        return len(self.pairs)

    @property
    def l_prime(self) -> int:
        return len(self.involutions)

    @property
    def order(self) -> int:
        return prod(self.factor_orders)

    @property
    def exponent(self) -> int:
        return lcm(*self.factor_orders)

    @property
    def generators(self) -> list[GroupElement]:
        """The full generating set ``Y``."""
        out = []
        for y in self.pairs:
            out += [y, _neg(y, self.factor_orders)]
        return out + list(self.involutions)

    def canonical(self) -> CayleySpec:
        orders = self.factor_orders
        pairs = sorted(min(y, _neg(y, orders)) for y in self.pairs)
        return CayleySpec(orders, tuple(pairs), tuple(sorted(self.involutions)))

    def to_json(self) -> dict:
        return {"orders": list(self.factor_orders), "generators": [list(y) for y in self.generators]}

    def canonical_json(self) -> str:
        c = self.canonical()
        return json.dumps(
            {
                "orders": list(c.factor_orders),
                "pairs": [list(y) for y in c.pairs],
                "involutions": [list(y) for y in c.involutions],
            },
            separators=(",", ":"),
        )

    @classmethod
    def from_json(cls, data: dict | str) -> CayleySpec:
        if isinstance(data, str):
            data = json.loads(data)
        try:
            orders, generators = data["orders"], data["generators"]
        except (KeyError, TypeError):
            raise InvalidCayleySpec('input must be an object with "orders" and "generators"') from None
        return parse_and_validate(orders, generators)


def _generates(orders: Sequence[int], gens: list[GroupElement]) -> bool:
    n = prod(orders)
    if n <= CLOSURE_LIMIT:
        from .oracle import ConcreteGroup

        return ConcreteGroup(orders).generated(gens).order == n
    if not gens:
        return False
    return integer_kernel(gens, orders).index() == n


def parse_and_validate(factor_orders: Iterable[int], generator_list: Iterable[Sequence[int]]) -> CayleySpec:
    """Split a symmetric generating set into inverse pairs and involutions.

    The representative of each pair is the lexicographically smaller of
    ``y`` and ``-y``.
    """
    orders = tuple(int(n) for n in factor_orders)
    if not orders or any(n < 2 for n in orders):
        raise InvalidCayleySpec(f"factor orders must be >= 2, got {list(orders)}")
    elements: list[GroupElement] = []
    for y in generator_list:
        y = tuple(int(c) for c in y)
        if len(y) != len(orders):
            raise InvalidCayleySpec(f"element {list(y)} has wrong length for orders {list(orders)}")
        elements.append(tuple(c % n for c, n in zip(y, orders)))
    zero = (0,) * len(orders)
    if zero in elements:
        raise ContainsZero("0 cannot be a generator")
    if len(set(elements)) != len(elements):
        raise DuplicateGenerator("a generator is listed twice")
    present = set(elements)
    pairs, involutions = set(), []
    for y in elements:
        if _is_involution(y, orders):
            involutions.append(y)
            continue
        minus = _neg(y, orders)
        if minus not in present:
            raise MissingInverse(f"{list(y)} is listed but its inverse {list(minus)} is not")
        pairs.add(min(y, minus))
    return CayleySpec(orders, tuple(sorted(pairs)), tuple(sorted(involutions)))


@dataclass(frozen=True)
class RelationData:
    r_y: IntLattice
    r0: IntLattice
    l0: int
    exp_b: int


def relation_data(spec: CayleySpec) -> RelationData:
    """Relation lattice of the generators, the involution sublattice, and ``l_0``.

    ``l_0`` is the dimension of the space of ``u`` in ``Z_2^{l'}`` with
    ``sum u_j y'_j = 0``; each involution is read as a bit vector with one bit
    per even cyclic factor (set iff the coordinate is half the order).
    """
    orders = spec.factor_orders
    rank = spec.l + spec.l_prime
    gens = list(spec.pairs) + list(spec.involutions)
    r_y = integer_kernel(gens, orders)
    r0_rows = [[2 if j == spec.l + i else 0 for j in range(rank)] for i in range(spec.l_prime)]
    r0 = IntLattice.from_generators(rank, r0_rows)
    even = [i for i, n in enumerate(orders) if n % 2 == 0]
    bits = [[int(y[i] == orders[i] // 2) for i in even] for y in spec.involutions]
    l0 = spec.l_prime - rank_gf2(bits)
    return RelationData(r_y, r0, l0, spec.exponent)


def valence(spec: CayleySpec) -> int:
    return 2 * spec.l + spec.l_prime


def b_type(spec: CayleySpec) -> GroupType:
    return group_type_of(spec.factor_orders)

"""Ground truth by exhaustive enumeration over small concrete abelian groups.

Groups are products of cyclic groups ``Z_{n_1} x ... x Z_{n_r}``.  Elements
are coordinate tuples, stored internally as mixed-radix integer codes (first
coordinate most significant, so code order is lexicographic tuple order).
Subgroups are sorted code arrays; the sorted element list is the identity
used for deduplication.

Nothing here uses the closed-form counts; this module is the reference the
formulas are checked against.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from math import gcd, prod

import numpy as np
from sympy import factorint

from .partitions import GroupType, Partition, conjugate, partition

DEFAULT_SUBGROUP_BUDGET = 4096
DEFAULT_SPAN_BUDGET = 2**16
DEFAULT_COVERING_BUDGET = 2**16


class BudgetExceeded(RuntimeError):
    """An exhaustive enumeration would exceed its configured size limit."""


class DeadlineExceeded(BudgetExceeded):
    """An enumeration ran past its wall-clock deadline."""


class SimplicityViolated(RuntimeError):
    """A candidate total graph has a loop or a parallel edge."""


def _check_budget(size: int, budget: int, what: str) -> None:
    if size > budget:
        raise BudgetExceeded(f"{what} has {size} elements, budget is {budget}")


class ConcreteGroup:
    """The group ``Z_{n_1} x ... x Z_{n_r}`` with explicit elements."""

    def __init__(self, factor_orders):
        self.factor_orders = tuple(int(n) for n in factor_orders)
        if any(n < 1 for n in self.factor_orders):
            raise ValueError(f"factor orders must be positive: {self.factor_orders}")
        self.order = prod(self.factor_orders)
        self._radix = np.array(
            [prod(self.factor_orders[i + 1:]) for i in range(len(self.factor_orders))],
            dtype=np.int64,
        )
        self._mods = np.array(self.factor_orders, dtype=np.int64)

    def __repr__(self) -> str:
        return f"ConcreteGroup({list(self.factor_orders)})"

    def __eq__(self, other) -> bool:
        return isinstance(other, ConcreteGroup) and self.factor_orders == other.factor_orders

    def __hash__(self) -> int:
        return hash(self.factor_orders)

    @property
    def rank(self) -> int:
        return len(self.factor_orders)

    def encode(self, coords) -> np.ndarray:
        coords = np.asarray(coords, dtype=np.int64) % self._mods
        return coords @ self._radix

    def decode(self, codes) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        return (codes[..., None] // self._radix) % self._mods

    @cached_property
    def all_coords(self) -> np.ndarray:
        return self.decode(np.arange(self.order, dtype=np.int64))

    def element(self, code: int) -> tuple[int, ...]:
        return tuple(int(x) for x in self.decode(code))

    def multiple(self, codes, m: int) -> np.ndarray:
        return self.encode(self.decode(codes) * m)

    def element_order(self, code: int) -> int:
        x = self.decode(code)
        return _lcm_all(n // gcd(int(c), n) for c, n in zip(x, self.factor_orders))

    def trivial(self) -> ConcreteSubgroup:
        return ConcreteSubgroup(self, np.zeros(1, dtype=np.int64))

    def whole(self) -> ConcreteSubgroup:
        return ConcreteSubgroup(self, np.arange(self.order, dtype=np.int64))

    def mask(self, codes) -> np.ndarray:
        m = np.zeros(self.order, dtype=bool)
        m[np.asarray(codes, dtype=np.int64)] = True
        return m

    def join(self, h: ConcreteSubgroup, x) -> ConcreteSubgroup:
        """The subgroup generated by ``h`` and the element with code or coordinates ``x``."""
        x = int(x) if np.ndim(x) == 0 else int(self.encode(x))
        inside = h.mask
        hc = self.decode(h.codes)
        xc = self.decode(x)
        pieces = [h.codes]
        step = xc.copy()
        while not inside[self.encode(step)]:
            pieces.append(self.encode(hc + step))
            step = step + xc
        if len(pieces) == 1:
            return h
        return ConcreteSubgroup(self, np.sort(np.concatenate(pieces)))

    def generated(self, generators, budget: int | None = None) -> ConcreteSubgroup:
        """Subgroup generated by coordinate tuples, built by repeated closure."""
        if budget is not None:
            _check_budget(self.order, budget, repr(self))
        h = self.trivial()
        for g in generators:
            h = self.join(h, self.encode(g))
        return h


def _lcm_all(values) -> int:
    out = 1
    for v in values:
        out = out * v // gcd(out, v)
    return out


@dataclass(frozen=True, eq=False)
class ConcreteSubgroup:
    parent: ConcreteGroup
    codes: np.ndarray = field(repr=False)

    @property
    def order(self) -> int:
        return len(self.codes)

    @cached_property
    def key(self) -> bytes:
        return self.codes.tobytes()

    @cached_property
    def mask(self) -> np.ndarray:
        return self.parent.mask(self.codes)

    @property
    def element_set(self) -> list[tuple[int, ...]]:
        return [tuple(int(c) for c in row) for row in self.parent.decode(self.codes)]

    def __contains__(self, element) -> bool:
        return bool(self.mask[int(self.parent.encode(element))])

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, ConcreteSubgroup)
            and self.parent == other.parent
            and self.key == other.key
        )

    def __hash__(self) -> int:
        return hash(self.key)

    def __le__(self, other: ConcreteSubgroup) -> bool:
        return bool(other.mask[self.codes].all())

    def __repr__(self) -> str:
        return f"ConcreteSubgroup(order={self.order}, in {self.parent!r})"


def _sort_key(h: ConcreteSubgroup):
    return (h.order, tuple(h.codes.tolist()))


def enumerate_subgroups(
    g: ConcreteGroup,
    budget: int = DEFAULT_SUBGROUP_BUDGET,
    lower: ConcreteSubgroup | None = None,
    upper: ConcreteSubgroup | None = None,
    deadline: float | None = None,
) -> list[ConcreteSubgroup]:
    """Every subgroup ``H`` with ``lower <= H <= upper``, each exactly once.

    Breadth-first over the subgroup lattice: each subgroup is extended by
    elements whose image in the quotient has prime order, so every step is a
    covering relation.  Results are sorted by order, then element list.
    ``deadline`` is a ``time.monotonic()`` value; passing it raises
    :class:`DeadlineExceeded`.
    """
    _check_budget(g.order, budget, repr(g))
    lower = lower if lower is not None else g.trivial()
    upper = upper if upper is not None else g.whole()
    if not lower <= upper:
        return []
    upper_coords = g.decode(upper.codes)
    primes = sorted(int(p) for p in factorint(upper.order // lower.order))
    multiples = {r: g.encode(upper_coords * r) for r in primes}

    seen = {lower.key: lower}
    frontier = [lower]
    while frontier:
        nxt = []
        for h in frontier:
            if deadline is not None and time.monotonic() > deadline:
                raise DeadlineExceeded(f"enumerating subgroups of {g!r} ran past its deadline")
            inside = h.mask
            for r in primes:
                cand = upper.codes[inside[multiples[r]] & ~inside[upper.codes]]
                covered = np.zeros(g.order, dtype=bool)
                for x in cand:
                    if covered[x]:
                        continue
                    bigger = g.join(h, int(x))
                    covered[bigger.codes] = True
                    if bigger.key not in seen:
                        seen[bigger.key] = bigger
                        nxt.append(bigger)
        frontier = nxt
    return sorted(seen.values(), key=_sort_key)


def _type_from_counts(order: int, count_killed) -> GroupType:
    """Type of a group of the given order from ``count_killed(p, i) = #{x : p^i x = 0}``."""
    components = {}
    for p, e in factorint(order).items():
        p = int(p)
        partial = []
        i = 0
        while not partial or partial[-1] < e:
            i += 1
            n = count_killed(p, i)
            log = _exact_log(n, p)
            partial.append(log)
        conj = [partial[0]] + [b - a for a, b in zip(partial, partial[1:])]
        components[p] = conjugate(partition([c for c in conj if c]))
    return GroupType(components)


def _exact_log(n: int, p: int) -> int:
    k = 0
    while n % p == 0 and n > 1:
        n //= p
        k += 1
    if n != 1:
        raise ArithmeticError("count is not a prime power")
    return k


def _p_part(n: int, p: int) -> int:
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


def classify_type(k: ConcreteSubgroup) -> GroupType:
    """Primary decomposition type of ``k`` from counts of killed elements."""
    g = k.parent
    coords = g.decode(k.codes)

    def killed(p: int, i: int) -> int:
        # the p'-cofactor kills the p'-part and permutes the p-part
        cofactor = k.order // _p_part(k.order, p)
        return int(np.count_nonzero(g.encode(coords * (p**i * cofactor)) == 0)) // cofactor

    return _type_from_counts(k.order, killed)


def quotient_group_type(
    g: ConcreteGroup, k: ConcreteSubgroup, within: ConcreteSubgroup | None = None
) -> GroupType:
    """Type of ``within / k`` (``within`` defaults to all of ``g``)."""
    within = within if within is not None else g.whole()
    order = within.order // k.order
    coords = g.decode(within.codes)
    inside = k.mask

    def killed(p: int, i: int) -> int:
        cofactor = order // _p_part(order, p)
        hits = int(np.count_nonzero(inside[g.encode(coords * (p**i * cofactor))]))
        # hits / |k| counts cosets killed by p^i * cofactor; the cofactor is a
        # bijection on the p-part and kills the rest, which has cofactor elements
        return hits // k.order // cofactor

    return _type_from_counts(order, killed)


def p_group(p: int, alpha: Partition) -> ConcreteGroup:
    return ConcreteGroup([p**a for a in partition(alpha)])


@lru_cache(maxsize=256)
def type_census(p: int, alpha: Partition, budget: int = DEFAULT_SUBGROUP_BUDGET) -> Counter:
    """Multiset of ``(subgroup type, quotient type)`` over all subgroups of type ``alpha``."""
    g = p_group(p, alpha)
    _check_budget(g.order, budget, repr(g))
    census: Counter = Counter()
    for h in enumerate_subgroups(g, budget=budget):
        census[(classify_type(h).get(p, ()), quotient_group_type(g, h).get(p, ()))] += 1
    return census


def count_triple_oracle(
    p: int, alpha: Partition, beta: Partition, gamma: Partition,
    budget: int = DEFAULT_SUBGROUP_BUDGET,
) -> int:
    """Subgroups of type ``beta`` with quotient of type ``gamma`` in a group of type ``alpha``."""
    return type_census(p, partition(alpha), budget)[(partition(beta), partition(gamma))]


@lru_cache(maxsize=64)
def cyclic_census(p: int, alpha: Partition, budget: int = DEFAULT_SPAN_BUDGET) -> Counter:
    """Multiset of ``(s, quotient type)`` over cyclic subgroups of order ``p^s``.

    Walks the elements in code order; each new element contributes the
    subgroup it generates, and all generators of that subgroup are marked.
    Reaches larger groups than :func:`type_census`.
    """
    alpha = partition(alpha)
    g = p_group(p, alpha)
    _check_budget(g.order, budget, repr(g))
    coords = g.all_coords
    top = alpha[0] if alpha else 0
    scaled = [g.encode(coords * p**i) for i in range(top + 1)]
    log_order = np.full(g.order, -1, dtype=np.int64)
    for i, codes in enumerate(scaled):
        log_order[(log_order < 0) & (codes == 0)] = i
    census: Counter = Counter({(0, alpha): 1})
    covered = np.zeros(g.order, dtype=bool)
    covered[0] = True
    for x in range(g.order):
        if covered[x]:
            continue
        s = int(log_order[x])
        steps = np.arange(p**s, dtype=np.int64)
        codes = g.encode(coords[x] * steps[:, None])
        covered[codes[steps % p != 0]] = True
        inside = g.mask(codes)
        size = len(codes)
        # cosets killed by p^i: elements whose p^i-multiple lands in <x>, over |<x>|
        quotient = _type_from_counts(
            g.order // size,
            lambda _, i: int(np.count_nonzero(inside[scaled[min(i, top)]])) // size,
        )
        census[(s, quotient.get(p, ()))] += 1
    return census


def count_cyclic_triple_oracle(
    p: int, alpha: Partition, s: int, gamma: Partition, budget: int = DEFAULT_SPAN_BUDGET
) -> int:
    """Cyclic subgroups of order ``p^s`` with quotient of type ``gamma``."""
    return cyclic_census(p, partition(alpha), budget)[(s, partition(gamma))]


def count_subgroups_oracle(
    p: int, alpha: Partition, beta: Partition, budget: int = DEFAULT_SUBGROUP_BUDGET
) -> int:
    beta = partition(beta)
    return sum(n for (b, _), n in type_census(p, partition(alpha), budget).items() if b == beta)


def count_subgroups_of_order_oracle(
    p: int, alpha: Partition, r: int, budget: int = DEFAULT_SUBGROUP_BUDGET
) -> int:
    return sum(n for (b, _), n in type_census(p, partition(alpha), budget).items() if sum(b) == r)


# --- coverings -------------------------------------------------------------


@dataclass(frozen=True)
class CoveringCensusEntry:
    d: ConcreteSubgroup
    kernel_type: GroupType
    total_type: GroupType


@dataclass(frozen=True, eq=False)
class CoveringContext:
    """``Z^{l+l'} / R`` realised as ``Z_M^{l+l'}``, with ``R(Y)/R`` and ``(R_0+R)/R`` inside."""

    spec: object
    modulus: int
    group: ConcreteGroup
    relations: ConcreteSubgroup
    base_relations: ConcreteSubgroup

    @property
    def rank(self) -> int:
        return self.group.rank

    @cached_property
    def generator_vectors(self) -> list[tuple[int, ...]]:
        """The generator set ``E``: ``+-E_i`` for pairs, ``E_{l+j}`` for involutions."""
        rank, l = self.rank, self.spec.l
        out = []
        for i in range(rank):
            e = [0] * rank
            e[i] = 1
            out.append(tuple(e))
            if i < l:
                e[i] = self.modulus - 1
                out.append(tuple(e))
        return out


def covering_context(spec, modulus: int, budget: int = DEFAULT_COVERING_BUDGET) -> CoveringContext:
    from .cayley import relation_data

    rank = spec.l + spec.l_prime
    if rank == 0:
        raise ValueError("Cayley graph on the trivial group has no generators")
    g = ConcreteGroup([modulus] * rank)
    _check_budget(g.order, budget, repr(g))
    data = relation_data(spec)
    relations = g.generated(data.r_y.basis)
    base = g.generated(data.r0.basis)
    return CoveringContext(spec, modulus, g, relations, base)


@lru_cache(maxsize=128)
def _covering_census(spec, modulus: int, budget: int) -> tuple[CoveringContext, tuple]:
    ctx = covering_context(spec, modulus, budget)
    entries = []
    for d in enumerate_subgroups(ctx.group, budget=budget, lower=ctx.base_relations, upper=ctx.relations):
        entries.append(
            CoveringCensusEntry(
                d,
                quotient_group_type(ctx.group, d, within=ctx.relations),
                quotient_group_type(ctx.group, d),
            )
        )
    return ctx, tuple(entries)


def enumerate_covering_subgroups(
    spec,
    kernel_type: GroupType | None = None,
    total_type: GroupType | None = None,
    folds: int | None = None,
    budget: int = DEFAULT_COVERING_BUDGET,
) -> list[ConcreteSubgroup]:
    """Subgroups ``D`` classifying the typical coverings with the given constraints.

    ``D`` ranges over subgroups of ``R(Y)/R`` containing ``(R_0+R)/R`` with
    ``(R(Y)/R)/D`` of type ``kernel_type`` (or of order ``folds``) and, when
    given, ``(Z^{l+l'}/R)/D`` of type ``total_type``.
    """
    ctx, entries = covering_census(spec, kernel_type=kernel_type, folds=folds, budget=budget)
    return [e.d for e in _filter_census(entries, kernel_type, total_type, folds)]


def covering_census(spec, kernel_type=None, folds=None, budget=DEFAULT_COVERING_BUDGET):
    """The context and full census of subgroups ``D`` for one modulus."""
    if (kernel_type is None) == (folds is None):
        raise ValueError("give exactly one of kernel_type or folds")
    exp_b = spec.exponent
    if kernel_type is not None:
        kernel_type = GroupType(kernel_type)
        modulus = exp_b * kernel_type.exponent
    else:
        if folds < 1:
            raise ValueError("folds must be positive")
        # exp(F) divides q, so exp(B)*q is a common annihilator
        modulus = exp_b * folds
    return _covering_census(spec, modulus, budget)


def _filter_census(entries, kernel_type, total_type, folds):
    for e in entries:
        if kernel_type is not None and e.kernel_type != GroupType(kernel_type):
            continue
        if folds is not None and e.kernel_type.order != folds:
            continue
        if total_type is not None and e.total_type != GroupType(total_type):
            continue
        yield e


def count_coverings_oracle(
    spec, kernel_type=None, total_type=None, folds=None, budget=DEFAULT_COVERING_BUDGET
) -> int:
    return len(enumerate_covering_subgroups(spec, kernel_type, total_type, folds, budget))


def count_primary_covering_subgroups(
    spec, p: int, kernel_part: Partition, total_part: Partition,
    budget: int = DEFAULT_COVERING_BUDGET,
) -> int:
    """Subgroups ``K`` of the ``p``-part of ``R(Y)/R`` over ``(R_0+R)/R`` with given quotients.

    Works in ``Z_{p^k}^{l+l'}``, ``k = alpha_1(p) + beta_1(p)``; counts ``K``
    with ``R(Y)_(p)/K`` of type ``kernel_part`` and ``Z_{p^k}^{l+l'}/K`` of
    type ``total_part``.
    """
    from .cayley import b_type, relation_data

    alpha = b_type(spec).get(p, ())
    beta, gamma = partition(kernel_part), partition(total_part)
    k = (alpha[0] if alpha else 0) + (beta[0] if beta else 0)
    rank = spec.l + spec.l_prime
    if k == 0:
        return 1 if not gamma else 0
    g = ConcreteGroup([p**k] * rank)
    _check_budget(g.order, budget, repr(g))
    data = relation_data(spec)
    relations = g.generated(data.r_y.basis)
    base = g.generated(data.r0.basis)
    count = 0
    for h in enumerate_subgroups(g, budget=budget, lower=base, upper=relations):
        if quotient_group_type(g, h, within=relations).get(p, ()) != beta:
            continue
        if quotient_group_type(g, h).get(p, ()) == gamma:
            count += 1
    return count


# --- covering graphs -------------------------------------------------------


@dataclass(frozen=True)
class CoveringInstance:
    """Total graph, base graph and projection, on coset-representative vertices."""

    total: dict[tuple[int, ...], list[tuple[int, ...]]]
    base: dict[tuple[int, ...], list[tuple[int, ...]]]
    projection: dict[tuple[int, ...], tuple[int, ...]]

    @property
    def folds(self) -> int:
        return len(self.total) // len(self.base)

    def dump(self) -> str:
        lines = ["# total graph: vertex -> neighbours | image"]
        for v, nbrs in self.total.items():
            lines.append(f"{_fmt(v)} -> {' '.join(_fmt(w) for w in nbrs)} | {_fmt(self.projection[v])}")
        lines.append("# base graph")
        for v, nbrs in self.base.items():
            lines.append(f"{_fmt(v)} -> {' '.join(_fmt(w) for w in nbrs)}")
        return "\n".join(lines)


def _fmt(v) -> str:
    return "(" + ",".join(map(str, v)) + ")"


def _coset_labels(g: ConcreteGroup, h: ConcreteSubgroup) -> np.ndarray:
    """Label of each element's coset; the label is the smallest code in the coset."""
    labels = np.full(g.order, -1, dtype=np.int64)
    hc = g.decode(h.codes)
    for x in range(g.order):
        if labels[x] < 0:
            labels[g.encode(hc + g.decode(x))] = x
    return labels


def _cayley_on_cosets(g, labels, generators):
    reps = np.unique(labels)
    gens = np.array(generators, dtype=np.int64)
    adjacency = {}
    for r in reps:
        rc = g.decode(r)
        nbrs = labels[g.encode(rc + gens)]
        adjacency[int(r)] = [int(w) for w in nbrs]
    return adjacency


def covering_instance(spec, d: ConcreteSubgroup, modulus: int | None = None) -> CoveringInstance:
    """Build ``Cay(Z^{l+l'}/C, q_C(E)) -> Cay(Z^{l+l'}/R(Y), q_{R(Y)}(E))`` for ``D = C/R``."""
    ctx = _context_for(spec, d, modulus)
    g = ctx.group
    total_labels = _coset_labels(g, d)
    base_labels = _coset_labels(g, ctx.relations)
    gens = ctx.generator_vectors
    total = _cayley_on_cosets(g, total_labels, gens)
    base = _cayley_on_cosets(g, base_labels, gens)
    for v, nbrs in total.items():
        if v in nbrs or len(set(nbrs)) != len(nbrs):
            raise SimplicityViolated(f"vertex {g.element(v)} has a loop or parallel edge")
    projection = {v: int(base_labels[v]) for v in total}
    el = g.element
    return CoveringInstance(
        {el(v): [el(w) for w in nbrs] for v, nbrs in total.items()},
        {el(v): [el(w) for w in nbrs] for v, nbrs in base.items()},
        {el(v): el(w) for v, w in projection.items()},
    )


def _context_for(spec, d: ConcreteSubgroup, modulus: int | None) -> CoveringContext:
    if modulus is None:
        modulus = d.parent.factor_orders[0]
    ctx = covering_context(spec, modulus, budget=max(DEFAULT_COVERING_BUDGET, d.parent.order))
    if not (ctx.base_relations <= d and d <= ctx.relations):
        raise ValueError("D must lie between (R_0+R)/R and R(Y)/R")
    return ctx


def build_and_verify_covering(spec, d: ConcreteSubgroup) -> bool:
    """Construct the covering for ``D`` and check it is a regular covering of simple graphs.

    Checks the local bijection on neighbourhoods, equal fibre sizes, and that
    translations by ``R(Y)/D`` act transitively on each fibre.
    """
    ctx = _context_for(spec, d, None)
    inst = covering_instance(spec, d)
    g = ctx.group

    # projection is a homomorphism and locally bijective
    for v, nbrs in inst.total.items():
        image = [inst.projection[w] for w in nbrs]
        base_nbrs = inst.base[inst.projection[v]]
        if sorted(image) != sorted(base_nbrs) or len(set(image)) != len(image):
            return False

    fibres: dict[tuple, list[tuple]] = {}
    for v, b in inst.projection.items():
        fibres.setdefault(b, []).append(v)
    sizes = {len(f) for f in fibres.values()}
    if len(sizes) != 1 or len(fibres) != len(inst.base):
        return False
    if sizes.pop() != ctx.relations.order // d.order:
        return False

    # translations by R(Y)/D: coset representatives of D inside R(Y)
    total_labels = _coset_labels(g, d)
    kernel = np.unique(total_labels[ctx.relations.codes])
    kernel_coords = g.decode(kernel)
    for fibre in fibres.values():
        start = g.decode(g.encode(fibre[0]))
        orbit = {g.element(c) for c in total_labels[g.encode(start + kernel_coords)]}
        if orbit != set(fibre):
            return False
    # each translation maps edges to edges
    for t in kernel_coords:
        for v, nbrs in inst.total.items():
            tv = g.element(total_labels[g.encode(np.array(v) + t)])
            moved = sorted(g.element(total_labels[g.encode(np.array(w) + t)]) for w in nbrs)
            if moved != sorted(inst.total[tv]):
                return False
    return True


def dump_subgroups(subgroups) -> str:
    return "\n".join(" ".join(_fmt(x) for x in h.element_set) for h in subgroups)

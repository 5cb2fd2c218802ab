"""Closed-form subgroup counts for finite abelian p-groups.

All arithmetic is on Python integers.  Every division in these formulas is
exact by theorem; :func:`exact_div` turns a non-exact one into a hard error.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from sympy import isprime

from .partitions import (
    Partition,
    conjugate,
    contains,
    multiplicity_form,
    normalize,
    partition,
    reduce_ambient,
    sub_partitions,
    weight,
)

DEFAULT_TRIPLE_BUDGET = {2: 2**12, 3: 3**8}
FALLBACK_TRIPLE_BUDGET = 4096

CLOSED_FORM = "closed-form"
ORACLE = "oracle"


def exact_div(a: int, b: int) -> int:
    q, r = divmod(a, b)
    if r:
        raise ArithmeticError(f"{a} is not divisible by {b}")
    return q


def _check_prime(p: int) -> None:
    if not isprime(p):
        raise ValueError(f"{p} is not prime")


def gaussian_binomial(k: int, l: int, p: int) -> int:
    """Number of ``l``-dimensional subspaces of ``F_p^k``."""
    _check_prime(p)
    if k < 0 or l < 0:
        raise ValueError("k and l must be non-negative")
    if l > k:
        return 0
    num = prod(p ** (k - l + i) - 1 for i in range(1, l + 1))
    den = prod(p**i - 1 for i in range(1, l + 1))
    return exact_div(num, den)


def count_subgroups_of_type(p: int, alpha: Partition, beta: Partition) -> int:
    """Number of subgroups of type ``beta`` in an abelian p-group of type ``alpha``.

    Uses the positions ``mu_i``: ``mu_i - 1`` is the number of parts of
    ``alpha`` that are at least ``beta_i`` (so ``alpha_{mu_i} < beta_i <=
    alpha_{mu_i - 1}`` with ``alpha_0 = inf`` and ``alpha_{n+1} = 0``).
    """
    _check_prime(p)
    alpha, beta = partition(alpha), partition(beta)
    if not contains(alpha, beta):
        return 0
    if not beta or beta == alpha:
        return 1
    n, m = len(alpha), len(beta)
    mu = [1 + sum(1 for a in alpha if a >= b) for b in beta]
    runs = [mult for _, mult in multiplicity_form(beta)]

    twice_h = (
        2 * sum((mu[i] - 2 * (i + 1)) * (beta[i] - 1) for i in range(m))
        + sum(r * r for r in runs)
        - m * m
        + 2 * sum(sum(alpha[eta - 1] for eta in range(mu_i, n + 1)) for mu_i in mu)
    )
    h = exact_div(twice_h, 2)
    num = prod(p ** (mu[i] - (i + 1)) - 1 for i in range(m))
    den = prod(p**nu - 1 for r in runs for nu in range(1, r + 1))
    if h < 0:
        raise ArithmeticError(f"negative p-exponent for alpha={alpha}, beta={beta}")
    return exact_div(p**h * num, den)


def birkhoff_term(p: int, a: Partition, b: Partition) -> int:
    """``prod_i [a_i - b_{i+1}, b_i - b_{i+1}]_p * p^{(a_i - b_i) b_{i+1}}`` over conjugate parts."""
    out = 1
    for i in range(len(a)):
        bi = b[i] if i < len(b) else 0
        bn = b[i + 1] if i + 1 < len(b) else 0
        out *= gaussian_binomial(a[i] - bn, bi - bn, p) * p ** ((a[i] - bi) * bn)
        if not out:
            return 0
    return out


def count_subgroups_of_order(p: int, alpha: Partition, r: int) -> int:
    """Number of subgroups of order ``p^r``, summed over types with conjugate partitions."""
    _check_prime(p)
    alpha = partition(alpha)
    if r < 0 or r > weight(alpha):
        return 0
    a = conjugate(alpha)
    return sum(birkhoff_term(p, a, conjugate(beta)) for beta in sub_partitions(alpha, r))


def count_subgroups_with_quotient(p: int, alpha: Partition, beta: Partition) -> int:
    """Subgroups ``K`` of a group of type ``alpha`` with quotient of type ``beta``.

    Equal to the number of subgroups of type ``beta`` by duality.
    """
    return count_subgroups_of_type(p, alpha, beta)


def reduced_ambient(p: int, alpha: Partition, beta: Partition) -> Partition:
    _check_prime(p)
    return reduce_ambient(alpha, beta)


@dataclass(frozen=True)
class TwoBlockType:
    """The type ``(a1^n1, a2^n2)``; ``n2 = 0`` (with ``a2 = 0``) gives a rectangle."""

    a1: int
    n1: int
    a2: int = 0
    n2: int = 0

    def __post_init__(self):
        if not (self.a1 > self.a2 >= 0 and self.n1 >= 1 and self.n2 >= 0):
            raise ValueError(f"invalid two-block type {self}")
        if (self.n2 == 0) != (self.a2 == 0):
            raise ValueError("a2 must be 0 exactly when n2 is 0")

    @property
    def partition(self) -> Partition:
        return (self.a1,) * self.n1 + (self.a2,) * self.n2

    @classmethod
    def from_partition(cls, alpha: Partition) -> TwoBlockType | None:
        """The two-block form of ``alpha``, or ``None`` if it has three or more distinct parts."""
        runs = multiplicity_form(partition(alpha))
        if len(runs) == 1:
            return cls(runs[0][0], runs[0][1])
        if len(runs) == 2:
            return cls(runs[0][0], runs[0][1], runs[1][0], runs[1][1])
        return None


def _order_exactly(p: int, s: int, n: int) -> int:
    """Elements of order exactly ``p^s`` in ``Z_{p^a}^n`` (any ``a >= s``)."""
    if n == 0:
        return int(s == 0)
    return 1 if s == 0 else p ** (s * n) - p ** ((s - 1) * n)


def cyclic_quotient_counts(p: int, ambient: TwoBlockType, s: int) -> dict[Partition, int]:
    """Quotient type -> number of cyclic subgroups of order ``p^s`` with that quotient.

    Write a generator as ``(u1, u2)`` over the two blocks, with orders
    ``p^s1`` and ``p^s2`` and ``s = max(s1, s2)``.  Generators with ``s1 = s``
    and ``s2 < s`` split further by ``s2``; each value of ``s2`` fixes the
    quotient.  Those with ``s2 = s`` all share one quotient type.
    """
    _check_prime(p)
    a1, n1, a2, n2 = ambient.a1, ambient.n1, ambient.a2, ambient.n2
    if not 1 <= s <= a1:
        raise ValueError(f"s must satisfy 1 <= s <= a1={a1}")
    counts: dict[Partition, int] = {}
    first_block = exact_div(p**n1 - 1, p - 1) * p ** ((s - 1) * (n1 - 1))

    # s1 = s, s2 < s
    for s2 in range(0, min(s - 1, a2) + 1):
        if n2 == 0:
            shape = normalize([a1] * (n1 - 1) + [a1 - s])
        else:
            small = min(a1 - s, a2 - s2)
            shape = normalize([a1] * (n1 - 1) + [a2] * (n2 - 1) + [small, a1 + a2 - s - small])
        counts[shape] = counts.get(shape, 0) + first_block * _order_exactly(p, s2, n2)

    # s2 = s, s1 <= s
    if n2 and s <= a2:
        shape = normalize([a1] * n1 + [a2] * (n2 - 1) + [a2 - s])
        value = exact_div(p**n2 - 1, p - 1) * p ** ((s - 1) * (n2 - 1) + s * n1)
        counts[shape] = counts.get(shape, 0) + value
    return counts


def count_cyclic_with_quotient(p: int, ambient: TwoBlockType, s: int, beta) -> int:
    """Cyclic subgroups of order ``p^s`` in ``(a1^n1, a2^n2)`` whose quotient has type ``beta``."""
    if s > ambient.a1:
        raise ValueError(f"s={s} exceeds a1={ambient.a1}")
    return cyclic_quotient_counts(p, ambient, s).get(normalize(beta), 0)


def cyclic_first_case_total(p: int, ambient: TwoBlockType, s: int) -> int:
    """``(p^n1 - 1)/(p - 1) * p^{(s-1)(n1+n2-1)}``: generators whose first block has order ``p^s``.

    Valid as a count when ``s - 1 <= a2`` (or ``n2 = 0``); it is the sum of
    :func:`cyclic_quotient_counts` over the quotient shapes of that case.
    """
    return exact_div(p**ambient.n1 - 1, p - 1) * p ** ((s - 1) * (ambient.n1 + ambient.n2 - 1))


def triple_budget(p: int) -> int:
    return DEFAULT_TRIPLE_BUDGET.get(p, FALLBACK_TRIPLE_BUDGET)


def resolve_triple(
    p: int, alpha: Partition, beta: Partition, gamma: Partition, budget: int | None = None
) -> tuple[int, str]:
    """``(count, method)`` for subgroups of type ``beta`` with quotient type ``gamma``."""
    _check_prime(p)
    alpha, beta, gamma = partition(alpha), partition(beta), partition(gamma)
    if (
        not contains(alpha, beta)
        or not contains(alpha, gamma)
        or weight(beta) + weight(gamma) != weight(alpha)
    ):
        return 0, CLOSED_FORM
    if not beta:
        return int(gamma == alpha), CLOSED_FORM
    if beta == alpha:
        return int(not gamma), CLOSED_FORM
    if len(beta) == 1:
        ambient = TwoBlockType.from_partition(alpha)
        if ambient is not None:
            return count_cyclic_with_quotient(p, ambient, beta[0], gamma), CLOSED_FORM

    from .oracle import count_triple_oracle

    if budget is None:
        budget = triple_budget(p)
    return count_triple_oracle(p, alpha, beta, gamma, budget=budget), ORACLE


def count_triple(
    p: int, alpha: Partition, beta: Partition, gamma: Partition, budget: int | None = None
) -> int:
    return resolve_triple(p, alpha, beta, gamma, budget)[0]

"""Counts of typical abelian coverings of a Cayley graph ``Cay(B, Y)``.

Three query modes:

* fixed covering transformation group ``F`` (:func:`count_with_kernel`),
* fixed ``F`` and fixed total group ``A`` (:func:`count_with_group_and_kernel`),
* fixed number of folds ``q`` (:func:`count_q_fold`).

Each count is a product of one factor per prime.  Inverse pairs of
generators contribute ``l`` free coordinates at every prime; involutions only
matter at ``p = 2``, where they enter through ``l_0``, the dimension of the
space of relations among the involutions mod 2.  At an odd prime the
involution coordinates are killed by ``(R_0 + R)/R`` and do not contribute.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import prod

from sympy import factorint

from .cayley import CayleySpec, b_type, relation_data, valence
from .counting import (
    CLOSED_FORM,
    ORACLE,
    exact_div,
    gaussian_binomial,
    resolve_triple,
)
from .oracle import DEFAULT_COVERING_BUDGET, count_primary_covering_subgroups
from .partitions import (
    GroupType,
    Partition,
    complement,
    contains,
    multiplicity_form,
    partitions_of,
    rectangle,
)


class OrderMismatch(ValueError):
    """``|A| != |B| * |F|``."""


class NonCyclicKernel(ValueError):
    pass


@dataclass(frozen=True)
class PrimeFactor:
    prime: int
    value: int
    method: str

    def to_json(self) -> dict:
        return {"prime": self.prime, "factor": str(self.value), "method": self.method}


@dataclass(frozen=True)
class CoverQuery:
    """One covering-count question; the populated fields select the mode."""

    spec: CayleySpec
    kernel_type: GroupType | None = None
    total_type: GroupType | None = None
    folds: int | None = None

    def __post_init__(self):
        if self.kernel_type is not None:
            object.__setattr__(self, "kernel_type", GroupType(self.kernel_type))
        if self.total_type is not None:
            object.__setattr__(self, "total_type", GroupType(self.total_type))
        self.mode  # validates

    @property
    def mode(self) -> str:
        if self.folds is not None:
            if self.kernel_type is not None or self.total_type is not None:
                raise ValueError("folds cannot be combined with kernel or total types")
            if self.folds < 1:
                raise ValueError("folds must be positive")
            return "folds"
        if self.kernel_type is None:
            raise ValueError("a query needs a kernel type or a fold count")
        if self.total_type is None:
            return "kernel"
        if self.total_type.order != self.spec.order * self.kernel_type.order:
            raise OrderMismatch(
                f"|A|={self.total_type.order} but |B|*|F|={self.spec.order * self.kernel_type.order}"
            )
        return "kernel+total"


def _involution_rank(spec: CayleySpec) -> int:
    return relation_data(spec).l0


def _negative_exponent_guard(*exponents: int) -> bool:
    return any(e < 0 for e in exponents)


def _two_part_with_kernel(l: int, l0: int, beta: Partition) -> int:
    """Coverings' 2-part for kernel 2-type ``beta``: subgroups of type ``beta`` in ``(b1^l, 1^l0)``."""
    m = len(beta)
    m_big = sum(1 for b in beta if b > 1)
    exps = [l + 1 - i for i in range(1, m_big + 1)] + [l + l0 + 1 - j for j in range(m_big + 1, m + 1)]
    if _negative_exponent_guard(*exps):
        return 0
    num = prod(2**e - 1 for e in exps)
    if num == 0:
        return 0
    runs = [r for _, r in multiplicity_form(beta)]
    twice_h = (
        2 * sum((l + 1 - 2 * i) * (beta[i - 1] - 1) for i in range(1, m_big + 1))
        + sum(r * r for r in runs)
        - m * m
        + 2 * l0 * m_big
    )
    h = exact_div(twice_h, 2)
    den = prod(2**nu - 1 for r in runs for nu in range(1, r + 1))
    if h < 0:
        raise ArithmeticError(f"negative exponent for beta={beta}, l={l}, l0={l0}")
    return exact_div(2**h * num, den)


def _odd_part_with_kernel(p: int, rank: int, beta: Partition) -> int:
    """Subgroups of type ``beta`` in ``Z_{p^{beta_1}}^rank``."""
    m = len(beta)
    if m > rank:
        return 0
    num = prod(p ** (rank + 1 - i) - 1 for i in range(1, m + 1))
    runs = [r for _, r in multiplicity_form(beta)]
    twice_h = (
        2 * sum((rank + 1 - 2 * i) * (beta[i - 1] - 1) for i in range(1, m + 1))
        + sum(r * r for r in runs)
        - m * m
    )
    h = exact_div(twice_h, 2)
    den = prod(p**nu - 1 for r in runs for nu in range(1, r + 1))
    if h < 0:
        raise ArithmeticError(f"negative exponent for beta={beta}, rank={rank}")
    return exact_div(p**h * num, den)


def factors_with_kernel(spec: CayleySpec, kernel_type) -> list[PrimeFactor]:
    kernel_type = GroupType(kernel_type)
    l, l0 = spec.l, _involution_rank(spec)
    out = []
    for p in kernel_type.primes:
        beta = kernel_type[p]
        if p == 2:
            value = _two_part_with_kernel(l, l0, beta)
        else:
            value = _odd_part_with_kernel(p, l, beta)
        out.append(PrimeFactor(p, value, CLOSED_FORM))
    return out


def count_with_kernel(spec: CayleySpec, kernel_type) -> int:
    """Typical coverings of ``spec`` whose covering transformation group has type ``kernel_type``."""
    return prod(f.value for f in factors_with_kernel(spec, kernel_type))


def factors_with_group_and_kernel(
    spec: CayleySpec, kernel_type, total_type, budget: int = DEFAULT_COVERING_BUDGET
) -> list[PrimeFactor]:
    query = CoverQuery(spec, kernel_type, total_type)
    kernel_type, total_type = query.kernel_type, query.total_type
    base = b_type(spec)
    l = spec.l
    primes = sorted(set(kernel_type.primes) | set(base.primes))
    out = []
    for p in primes:
        alpha, beta, gamma = base.get(p, ()), kernel_type.get(p, ()), total_type.get(p, ())
        if not beta:
            out.append(PrimeFactor(p, int(gamma == alpha), CLOSED_FORM))
            continue
        if p == 2:
            # no closed form: count subgroups of the 2-part directly
            value = count_primary_covering_subgroups(spec, 2, beta, gamma, budget=budget)
            out.append(PrimeFactor(p, value, ORACLE))
            continue
        if not alpha:
            value = _odd_part_with_kernel(p, l, beta) if gamma == beta else 0
            out.append(PrimeFactor(p, value, CLOSED_FORM))
            continue
        k = alpha[0] + beta[0]
        box = rectangle(k, l)
        if not contains(box, gamma):
            out.append(PrimeFactor(p, 0, CLOSED_FORM))
            continue
        value, method = resolve_triple(p, complement(k, l, alpha), complement(k, l, gamma), beta)
        out.append(PrimeFactor(p, value, method))
    return out


def count_with_group_and_kernel(
    spec: CayleySpec, kernel_type, total_type, budget: int = DEFAULT_COVERING_BUDGET
) -> int:
    """Typical coverings with covering transformation group ``kernel_type`` and total group ``total_type``.

    Zero when ``|A| != |B| * |F|``: no such covering exists.
    """
    if GroupType(total_type).order != spec.order * GroupType(kernel_type).order:
        return 0
    return prod(f.value for f in factors_with_group_and_kernel(spec, kernel_type, total_type, budget))


def _stehling_sum(p: int, s: int, first: int, rest: int, lowest_k: int) -> int:
    """Sum over partitions ``beta`` of ``s`` with largest part ``k >= lowest_k`` of
    the number of subgroups of type ``beta`` in the group with conjugate type
    ``(first, rest, ..., rest)`` (``k`` entries).

    ``b`` runs over the conjugate of ``beta``: ``b_1 >= ... >= b_k >= 1``.
    """
    total = 0
    for k in range(max(lowest_k, 1), s + 1):
        a = (first,) + (rest,) * (k - 1)
        for b in partitions_of(s):
            if len(b) != k or b[0] > first or (k > 1 and b[1] > rest):
                continue
            term = 1
            for i in range(k):
                bn = b[i + 1] if i + 1 < k else 0
                term *= gaussian_binomial(a[i] - bn, b[i] - bn, p) * p ** ((a[i] - b[i]) * bn)
                if not term:
                    break
            total += term
    return total


def _ceil_div(a: int, b: int) -> int:
    return -(-a // b)


def factors_q_fold(spec: CayleySpec, folds: int) -> list[PrimeFactor]:
    if folds < 1:
        raise ValueError("folds must be positive")
    l, l0 = spec.l, _involution_rank(spec)
    out = []
    for p, s in sorted(factorint(folds).items()):
        p, s = int(p), int(s)
        if p == 2:
            if l == 0:
                value = _stehling_sum(2, s, l0, 0, 1) if s <= l0 else 0
            else:
                value = _stehling_sum(2, s, l + l0, l, _ceil_div(s - l0, l))
        else:
            value = _stehling_sum(p, s, l, l, _ceil_div(s, l)) if l else 0
        out.append(PrimeFactor(p, value, CLOSED_FORM))
    return out


def count_q_fold(spec: CayleySpec, folds: int) -> int:
    """Number of ``folds``-fold typical abelian coverings of ``spec``."""
    return prod(f.value for f in factors_q_fold(spec, folds))


def _cyclic_kernel_exponents(kernel_type: GroupType) -> dict[int, int]:
    if not kernel_type.is_cyclic():
        raise NonCyclicKernel(f"kernel {kernel_type} is not cyclic")
    return {p: kernel_type[p][0] for p in kernel_type.primes}


def count_cyclic_kernel(spec: CayleySpec, kernel_type) -> int:
    """Coverings with cyclic covering transformation group ``Z_f``, from per-prime closed forms."""
    exps = _cyclic_kernel_exponents(GroupType(kernel_type))
    l, l0 = spec.l, _involution_rank(spec)
    out = 1
    for p, b in exps.items():
        if p == 2:
            if b > 1:
                out *= 0 if l == 0 else 2 ** ((l - 1) * (b - 1) + l0) * (2**l - 1)
            else:
                out *= 2 ** (l + l0) - 1
        else:
            out *= 0 if l == 0 else p ** ((l - 1) * (b - 1)) * exact_div(p**l - 1, p - 1)
    return out


def count_circulant(spec: CayleySpec, kernel_type) -> int:
    """Coverings by a cyclic total group of a circulant graph, with cyclic kernel ``Z_f``.

    Zero when the valence is odd and ``f`` is even.
    """
    base = b_type(spec)
    if not base.is_cyclic():
        raise ValueError("base group must be cyclic")
    exps = _cyclic_kernel_exponents(GroupType(kernel_type))
    d = valence(spec)
    half = d // 2
    if d % 2 and exps.get(2, 0) >= 1:
        return 0
    out = 1
    for p, b in exps.items():
        if p in base:
            out *= p ** (b * (half - 1))
        else:
            out *= 0 if half == 0 else p ** ((b - 1) * (half - 1)) * exact_div(p**half - 1, p - 1)
    return out


def total_group_forced_cyclic(spec: CayleySpec, kernel_type) -> bool:
    """True when every covering of a circulant ``spec`` by ``kernel_type`` has a cyclic total group.

    Holds when the total group is generated by one element and involutions
    that cannot enlarge its 2-part: ``l = 0``, or ``l = 1`` and either no
    involution or ``|F|`` odd.
    """
    if not b_type(spec).is_cyclic():
        return False
    odd_kernel = GroupType(kernel_type).order % 2 == 1
    return spec.l == 0 or (spec.l == 1 and (spec.l_prime == 0 or odd_kernel))


def count_cyclic_circulant(spec: CayleySpec, kernel_type) -> int:
    """Cyclic-kernel count, cross-checked against the cyclic-total-group count where they must agree."""
    value = count_cyclic_kernel(spec, kernel_type)
    if total_group_forced_cyclic(spec, kernel_type):
        other = count_circulant(spec, kernel_type)
        if other != value:
            raise ArithmeticError(f"cyclic reductions disagree: {value} != {other}")
    return value


def count_coverings(query: CoverQuery, budget: int = DEFAULT_COVERING_BUDGET) -> tuple[int, list[PrimeFactor]]:
    """Dispatch on the query mode; returns ``(count, per-prime factors)``."""
    mode = query.mode
    if mode == "folds":
        factors = factors_q_fold(query.spec, query.folds)
    elif mode == "kernel":
        factors = factors_with_kernel(query.spec, query.kernel_type)
    else:
        factors = factors_with_group_and_kernel(query.spec, query.kernel_type, query.total_type, budget)
    return prod(f.value for f in factors), factors

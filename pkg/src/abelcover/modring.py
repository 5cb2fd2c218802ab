"""Linear algebra over ``Z_{p^k}`` and over the integers.

``canonical_form`` brings a generating matrix of a subgroup of
``Z_{p^k}^n`` to the shape ``<P Q>`` with ``P`` diagonal in powers of ``p``
and ``Q`` invertible, which reads off the subgroup's type.
``integer_kernel`` computes relation lattices of maps ``Z^r -> prod Z_{n_j}``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from sympy import isprime

from .partitions import Partition, complement, contains, rectangle


@dataclass(frozen=True)
class PModMatrix:
    """Matrix over ``Z_{p^k}``; entries are kept reduced to ``[0, p^k)``."""

    p: int
    k: int
    rows: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if not isprime(self.p):
            raise ValueError(f"{self.p} is not prime")
        if self.k < 1:
            raise ValueError("k must be positive")
        rows = tuple(tuple(int(x) % self.modulus for x in row) for row in self.rows)
        if not rows or not rows[0]:
            raise ValueError("matrix must have at least one row and one column")
        if any(len(r) != len(rows[0]) for r in rows):
            raise ValueError("ragged matrix")
        object.__setattr__(self, "rows", rows)

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]], p: int, k: int) -> PModMatrix:
        return cls(p, k, tuple(tuple(r) for r in rows))

    @classmethod
    def identity(cls, n: int, p: int, k: int) -> PModMatrix:
        return cls(p, k, tuple(tuple(int(i == j) for j in range(n)) for i in range(n)))

    @property
    def modulus(self) -> int:
        return self.p**self.k

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0])

    def __matmul__(self, other: PModMatrix) -> PModMatrix:
        if (self.p, self.k) != (other.p, other.k):
            raise ValueError("matrices live over different rings")
        cols = list(zip(*other.rows))
        return PModMatrix(
            self.p, self.k,
            tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in cols) for row in self.rows),
        )

    def to_json(self) -> dict:
        return {"p": self.p, "k": self.k, "rows": [list(r) for r in self.rows]}


def p_degree(lam: int, p: int, k: int) -> float:
    """Exponent ``i`` with ``lam = p^i * unit`` in ``Z_{p^k}``; ``math.inf`` for zero."""
    lam %= p**k
    if lam == 0:
        return math.inf
    i = 0
    while lam % p == 0:
        lam //= p
        i += 1
    return i


@dataclass(frozen=True)
class CanonicalSubgroupForm:
    """``<M> = <P Q>``; ``p_matrix`` is ``None`` when the subgroup is trivial."""

    beta: Partition
    q: PModMatrix
    p_matrix: PModMatrix | None

    def generators(self) -> PModMatrix | None:
        return None if self.p_matrix is None else self.p_matrix @ self.q


def canonical_form(m: PModMatrix) -> CanonicalSubgroupForm:
    """Diagonalise ``m`` by pivoting on entries of least p-degree.

    Each step picks the entry of smallest p-degree in the remaining minor
    (ties broken by smallest ``(row, column)``), moves it to the pivot, clears
    its row and column and scales the pivot row by the inverse unit.  Column
    operations are recorded as their inverses in ``q``.
    """
    p, k = m.p, m.k
    mod = m.modulus
    a = [list(r) for r in m.rows]
    rows, cols = m.shape
    q = [[int(i == j) for j in range(cols)] for i in range(cols)]
    degrees: list[int] = []

    for t in range(min(rows, cols)):
        best = None
        for i in range(t, rows):
            for j in range(t, cols):
                d = p_degree(a[i][j], p, k)
                if d != math.inf and (best is None or d < best[0]):
                    best = (d, i, j)
        if best is None:
            break
        d, i0, j0 = best
        a[t], a[i0] = a[i0], a[t]
        if j0 != t:
            for row in a:
                row[t], row[j0] = row[j0], row[t]
            q[t], q[j0] = q[j0], q[t]
        unit = a[t][t] // p**d
        inv = pow(unit, -1, mod)
        a[t] = [x * inv % mod for x in a[t]]
        pivot = p**d
        for i in range(t + 1, rows):
            c = a[i][t] // pivot
            if c:
                a[i] = [(x - c * y) % mod for x, y in zip(a[i], a[t])]
        for j in range(t + 1, cols):
            c = a[t][j] // pivot
            if c:
                # column j -= c * column t; its inverse adds c * row j to row t of q
                for row in a:
                    row[j] = (row[j] - c * row[t]) % mod
                q[t] = [(x + c * y) % mod for x, y in zip(q[t], q[j])]
        degrees.append(d)

    q_matrix = PModMatrix(p, k, tuple(map(tuple, q)))
    if not degrees:
        return CanonicalSubgroupForm((), q_matrix, None)
    beta = tuple(k - s for s in degrees)
    p_rows = tuple(
        tuple(p ** (k - b) if i == j else 0 for j in range(cols)) for i, b in enumerate(beta)
    )
    return CanonicalSubgroupForm(beta, q_matrix, PModMatrix(p, k, p_rows))


def subgroup_type_mod(m: PModMatrix) -> Partition:
    return canonical_form(m).beta


def quotient_type_mod(beta: Partition, k: int, n: int) -> Partition:
    """Type of ``Z_{p^k}^n / K`` for any ``K`` of type ``beta``."""
    if not contains(rectangle(k, n), beta):
        raise ValueError(f"{beta} does not fit in {k}^{n}")
    return complement(k, n, beta)


def determinant_mod(q: PModMatrix) -> int:
    """Determinant over ``Z_{p^k}`` by fraction-free (Bareiss) elimination over Z."""
    n, m = q.shape
    if n != m:
        raise ValueError("determinant needs a square matrix")
    a = [list(r) for r in q.rows]
    sign, prev = 1, 1
    for t in range(n - 1):
        if a[t][t] == 0:
            swap = next((i for i in range(t + 1, n) if a[i][t]), None)
            if swap is None:
                return 0
            a[t], a[swap] = a[swap], a[t]
            sign = -sign
        for i in range(t + 1, n):
            for j in range(t + 1, n):
                a[i][j] = (a[i][j] * a[t][t] - a[i][t] * a[t][j]) // prev
        prev = a[t][t]
    return sign * a[-1][-1] % q.modulus


def invertible_check(q: PModMatrix) -> bool:
    return p_degree(determinant_mod(q), q.p, q.k) == 0


# --- integer lattices ------------------------------------------------------


def hermite_rows(rows: Sequence[Sequence[int]], ncols: int | None = None) -> list[list[int]]:
    """Row-style Hermite normal form of the lattice spanned by ``rows``.

    Upper triangular, positive pivots, entries above each pivot reduced into
    ``[0, pivot)``; zero rows dropped.
    """
    a = [list(map(int, r)) for r in rows]
    if ncols is None:
        ncols = len(a[0]) if a else 0
    out: list[list[int]] = []
    for col in range(ncols):
        live = [r for r in a if r[col] != 0]
        rest = [r for r in a if r[col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[col]))
            head = live[0]
            nxt = [head]
            for r in live[1:]:
                c = r[col] // head[col]
                r = [x - c * y for x, y in zip(r, head)]
                (nxt if r[col] else rest).append(r)
            live = nxt
        if live:
            head = live[0]
            if head[col] < 0:
                head = [-x for x in head]
            out.append(head)
        a = rest
    for i, row in enumerate(out):
        col = next(j for j, x in enumerate(row) if x)
        for above in range(i):
            c = out[above][col] // row[col]
            if c:
                out[above] = [x - c * y for x, y in zip(out[above], row)]
    return out


@dataclass(frozen=True)
class IntLattice:
    """Sublattice of ``Z^rank`` given by generator rows."""

    rank: int
    basis: tuple[tuple[int, ...], ...]

    @classmethod
    def from_generators(cls, rank: int, rows) -> IntLattice:
        return cls(rank, tuple(map(tuple, hermite_rows(list(rows), rank))))

    @property
    def is_full_rank(self) -> bool:
        return len(self.basis) == self.rank

    def index(self) -> int:
        """``[Z^rank : L]``; ``math.inf`` if the lattice is not of full rank."""
        if not self.is_full_rank:
            return math.inf
        return abs(math.prod(self.basis[i][i] for i in range(self.rank)))

    def __contains__(self, v) -> bool:
        v = [int(x) for x in v]
        for row in hermite_rows(self.basis, self.rank):
            col = next(j for j, x in enumerate(row) if x)
            if v[col] % row[col]:
                return False
            c = v[col] // row[col]
            v = [x - c * y for x, y in zip(v, row)]
        return not any(v)

    def to_json(self) -> dict:
        return {"rank": self.rank, "basis": [list(r) for r in self.basis]}


def integer_kernel(map_matrix: Sequence[Sequence[int]], target_orders: Sequence[int]) -> IntLattice:
    """``{a in Z^r : a . map_matrix = 0 mod target_orders}``, basis in Hermite form.

    ``map_matrix`` has one row per generator of ``Z^r`` and one column per
    cyclic factor of the target.
    """
    orders = [int(n) for n in target_orders]
    if not orders:
        raise ValueError("target must have at least one cyclic factor")
    rank = len(map_matrix)
    t = len(orders)
    if any(len(row) != t for row in map_matrix):
        raise ValueError("map_matrix columns must match target_orders")
    augmented = [list(row) + [int(i == j) for j in range(rank)] for i, row in enumerate(map_matrix)]
    augmented += [[n if j == i else 0 for j in range(t)] + [0] * rank for i, n in enumerate(orders)]
    reduced = hermite_rows(augmented, t + rank)
    kernel = [row[t:] for row in reduced if not any(row[:t])]
    return IntLattice(rank, tuple(map(tuple, kernel)))


def rank_gf2(rows: Sequence[Sequence[int]]) -> int:
    """Rank over the two-element field of a 0/1 matrix."""
    pivots: dict[int, int] = {}
    rank = 0
    for row in rows:
        v = sum((int(x) & 1) << i for i, x in enumerate(row))
        while v:
            top = v.bit_length() - 1
            if top not in pivots:
                pivots[top] = v
                rank += 1
                break
            v ^= pivots[top]
    return rank


__all__ = [
    "PModMatrix", "p_degree", "CanonicalSubgroupForm", "canonical_form", "subgroup_type_mod",
    "quotient_type_mod", "determinant_mod", "invertible_check", "hermite_rows", "IntLattice",
    "integer_kernel", "rank_gf2",
]

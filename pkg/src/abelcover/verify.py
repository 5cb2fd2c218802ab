"""Formula-versus-oracle checks shared by the CLI and the acceptance tests.

Each ``check_*`` function runs one family of identities and returns a
:class:`CheckReport`.  A check passes when every identity holds and the run
finished within its time limit.
"""

from __future__ import annotations

import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import product

import numpy as np
from sympy import isprime

from .cayley import CayleySpec, b_type, valence
from .counting import (
    TwoBlockType,
    count_cyclic_with_quotient,
    count_subgroups_of_order,
    count_subgroups_of_type,
)
from .covercount import (
    count_circulant,
    count_cyclic_kernel,
    count_q_fold,
    count_with_group_and_kernel,
    count_with_kernel,
    total_group_forced_cyclic,
)
from .fixtures import fixture_specs
from .modring import PModMatrix, canonical_form, invertible_check
from .oracle import (
    DEFAULT_COVERING_BUDGET,
    BudgetExceeded,
    ConcreteGroup,
    build_and_verify_covering,
    classify_type,
    count_subgroups_of_order_oracle,
    count_subgroups_oracle,
    count_triple_oracle,
    covering_census,
    cyclic_census,
    enumerate_subgroups,
    quotient_group_type,
)
from .partitions import complement, group_types_of_order, partitions_of, sub_partitions, weight

MAX_REPORTED_FAILURES = 5
LITERAL_QUOTIENT_BOUND = 4096
DEFAULT_QUOTIENT_BOUND = 64


@dataclass
class CheckReport:
    number: int
    title: str
    limit: float | None = None
    checked: int = 0
    failures: list[str] = field(default_factory=list)
    aborted: str | None = None
    elapsed: float = 0.0

    @property
    def passed(self) -> bool:
        in_time = self.limit is None or self.elapsed <= self.limit
        return not self.failures and self.aborted is None and in_time

    def expect(self, ok: bool, describe) -> None:
        self.checked += 1
        if not ok:
            self.failures.append(describe() if callable(describe) else str(describe))

    def line(self, timing: bool = False) -> str:
        status = "PASS" if self.passed else "FAIL"
        text = f"{status} criterion {self.number}: {self.title} ({self.checked} identities"
        if timing:
            text += f", {self.elapsed:.1f}s"
            if self.limit is not None:
                text += f" of {self.limit:.0f}s allowed"
        text += ")"
        if self.failures:
            shown = "; ".join(self.failures[:MAX_REPORTED_FAILURES])
            more = len(self.failures) - MAX_REPORTED_FAILURES
            text += f"; counterexamples: {shown}" + (f" (+{more} more)" if more > 0 else "")
        if self.aborted:
            text += f"; aborted: {self.aborted}"
        if not timing and self.limit is not None and self.elapsed > self.limit:
            text += "; over time limit"
        return text


class _timed:
    def __init__(self, report: CheckReport):
        self.report = report

    def __enter__(self):
        self.start = time.monotonic()
        return self.report

    def __exit__(self, *exc):
        self.report.elapsed = time.monotonic() - self.start
        return False


def _small_partitions(max_weight: int = 5):
    for w in range(max_weight + 1):
        yield from partitions_of(w)


PRIMES = (2, 3)


def check_type_counts() -> CheckReport:
    report = CheckReport(1, "subgroup counts by type match the oracle", limit=120)
    with _timed(report):
        for p, alpha in product(PRIMES, _small_partitions()):
            for beta in sub_partitions(alpha):
                got, want = count_subgroups_of_type(p, alpha, beta), count_subgroups_oracle(p, alpha, beta)
                report.expect(got == want, lambda: f"p={p} alpha={alpha} beta={beta}: {got} != {want}")
    return report


def check_order_counts() -> CheckReport:
    report = CheckReport(2, "subgroup counts by order match the oracle and the sum over types", limit=60)
    with _timed(report):
        for p, alpha in product(PRIMES, _small_partitions()):
            for r in range(weight(alpha) + 1):
                got = count_subgroups_of_order(p, alpha, r)
                want = count_subgroups_of_order_oracle(p, alpha, r)
                by_type = sum(count_subgroups_of_type(p, alpha, b) for b in sub_partitions(alpha, r))
                report.expect(
                    got == want == by_type,
                    lambda: f"p={p} alpha={alpha} r={r}: {got}, oracle {want}, by type {by_type}",
                )
    return report


def check_hall_duality() -> CheckReport:
    report = CheckReport(3, "triple counts are symmetric in subgroup and quotient type", limit=180)
    with _timed(report):
        for p, alpha in product(PRIMES, _small_partitions()):
            subs = list(sub_partitions(alpha))
            for beta, gamma in product(subs, subs):
                a = count_triple_oracle(p, alpha, beta, gamma)
                b = count_triple_oracle(p, alpha, gamma, beta)
                report.expect(a == b, lambda: f"p={p} alpha={alpha} ({beta},{gamma}): {a} != {b}")
    return report


def two_block_types(max_a1: int = 3, max_n: int = 2):
    for a1 in range(1, max_a1 + 1):
        for n1 in range(1, max_n + 1):
            yield TwoBlockType(a1, n1)
            for a2, n2 in product(range(1, a1), range(1, max_n + 1)):
                yield TwoBlockType(a1, n1, a2, n2)


def check_cyclic_quotients() -> CheckReport:
    report = CheckReport(4, "cyclic-subgroup counts by quotient type match the oracle", limit=180)
    with _timed(report):
        for p, ambient in product(PRIMES, two_block_types()):
            alpha = ambient.partition
            census = cyclic_census(p, alpha)
            for s in range(1, ambient.a1 + 1):
                for gamma in sub_partitions(alpha):
                    got = count_cyclic_with_quotient(p, ambient, s, gamma)
                    want = census[(s, gamma)]
                    report.expect(got == want, lambda: f"p={p} alpha={alpha} s={s} quotient={gamma}: {got} != {want}")
    return report


def check_canonical_form(samples: int = 200, seed: int = 20240611) -> CheckReport:
    report = CheckReport(5, "canonical forms span the same subgroup with invertible Q", limit=60)
    rng = np.random.default_rng(seed)
    with _timed(report):
        for _ in range(samples):
            p = int(rng.choice(PRIMES))
            k, n, m = (int(x) for x in rng.integers(1, [3, 4, 4], endpoint=True))
            rows = rng.integers(0, p**k, size=(m, n))
            # sprinkle p-multiples so non-unit pivots occur
            rows = rows * p ** rng.integers(0, k + 1, size=(m, 1))
            mat = PModMatrix.from_rows(rows.tolist(), p, k)
            form = canonical_form(mat)
            g = ConcreteGroup([p**k] * n)
            span = g.generated(mat.rows)
            gens = form.generators()
            rebuilt = g.generated(gens.rows) if gens is not None else g.trivial()
            ok = rebuilt == span and invertible_check(form.q) and p ** weight(form.beta) == span.order
            report.expect(ok, lambda: f"p={p} k={k} rows={mat.rows}: type {form.beta}, span order {span.order}")
    return report


def quotient_typing_groups(bound: int):
    """``(p, k, n)`` with ``p^{kn} <= bound``, smallest groups first."""
    out = []
    for p in range(2, bound + 1):
        if not isprime(p):
            continue
        for k in range(1, bound.bit_length() + 1):
            for n in range(1, bound.bit_length() + 1):
                if p ** (k * n) <= bound:
                    out.append((p, k, n))
    return sorted(out, key=lambda t: (t[0] ** (t[1] * t[2]), t))


def check_quotient_typing(
    bound: int = LITERAL_QUOTIENT_BOUND, time_limit: float = 60, budget: int = LITERAL_QUOTIENT_BOUND
) -> CheckReport:
    report = CheckReport(
        6, f"quotient types of all subgroups of Z_(p^k)^n, p^(kn) <= {bound}, are complements", limit=time_limit
    )
    with _timed(report):
        deadline = time.monotonic() + time_limit
        groups = quotient_typing_groups(bound)
        for done, (p, k, n) in enumerate(groups):
            g = ConcreteGroup([p**k] * n)
            try:
                subgroups = enumerate_subgroups(g, budget=budget, deadline=deadline)
            except BudgetExceeded as exc:
                report.aborted = f"{exc}; finished {done} of {len(groups)} groups"
                break
            for h in subgroups:
                got = quotient_group_type(g, h).get(p, ())
                want = complement(k, n, classify_type(h).get(p, ()))
                report.expect(got == want, lambda: f"Z_{p**k}^{n}, subgroup of order {h.order}: {got} != {want}")
    return report


@dataclass
class CoveringSweep:
    """Everything the covering checks need from one pass over the fixtures."""

    specs: dict[str, CayleySpec]
    # (name, kernel type) -> Counter of total types over D
    kernel_census: dict = field(default_factory=dict)
    fold_counts: dict = field(default_factory=dict)
    subgroups: list = field(default_factory=list)


MAX_KERNEL_ORDER = 9
MAX_FOLDS = 16


def covering_sweep(budget: int = DEFAULT_COVERING_BUDGET) -> CoveringSweep:
    sweep = CoveringSweep(fixture_specs())
    seen = set()

    def keep(name, spec, d):
        key = (name, d.parent.factor_orders, d.key)
        if key not in seen:
            seen.add(key)
            sweep.subgroups.append((name, spec, d))

    for name, spec in sweep.specs.items():
        for f in range(1, MAX_KERNEL_ORDER + 1):
            for kt in group_types_of_order(f):
                _, entries = covering_census(spec, kernel_type=kt, budget=budget)
                totals = Counter()
                for e in entries:
                    if e.kernel_type == kt:
                        totals[e.total_type] += 1
                        keep(name, spec, e.d)
                sweep.kernel_census[(name, kt)] = totals
        for q in range(1, MAX_FOLDS + 1):
            _, entries = covering_census(spec, folds=q, budget=budget)
            hits = [e for e in entries if e.kernel_type.order == q]
            for e in hits:
                keep(name, spec, e.d)
            sweep.fold_counts[(name, q)] = len(hits)
    return sweep


def check_covering_counts(budget: int = DEFAULT_COVERING_BUDGET) -> tuple[CheckReport, CoveringSweep | None]:
    """Runs the fixture sweep (timed as part of this check) and compares counts."""
    report = CheckReport(7, "covering counts match enumerated covering subgroups", limit=600)
    with _timed(report):
        try:
            sweep = covering_sweep(budget)
        except BudgetExceeded as exc:
            report.aborted = str(exc)
            return report, None
        for (name, kt), totals in sweep.kernel_census.items():
            spec = sweep.specs[name]
            got, want = count_with_kernel(spec, kt), sum(totals.values())
            report.expect(got == want, lambda: f"{name} F={kt}: {got} != {want}")
            for at in sorted(set(group_types_of_order(spec.order * kt.order)) | set(totals), key=str):
                got, want = count_with_group_and_kernel(spec, kt, at), totals[at]
                report.expect(got == want, lambda: f"{name} F={kt} A={at}: {got} != {want}")
        for (name, q), want in sweep.fold_counts.items():
            got = count_q_fold(sweep.specs[name], q)
            report.expect(got == want, lambda: f"{name} q={q}: {got} != {want}")
    return report, sweep


def check_covering_construction(sweep: CoveringSweep | None) -> CheckReport:
    report = CheckReport(8, "every enumerated covering subgroup yields a valid regular covering", limit=120)
    with _timed(report):
        if sweep is None:
            report.aborted = "covering enumeration unavailable"
            return report
        for name, spec, d in sweep.subgroups:
            try:
                ok = build_and_verify_covering(spec, d)
            except Exception as exc:  # a violation is a failed identity, not a crash
                ok = False
                reason = f"{type(exc).__name__}: {exc}"
            else:
                reason = "covering checks failed"
            report.expect(ok, lambda: f"{name} D of order {d.order} in {d.parent!r}: {reason}")
    return report


def check_reductions(sweep: CoveringSweep | None) -> CheckReport:
    report = CheckReport(9, "cyclic-kernel and circulant reductions agree with the general counts")
    with _timed(report):
        if sweep is None:
            report.aborted = "covering enumeration unavailable"
            return report
        for (name, kt), totals in sweep.kernel_census.items():
            if not kt.is_cyclic():
                continue
            spec = sweep.specs[name]
            general = count_with_kernel(spec, kt)
            cyclic = count_cyclic_kernel(spec, kt)
            report.expect(cyclic == general, lambda: f"{name} F={kt}: cyclic-kernel {cyclic} != {general}")
            if not b_type(spec).is_cyclic():
                continue
            circ = count_circulant(spec, kt)
            cyclic_totals = sum(n for at, n in totals.items() if at.is_cyclic())
            report.expect(circ == cyclic_totals, lambda: f"{name} F={kt}: circulant {circ} != oracle {cyclic_totals}")
            if valence(spec) % 2 and kt.order % 2 == 0:
                report.expect(circ == 0, lambda: f"{name} F={kt}: odd valence, even kernel, got {circ}")
            elif total_group_forced_cyclic(spec, kt) or cyclic_totals == sum(totals.values()):
                report.expect(circ == general, lambda: f"{name} F={kt}: circulant {circ} != {general}")
    return report


def check_marginals(sweep: CoveringSweep | None) -> CheckReport:
    report = CheckReport(10, "summing over kernel and total types recovers the coarser counts")
    with _timed(report):
        specs = sweep.specs if sweep is not None else fixture_specs()
        for name, spec in specs.items():
            for q in range(1, MAX_FOLDS + 1):
                by_kernel = sum(count_with_kernel(spec, kt) for kt in group_types_of_order(q))
                folds = count_q_fold(spec, q)
                report.expect(by_kernel == folds, lambda: f"{name} q={q}: {by_kernel} != {folds}")
            for f in range(1, MAX_KERNEL_ORDER + 1):
                for kt in group_types_of_order(f):
                    by_total = sum(
                        count_with_group_and_kernel(spec, kt, at)
                        for at in group_types_of_order(spec.order * f)
                    )
                    direct = count_with_kernel(spec, kt)
                    report.expect(by_total == direct, lambda: f"{name} F={kt}: {by_total} != {direct}")
    return report


SUITES = {
    "formulas": (1, 2, 3, 4),
    "canonical-form": (5, 6),
    "coverings": (7, 8, 9, 10),
}
SUITES["all"] = tuple(sorted({n for v in SUITES.values() for n in v}))


def run_criteria(numbers, quotient_bound: int = LITERAL_QUOTIENT_BOUND, budget: int = DEFAULT_COVERING_BUDGET):
    """Run the numbered checks in order, yielding each report as it completes."""
    simple = {
        1: check_type_counts,
        2: check_order_counts,
        3: check_hall_duality,
        4: check_cyclic_quotients,
        5: check_canonical_form,
        6: lambda: check_quotient_typing(quotient_bound),
    }
    sweep = counts = None
    for n in numbers:
        if n in simple:
            yield simple[n]()
            continue
        if counts is None:
            counts, sweep = check_covering_counts(budget)
        if n == 7:
            yield counts
        elif n == 8:
            yield check_covering_construction(sweep)
        elif n == 9:
            yield check_reductions(sweep)
        elif n == 10:
            yield check_marginals(sweep)
        else:
            raise ValueError(f"no criterion {n}")

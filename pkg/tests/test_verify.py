from abelcover.verify import CheckReport, SUITES, quotient_typing_groups, run_criteria, two_block_types


def test_report_lines():
    r = CheckReport(3, "example", limit=1.0)
    r.expect(True, "unused")
    assert r.passed and r.line() == "PASS criterion 3: example (1 identities)"
    r.expect(False, lambda: "x != y")
    assert not r.passed and "counterexamples: x != y" in r.line()
    slow = CheckReport(4, "slow", limit=1.0, elapsed=2.0)
    assert not slow.passed and "over time limit" in slow.line()
    assert "2.0s of 1s allowed" in slow.line(timing=True)


def test_quotient_typing_groups_are_ordered_and_bounded():
    groups = quotient_typing_groups(64)
    sizes = [p ** (k * n) for p, k, n in groups]
    assert sizes == sorted(sizes) and max(sizes) <= 64
    assert (2, 1, 6) in groups and (7, 1, 2) in groups and (61, 1, 1) in groups
    assert len(quotient_typing_groups(4096)) > len(groups)


def test_two_block_range():
    shapes = {t.partition for t in two_block_types()}
    assert (3, 3, 2, 2) in shapes and (1,) in shapes and (3, 1) in shapes
    assert all(t.a1 <= 3 and t.n1 <= 2 and t.n2 <= 2 for t in two_block_types())


def test_suites_cover_every_criterion():
    assert SUITES["all"] == tuple(range(1, 11))


def test_small_quotient_bound_passes():
    (report,) = run_criteria([6], quotient_bound=32)
    assert report.passed and report.checked > 0

"""Small named Cayley graphs used by the verification suites and the CLI."""

from __future__ import annotations

from .cayley import CayleySpec, parse_and_validate

FIXTURES: dict[str, tuple[list[int], list[list[int]]]] = {
    "C3": ([3], [[1], [2]]),
    "C4": ([4], [[1], [3]]),
    "C5": ([5], [[1], [4]]),
    "C6": ([6], [[1], [5]]),
    "K2": ([2], [[1]]),
    "K4": ([2, 2], [[1, 0], [0, 1], [1, 1]]),
    "Z2xZ4": ([2, 4], [[0, 1], [0, 3], [1, 0]]),
    "Z12": ([12], [[1], [11], [6]]),
}


def fixture(name: str) -> CayleySpec:
    orders, generators = FIXTURES[name]
    return parse_and_validate(orders, generators)


def fixture_specs() -> dict[str, CayleySpec]:
    return {name: fixture(name) for name in FIXTURES}

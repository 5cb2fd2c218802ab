"""Exact counts of typical abelian coverings of Cayley graphs on finite abelian groups."""

from .cayley import CayleySpec, parse_and_validate
from .counting import count_subgroups_of_order, count_subgroups_of_type, count_triple
from .covercount import (
    CoverQuery,
    count_coverings,
    count_q_fold,
    count_with_group_and_kernel,
    count_with_kernel,
)
from .partitions import GroupType

__all__ = [
    "CayleySpec",
    "CoverQuery",
    "GroupType",
    "count_coverings",
    "count_q_fold",
    "count_subgroups_of_order",
    "count_subgroups_of_type",
    "count_triple",
    "count_with_group_and_kernel",
    "count_with_kernel",
    "parse_and_validate",
]

__version__ = "0.1.0"

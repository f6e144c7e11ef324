"""Multi-index helpers.

A multi-index is a plain tuple of nonnegative ints; functions here validate
and enumerate them.  Enumeration is graded (total degree, then lexicographic)
so that iteration orders, and therefore compensated summation orders, are
deterministic.
"""

from __future__ import annotations

from typing import Iterator, Sequence

from .errors import DimensionMismatch

MultiIndex = tuple[int, ...]


def as_multi_index(alpha: Sequence[int] | int, dimension: int) -> MultiIndex:
    """Coerce ``alpha`` to a validated multi-index of the given dimension."""
    if isinstance(alpha, int):
        alpha = (alpha,)
    idx = tuple(int(a) for a in alpha)
    if len(idx) != dimension:
        raise DimensionMismatch(f"multi-index {idx} does not have dimension {dimension}")
    if any(a < 0 for a in idx):
        raise ValueError(f"multi-index {idx} has negative entries")
    return idx


def total_degree(alpha: MultiIndex) -> int:
    return sum(alpha)


def indices_of_degree(dimension: int, degree: int) -> Iterator[MultiIndex]:
    """Yield all multi-indices of the exact total degree, lexicographically."""
    if dimension == 1:
        yield (degree,)
        return
    for head in range(degree, -1, -1):
        for tail in indices_of_degree(dimension - 1, degree - head):
            yield (head,) + tail


def indices_up_to(dimension: int, max_degree: int) -> Iterator[MultiIndex]:
    for d in range(max_degree + 1):
        yield from indices_of_degree(dimension, d)


def sub_indices(alpha: MultiIndex) -> Iterator[MultiIndex]:
    """Yield all gamma with 0 <= gamma <= alpha coordinatewise."""
    if not alpha:
        yield ()
        return
    for head in range(alpha[0] + 1):
        for tail in sub_indices(alpha[1:]):
            yield (head,) + tail

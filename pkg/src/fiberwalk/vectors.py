"""Exact integer vector helpers shared across the package.

Vectors are plain tuples of Python ints, so arithmetic stays exact at any
magnitude. Nothing here is clever; keeping these in one place avoids a dozen
slightly different inline loops.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence

Vector = tuple[int, ...]


def as_vector(values: Iterable[int]) -> Vector:
    """Coerce an iterable of ints into a Vector tuple."""
    return tuple(int(x) for x in values)


def _check_same_length(a: Sequence[int], b: Sequence[int]) -> None:
    if len(a) != len(b):
        raise ValueError(f"vector length mismatch: {len(a)} vs {len(b)}")


def add(a: Sequence[int], b: Sequence[int]) -> Vector:
    _check_same_length(a, b)
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Vector:
    _check_same_length(a, b)
    return tuple(x - y for x, y in zip(a, b))


def neg(a: Sequence[int]) -> Vector:
    return tuple(-x for x in a)


def scale(a: Sequence[int], c: int) -> Vector:
    return tuple(c * x for x in a)


def dot(a: Sequence[int], b: Sequence[int]) -> int:
    _check_same_length(a, b)
    return sum(x * y for x, y in zip(a, b))


def l1(a: Sequence[int]) -> int:
    return sum(abs(x) for x in a)


def linf(a: Sequence[int]) -> int:
    return max((abs(x) for x in a), default=0)


def is_zero(a: Sequence[int]) -> bool:
    return all(x == 0 for x in a)


def is_nonnegative(a: Sequence[int]) -> bool:
    return all(x >= 0 for x in a)


def positive_part(a: Sequence[int]) -> Vector:
    """Componentwise max(x, 0)."""
    return tuple(x if x > 0 else 0 for x in a)


def negative_part(a: Sequence[int]) -> Vector:
    """Componentwise max(-x, 0), so that a = positive_part - negative_part."""
    return tuple(-x if x < 0 else 0 for x in a)

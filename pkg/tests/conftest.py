"""Shared helpers: small random instances and independent oracles.

The oracles here deliberately avoid the library's own algorithms so the
tests cross-check rather than echo the implementation: connectivity by a
pairwise-difference BFS, Smith diagonals by minor gcds, fibers by an
exhaustive scan.
"""

from __future__ import annotations

import itertools
import math
import random
from typing import Iterable, Sequence

import pytest

from fiberwalk.intlin import IntMatrix


def random_matrix(rng: random.Random, rows: int, cols: int,
                  lo: int = -3, hi: int = 3) -> IntMatrix:
    return IntMatrix.from_rows(
        [[rng.randint(lo, hi) for _ in range(cols)] for _ in range(rows)]
    )


def minor_gcd(matrix: IntMatrix, k: int) -> int:
    """gcd of all k x k minors, computed straight from the definition."""
    from fractions import Fraction

    g = 0
    for rows in itertools.combinations(range(matrix.rows), k):
        for cols in itertools.combinations(range(matrix.cols), k):
            sub = [[Fraction(matrix.entry(i, j)) for j in cols] for i in rows]
            # plain fraction-free-ish Gaussian elimination on a tiny minor
            det = Fraction(1)
            m = [row[:] for row in sub]
            sign = 1
            for c in range(k):
                piv = next((r for r in range(c, k) if m[r][c] != 0), None)
                if piv is None:
                    det = Fraction(0)
                    break
                if piv != c:
                    m[c], m[piv] = m[piv], m[c]
                    sign = -sign
                det *= m[c][c]
                inv = m[c][c]
                for r in range(c + 1, k):
                    factor = m[r][c] / inv
                    for cc in range(c, k):
                        m[r][cc] -= factor * m[c][cc]
            else:
                det *= sign
            value = int(det)
            assert det == value
            g = math.gcd(g, abs(value))
    return g


def pairwise_components(elements: Sequence[tuple[int, ...]],
                        moves: Iterable[tuple[int, ...]]) -> list[set[int]]:
    """Connectivity oracle: BFS over edges found by scanning all pairs."""
    moveset = set()
    for m in moves:
        moveset.add(tuple(m))
        moveset.add(tuple(-x for x in m))
    n = len(elements)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            diff = tuple(a - b for a, b in zip(elements[i], elements[j]))
            if diff in moveset:
                adjacency[i].append(j)
                adjacency[j].append(i)
    seen: set[int] = set()
    out: list[set[int]] = []
    for s in range(n):
        if s in seen:
            continue
        comp = {s}
        frontier = [s]
        seen.add(s)
        while frontier:
            v = frontier.pop()
            for w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    comp.add(w)
                    frontier.append(w)
        out.append(comp)
    return out


def scan_fiber(matrix: IntMatrix, base_point: Sequence[int],
               coordinate_cap: int) -> list[tuple[int, ...]]:
    """Exhaustive fiber scan over the box [0, cap]^cols. Slow on purpose."""
    target = matrix.mat_vec(tuple(base_point))
    found = []
    for v in itertools.product(range(coordinate_cap + 1), repeat=matrix.cols):
        if matrix.mat_vec(v) == target:
            found.append(v)
    return found


@pytest.fixture
def rng() -> random.Random:
    return random.Random(0xF1BE)

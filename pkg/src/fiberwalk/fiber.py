"""Fiber enumeration and connectivity analysis.

The fiber of a nonnegative integer point u under a matrix A is the set of
nonnegative integer vectors v with A v = A u. Enumeration needs a
finiteness certificate: a strictly positive integer combination w of the
rows of A. Then w . v is constant on the fiber, which bounds every
coordinate and turns enumeration into a finite depth-first search.

On top of the raw element we build three graph views: the move graph
(edges are single steps from a move set), the jump graph (edges are signed
basis combinations up to an L1 budget), and shortest excursion searches
that may leave the nonnegative orthant to connect components.
"""

from __future__ import annotations

import heapq
from collections.abc import Sequence
from dataclasses import dataclass, field
from typing import Optional

from .errors import DependentBasisError, FinitenessError
from .intlin import IntMatrix, LatticeSolver, MoveBasis, kernel_basis
from .vectors import Vector, as_vector, dot, is_nonnegative, l1, linf, sub

try:  # numpy speeds up the all-pairs work in connecting_radius
    import numpy as _np
except ImportError:  # pragma: no cover - numpy is a hard dependency in practice
    _np = None


@dataclass(frozen=True)
class FiberSpec:
    """A matrix, a base point, and a positivity certificate for finiteness.

    ``weight`` must be strictly positive and an integer combination of the
    rows of ``matrix``; then weight . v is constant on the fiber and every
    coordinate of a fiber element is bounded. When no weight is supplied the
    row sum is tried; if that is not strictly positive the fiber may be
    infinite and construction fails with FinitenessError.
    """

    matrix: IntMatrix
    base_point: Vector
    weight: Vector

    def __post_init__(self) -> None:
        a, u, w = self.matrix, self.base_point, self.weight
        if len(u) != a.cols:
            raise ValueError(f"base point length {len(u)} != {a.cols} columns")
        if not is_nonnegative(u):
            raise ValueError("base point must be nonnegative")
        if len(w) != a.cols:
            raise ValueError(f"weight length {len(w)} != {a.cols} columns")
        if any(x < 1 for x in w):
            raise FinitenessError(
                "weight certificate must be strictly positive in every coordinate"
            )
        if LatticeSolver(a.transpose()).solve(w) is None:
            raise FinitenessError(
                "weight certificate is not an integer combination of the matrix rows"
            )

    @classmethod
    def build(
        cls, matrix: IntMatrix, base_point: Sequence[int], weight: Sequence[int] | None = None
    ) -> "FiberSpec":
        u = as_vector(base_point)
        if weight is not None:
            return cls(matrix, u, as_vector(weight))
        w = matrix.row_sums()
        if any(x < 1 for x in w):
            raise FinitenessError(
                "row sum is not strictly positive; supply an explicit weight certificate"
            )
        return cls(matrix, u, w)


@dataclass(frozen=True)
class Fiber:
    """All nonnegative solutions of A v = A u, sorted lexicographically."""

    spec: FiberSpec
    elements: tuple[Vector, ...]
    index: dict[Vector, int] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "index", {v: i for i, v in enumerate(self.elements)})

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def base_index(self) -> int:
        return self.index[self.spec.base_point]

    def __contains__(self, v: Vector) -> bool:
        return v in self.index

    def to_json_dict(self) -> dict:
        return {
            "u": list(self.spec.base_point),
            "elements": [list(v) for v in self.elements],
        }


def enumerate_fiber(spec: FiberSpec) -> Fiber:
    """Depth-first enumeration with interval pruning on every matrix row.

    Coordinates are assigned left to right. The weight certificate caps each
    coordinate through the remaining weight budget; in addition every matrix
    row prunes branches whose remaining target cannot be reached given the
    per-coordinate caps. Elements come out in lexicographic order.
    """
    a, u, w = spec.matrix, spec.base_point, spec.weight
    r = a.cols
    target = a.mat_vec(u)
    budget = dot(w, u)
    # Global per-coordinate caps from the weight certificate.
    caps = [budget // w[j] for j in range(r)]
    rows = [list(row) for row in a.entries]
    # suffix_lo[i][j], suffix_hi[i][j]: reachable range of sum_{l>=j} row[l]*v_l.
    suffix_lo = []
    suffix_hi = []
    for row in rows:
        lo = [0] * (r + 1)
        hi = [0] * (r + 1)
        for j in range(r - 1, -1, -1):
            c = row[j] * caps[j]
            lo[j] = lo[j + 1] + min(0, c)
            hi[j] = hi[j + 1] + max(0, c)
        suffix_lo.append(lo)
        suffix_hi.append(hi)

    out: list[Vector] = []
    partial = [0] * r
    remaining = list(target)

    def walk(j: int, budget_left: int) -> None:
        if j == r:
            if all(x == 0 for x in remaining):
                out.append(tuple(partial))
            return
        cap_j = min(caps[j], budget_left // w[j])
        for v in range(cap_j + 1):
            partial[j] = v
            ok = True
            for i in range(len(rows)):
                rem = remaining[i] - rows[i][j] * v
                if not (suffix_lo[i][j + 1] <= rem <= suffix_hi[i][j + 1]):
                    ok = False
                    break
            if ok:
                for i in range(len(rows)):
                    remaining[i] -= rows[i][j] * v
                walk(j + 1, budget_left - w[j] * v)
                for i in range(len(rows)):
                    remaining[i] += rows[i][j] * v
        partial[j] = 0

    walk(0, budget)
    fiber = Fiber(spec, tuple(out))
    if spec.base_point not in fiber.index:
        raise RuntimeError("enumeration missed the base point; this is a bug")
    return fiber


@dataclass(frozen=True)
class FiberGraph:
    """A fiber with an undirected edge structure over element indices."""

    fiber: Fiber
    moves: tuple[Vector, ...]
    adjacency: tuple[tuple[int, ...], ...]

    @property
    def edge_count(self) -> int:
        return sum(len(nbrs) for nbrs in self.adjacency) // 2

    def edges(self) -> list[tuple[int, int]]:
        out = []
        for i, nbrs in enumerate(self.adjacency):
            for j in nbrs:
                if i < j:
                    out.append((i, j))
        return out


def fiber_graph(fiber: Fiber, moves: Sequence[Vector]) -> FiberGraph:
    """Graph with an edge whenever two elements differ by one signed move."""
    signed = set()
    for mv in moves:
        mv = as_vector(mv)
        if all(x == 0 for x in mv):
            continue
        signed.add(mv)
        signed.add(tuple(-x for x in mv))
    adjacency: list[set[int]] = [set() for _ in fiber.elements]
    for i, v in enumerate(fiber.elements):
        for mv in signed:
            j = fiber.index.get(tuple(a + b for a, b in zip(v, mv)))
            if j is not None and j != i:
                adjacency[i].add(j)
    return FiberGraph(
        fiber, tuple(as_vector(m) for m in moves), tuple(tuple(sorted(s)) for s in adjacency)
    )


def connected_components(graph: FiberGraph) -> tuple[tuple[int, ...], ...]:
    """Components as sorted index tuples, ordered by smallest member."""
    n = len(graph.adjacency)
    seen = [False] * n
    comps = []
    for start in range(n):
        if seen[start]:
            continue
        comp = []
        stack = [start]
        seen[start] = True
        while stack:
            v = stack.pop()
            comp.append(v)
            for w in graph.adjacency[v]:
                if not seen[w]:
                    seen[w] = True
                    stack.append(w)
        comps.append(tuple(sorted(comp)))
    return tuple(comps)


class CoefficientVector:
    """Coefficients expressing a vector over a basis, with their L1 norm."""

    __slots__ = ("coefficients", "l1")

    def __init__(self, coefficients: Vector):
        self.coefficients = coefficients
        self.l1 = l1(coefficients)

    def __repr__(self) -> str:
        return f"CoefficientVector({self.coefficients}, l1={self.l1})"

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, CoefficientVector)
            and self.coefficients == other.coefficients
        )


def _checked_solver(basis: MoveBasis) -> LatticeSolver:
    if len(basis) < 1:
        raise ValueError("need at least one basis vector")
    m = basis.column_matrix()
    solver = LatticeSolver(m)
    if solver.rank < len(basis):
        witness = kernel_basis(m).vectors[0]
        raise DependentBasisError(
            f"move vectors are dependent: coefficients {witness} combine to zero",
            witness,
        )
    return solver


def coefficient_vector(basis: MoveBasis, vector: Sequence[int]) -> Optional[CoefficientVector]:
    """Unique coefficients with sum_i a_i b_i = vector, or None.

    Requires the basis vectors to be linearly independent; a dependency
    raises DependentBasisError carrying a witness combination.
    """
    solver = _checked_solver(basis)
    a = solver.solve(as_vector(vector))
    if a is None:
        return None
    return CoefficientVector(a)


def _lattice_coordinates(
    fiber: Fiber, solver: LatticeSolver
) -> tuple[list[Vector | None], list[int]]:
    """Coordinates of each element relative to its lattice coset.

    Elements whose difference from the base point lies in the basis lattice
    get coordinates relative to the base point; remaining elements are
    grouped into further cosets greedily. Returns per-element coordinates and
    per-element coset ids.
    """
    reps: list[Vector] = [fiber.spec.base_point]
    coords: list[Vector | None] = [None] * fiber.size
    coset: list[int] = [-1] * fiber.size
    for i, v in enumerate(fiber.elements):
        for rep_id, rep in enumerate(reps):
            a = solver.solve(sub(v, rep))
            if a is not None:
                coords[i] = a
                coset[i] = rep_id
                break
        else:
            reps.append(v)
            coords[i] = tuple([0] * solver.matrix.cols)
            coset[i] = len(reps) - 1
    return coords, coset


def jump_graph(fiber: Fiber, basis: MoveBasis, radius: int) -> FiberGraph:
    """Edges between elements whose difference is a signed basis combination
    of L1 coefficient norm at most ``radius``."""
    if radius < 1:
        raise ValueError("radius must be at least 1")
    solver = _checked_solver(basis)
    coords, coset = _lattice_coordinates(fiber, solver)
    adjacency: list[set[int]] = [set() for _ in fiber.elements]
    n = fiber.size
    for i in range(n):
        ci = coords[i]
        for j in range(i + 1, n):
            if coset[i] != coset[j]:
                continue
            d = sum(abs(a - b) for a, b in zip(ci, coords[j]))
            if d <= radius:
                adjacency[i].add(j)
                adjacency[j].add(i)
    return FiberGraph(fiber, basis.vectors, tuple(tuple(sorted(s)) for s in adjacency))


def connecting_radius(fiber: Fiber, basis: MoveBasis, radius_max: int) -> Optional[int]:
    """Smallest radius whose jump graph is connected, or None past radius_max.

    Each element is mapped to its coefficient coordinates over the basis;
    the jump graph at radius N is then the L1 threshold graph at N, so the
    answer is the bottleneck (largest) edge of a minimum spanning tree.
    Elements in different lattice cosets can never connect, in which case
    the result is None no matter the cap.
    """
    if radius_max < 1:
        raise ValueError("radius_max must be at least 1")
    if fiber.size == 1:
        return 1
    solver = _checked_solver(basis)
    coords, coset = _lattice_coordinates(fiber, solver)
    if len(set(coset)) > 1:
        return None
    bottleneck = _mst_bottleneck(coords)
    radius = max(1, bottleneck)
    return radius if radius <= radius_max else None


def _mst_bottleneck(coords: Sequence[Vector]) -> int:
    """Largest edge weight on an L1 minimum spanning tree of the points."""
    m = len(coords)
    if _np is not None and max(linf(c) for c in coords) < 2**31:
        pts = _np.array(coords, dtype=_np.int64)
        dist = _np.abs(pts - pts[0]).sum(axis=1)
        in_tree = _np.zeros(m, dtype=bool)
        in_tree[0] = True
        dist[0] = 0
        bottleneck = 0
        for _ in range(m - 1):
            masked = _np.where(in_tree, _np.iinfo(_np.int64).max, dist)
            v = int(masked.argmin())
            bottleneck = max(bottleneck, int(dist[v]))
            in_tree[v] = True
            cand = _np.abs(pts - pts[v]).sum(axis=1)
            dist = _np.minimum(dist, cand)
        return bottleneck
    # Pure python fallback (kept simple; only used for huge coordinates).
    INF = None
    dist = [sum(abs(a - b) for a, b in zip(c, coords[0])) for c in coords]
    in_tree = [False] * m
    in_tree[0] = True
    bottleneck = 0
    for _ in range(m - 1):
        v = -1
        best = None
        for i in range(m):
            if not in_tree[i] and (best is None or dist[i] < best):
                best = dist[i]
                v = i
        bottleneck = max(bottleneck, dist[v])
        in_tree[v] = True
        cv = coords[v]
        for i in range(m):
            if not in_tree[i]:
                d = sum(abs(a - b) for a, b in zip(coords[i], cv))
                if d < dist[i]:
                    dist[i] = d
    return bottleneck


@dataclass(frozen=True)
class Excursion:
    """A shortest connecting walk between two components.

    ``path`` runs from an element of the source component to an element of
    the target component; ``outside_count`` counts intermediate vertices
    with a negative coordinate, minimized among all walks of minimal length.
    """

    path_len: int
    outside_count: int
    path: tuple[Vector, ...]


@dataclass(frozen=True)
class MinExcursionResult:
    """Per ordered component pair, the best excursion or None within the cap."""

    components: tuple[tuple[int, ...], ...]
    pairs: dict[tuple[int, int], Optional[Excursion]]


def min_excursion(fiber: Fiber, basis: MoveBasis, cap: int) -> MinExcursionResult:
    """Shortest signed-move walks between components, allowing negatives.

    Runs a two-criteria shortest path search (number of moves, then count of
    out-of-orthant intermediates) over integer vectors reachable from each
    component in at most ``cap`` moves. Coordinates are pruned at
    cap * beta + the largest coordinate magnitude seen in the fiber, which
    no walk of at most cap moves can escape. A connected fiber reports no
    pairs; pairs not reached within the cap map to None, which is not a
    disconnection claim.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if len(basis) < 1:
        raise ValueError("need at least one move vector")
    graph = fiber_graph(fiber, basis.vectors)
    comps = connected_components(graph)
    result: dict[tuple[int, int], Optional[Excursion]] = {}
    if len(comps) == 1:
        return MinExcursionResult(comps, result)

    coord_bound = cap * basis.beta + max(
        max(linf(v) for v in fiber.elements), linf(fiber.spec.base_point)
    )
    moves = []
    for b in basis.vectors:
        moves.append(b)
        moves.append(tuple(-x for x in b))
    comp_of = {}
    for ci, comp in enumerate(comps):
        for idx in comp:
            comp_of[fiber.elements[idx]] = ci

    for ci, comp in enumerate(comps):
        best, parent = _excursion_search(
            [fiber.elements[i] for i in comp], moves, cap, coord_bound
        )
        for cj in range(len(comps)):
            if cj == ci:
                continue
            target_best = None
            target_state = None
            for idx in comps[cj]:
                v = fiber.elements[idx]
                cost = best.get(v)
                if cost is not None and (target_best is None or cost < target_best):
                    target_best = cost
                    target_state = v
            if target_best is None:
                result[(ci, cj)] = None
                continue
            path = [target_state]
            cur = target_state
            while parent[cur] is not None:
                cur = parent[cur]
                path.append(cur)
            path.reverse()
            result[(ci, cj)] = Excursion(target_best[0], target_best[1], tuple(path))
    return MinExcursionResult(comps, result)


def _excursion_search(
    sources: list[Vector],
    moves: list[Vector],
    cap: int,
    coord_bound: int,
):
    """Dijkstra with lexicographic (moves, outside) cost from many sources."""
    best: dict[Vector, tuple[int, int]] = {}
    parent: dict[Vector, Vector | None] = {}
    heap: list[tuple[int, int, Vector]] = []
    for s in sorted(sources):
        best[s] = (0, 0)
        parent[s] = None
        heapq.heappush(heap, (0, 0, s))
    while heap:
        steps, outside, v = heapq.heappop(heap)
        if best.get(v) != (steps, outside):
            continue
        if steps == cap:
            continue
        for mv in moves:
            w = tuple(a + b for a, b in zip(v, mv))
            bad = False
            neg = False
            for x in w:
                if x < 0:
                    neg = True
                    if x < -coord_bound:
                        bad = True
                        break
                elif x > coord_bound:
                    bad = True
                    break
            if bad:
                continue
            cost = (steps + 1, outside + (1 if neg else 0))
            known = best.get(w)
            if known is None or cost < known:
                best[w] = cost
                parent[w] = v
                heapq.heappush(heap, (cost[0], cost[1], w))
    return best, parent


def components_csv(graph: FiberGraph) -> str:
    """CSV report: one line per component with id, size, representative."""
    comps = connected_components(graph)
    lines = ["component_id,size,representative"]
    for ci, comp in enumerate(comps):
        rep = graph.fiber.elements[comp[0]]
        lines.append(f"{ci},{len(comp)},{' '.join(str(x) for x in rep)}")
    return "\n".join(lines) + "\n"


def fiber_from_json_dict(obj: dict, spec: FiberSpec) -> Fiber:
    """Rebuild a Fiber from its JSON form, revalidating against the spec."""
    elements = tuple(as_vector(v) for v in obj["elements"])
    u = as_vector(obj["u"])
    if u != spec.base_point:
        raise ValueError("JSON base point does not match the spec")
    return Fiber(spec, elements)

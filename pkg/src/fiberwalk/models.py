"""Ready-made test instances: a matrix, a move basis, and a base point.

These are the worked instances used throughout the tests and the command
line tools: a small one-dimensional-margin example whose fiber has an
isolated element, a family of deliberately bad bases needing long
excursions, a family of second-difference bases with growing connecting
radius, and the three-way interaction-free contingency table model.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceededError
from .intlin import IntMatrix, MoveBasis, kernel_basis, kronecker
from .vectors import Vector, is_zero


@dataclass(frozen=True)
class ModelInstance:
    """A named matrix with a move basis and a base point for its fiber."""

    name: str
    matrix: IntMatrix
    basis: MoveBasis
    base_point: Vector
    notes: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if len(self.base_point) != self.matrix.cols:
            raise ValueError("base point length does not match matrix columns")
        for b in self.basis.vectors:
            if not is_zero(self.matrix.mat_vec(b)):
                raise ValueError(f"move {b} is not in the kernel of the matrix")


def simple_example() -> ModelInstance:
    """Two weighted margins on four cells.

    The kernel has rank two; with the two adjacent-difference moves the
    fiber of (2, 2, 2, 2) splits into a 12-element component and the
    isolated point (4, 0, 0, 4). Adding the move (1, -1, -1, 1) reconnects
    it.
    """
    matrix = IntMatrix.from_rows([[0, 1, 2, 3], [3, 2, 1, 0]])
    basis = MoveBasis.from_vectors([(1, -2, 1, 0), (0, 1, -2, 1)])
    return ModelInstance(
        name="simple",
        matrix=matrix,
        basis=basis,
        base_point=(2, 2, 2, 2),
        notes=(
            "kernel rank 2, beta 2, combination length bound 16",
            "fiber of (2,2,2,2) has 13 elements; (4,0,0,4) is isolated under the basis moves",
            "connecting radius 2; the extra move (1,-1,-1,1) restores connectivity",
        ),
    )


def bad_basis_family(n: int) -> ModelInstance:
    """Single all-ones margin on three cells with a skewed kernel basis.

    The fiber of (0, 1, 0) is the three unit vectors. Under the basis
    {(0, 1, -1), (-1, n, 1-n)} the second and third stay connected while
    the first is isolated; reaching it takes n - 1 consecutive steps
    through negative territory.
    """
    if n < 2:
        raise ValueError("family parameter must be at least 2")
    matrix = IntMatrix.from_rows([[1, 1, 1]])
    basis = MoveBasis.from_vectors([(0, 1, -1), (-1, n, 1 - n)])
    return ModelInstance(
        name=f"bad-basis-{n}",
        matrix=matrix,
        basis=basis,
        base_point=(0, 1, 0),
        notes=(
            "fiber of (0,1,0) is the three unit vectors",
            f"isolated first cell needs an excursion with {n - 1} outside steps",
        ),
    )


def second_difference_family(n: int) -> ModelInstance:
    """Two opposing ramp margins on n cells with second-difference moves.

    The n - 2 moves (..., 1, -2, 1, ...) span the kernel. The fiber of the
    all-twos point contains (n, 0, ..., 0, n), and connecting it to the rest
    requires jumps combining n - 2 moves, so the connecting radius grows
    with n.
    """
    if n < 4:
        raise ValueError("family parameter must be at least 4")
    matrix = IntMatrix.from_rows([list(range(1, n + 1)), list(range(n, 0, -1))])
    vecs = []
    for i in range(n - 2):
        v = [0] * n
        v[i] = 1
        v[i + 1] = -2
        v[i + 2] = 1
        vecs.append(v)
    basis = MoveBasis.from_vectors(vecs)
    return ModelInstance(
        name=f"second-difference-{n}",
        matrix=matrix,
        basis=basis,
        base_point=tuple([2] * n),
        notes=(
            f"kernel rank {n - 2}; connecting radius of the all-twos fiber is {n - 2}",
        ),
    )


def no_three_factor(
    i_levels: int, j_levels: int, k_levels: int, max_entries: int = 4_000_000
) -> ModelInstance:
    """Three-way contingency tables with all two-way margins fixed.

    Cells are ordered with the last axis fastest. The matrix stacks the
    three pairwise margin maps; its kernel is the lattice of moves
    preserving every two-way margin. The basis is the computed kernel
    basis, whose largest entry is reported rather than assumed.

    ``max_entries`` caps the matrix size (rows times columns) to fail fast
    on instances too large to build in memory.
    """
    for name, v in (("i_levels", i_levels), ("j_levels", j_levels), ("k_levels", k_levels)):
        if v < 2:
            raise ValueError(f"{name} must be at least 2")
    cells = i_levels * j_levels * k_levels
    rows = i_levels * j_levels + i_levels * k_levels + j_levels * k_levels
    if rows * cells > max_entries:
        raise BudgetExceededError(
            f"margin matrix would hold {rows * cells} entries, over the budget of "
            f"{max_entries}",
            completed=0,
            planned=rows * cells,
        )
    id_i = IntMatrix.identity(i_levels)
    id_j = IntMatrix.identity(j_levels)
    id_k = IntMatrix.identity(k_levels)
    one_i = IntMatrix.ones(1, i_levels)
    one_j = IntMatrix.ones(1, j_levels)
    one_k = IntMatrix.ones(1, k_levels)
    blocks = [
        kronecker(kronecker(id_i, id_j), one_k),
        kronecker(kronecker(id_i, one_j), id_k),
        kronecker(kronecker(one_i, id_j), id_k),
    ]
    matrix = IntMatrix.from_rows([row for b in blocks for row in b.entries])
    basis = kernel_basis(matrix)
    return ModelInstance(
        name=f"no-three-factor-{i_levels}x{j_levels}x{k_levels}",
        matrix=matrix,
        basis=basis,
        base_point=tuple([2] * cells),
        notes=(
            f"margin matrix is {matrix.rows} x {matrix.cols}",
            f"kernel rank {len(basis)}, largest basis entry {basis.beta}",
        ),
    )

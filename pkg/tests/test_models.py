"""Bundled model instances."""

import itertools

import pytest

from fiberwalk.errors import BudgetExceededError
from fiberwalk.fiber import FiberSpec, enumerate_fiber
from fiberwalk.intlin import IntMatrix, MoveBasis, kernel_basis, smith_normal_form
from fiberwalk.models import (
    ModelInstance,
    bad_basis_family,
    no_three_factor,
    second_difference_family,
    simple_example,
)

from conftest import pairwise_components


def _moves_in_kernel(instance: ModelInstance) -> None:
    zero = (0,) * instance.matrix.rows
    for v in instance.basis:
        assert instance.matrix.mat_vec(v) == zero


def test_simple_example_shape():
    m = simple_example()
    assert m.name == "simple"
    assert (m.matrix.rows, m.matrix.cols) == (2, 4)
    assert m.base_point == (2, 2, 2, 2)
    assert len(m.basis) == 2
    assert m.basis.beta == 2
    _moves_in_kernel(m)
    assert m.notes


def test_simple_example_matches_full_kernel():
    m = simple_example()
    assert len(kernel_basis(m.matrix)) == len(m.basis)


def test_bad_basis_family_components(rng):
    for n in range(2, 5):
        inst = bad_basis_family(n)
        assert inst.name == f"bad-basis-{n}"
        assert inst.matrix.entries == ((1, 1, 1),)
        assert inst.base_point == (0, 1, 0)
        assert inst.basis.beta == n
        _moves_in_kernel(inst)
        fiber = enumerate_fiber(FiberSpec.build(inst.matrix, inst.base_point))
        assert fiber.elements == ((0, 0, 1), (0, 1, 0), (1, 0, 0))
        comps = pairwise_components(fiber.elements, inst.basis.vectors)
        assert sorted(len(c) for c in comps) == [1, 2]
        # the unit vector on the first coordinate is the stranded one
        lone = next(c for c in comps if len(c) == 1)
        assert fiber.elements[next(iter(lone))] == (1, 0, 0)


def test_bad_basis_is_a_lattice_basis():
    # both moves lie in the kernel and they generate it: the kernel has
    # rank 2 and the 2x2 minors of the move matrix have gcd 1
    inst = bad_basis_family(4)
    assert len(kernel_basis(inst.matrix)) == 2
    mat = inst.basis.to_matrix()
    minors = []
    for a, b in itertools.combinations(range(3), 2):
        minors.append(
            mat.entry(0, a) * mat.entry(1, b) - mat.entry(0, b) * mat.entry(1, a)
        )
    import math
    assert math.gcd(*map(abs, minors)) == 1


def test_second_difference_family_structure():
    for n in (4, 5, 6):
        inst = second_difference_family(n)
        assert inst.name == f"second-difference-{n}"
        assert inst.matrix.entries == (
            tuple(range(1, n + 1)), tuple(range(n, 0, -1)))
        assert len(inst.basis) == n - 2
        assert inst.basis.beta == 2
        _moves_in_kernel(inst)
        assert inst.base_point == (2,) * n
        # the corner point (n, 0, ..., 0, n) lies in the same fiber
        corner = (n,) + (0,) * (n - 2) + (n,)
        assert inst.matrix.mat_vec(corner) == inst.matrix.mat_vec(inst.base_point)


def test_second_difference_moves_span_kernel():
    inst = second_difference_family(5)
    assert len(kernel_basis(inst.matrix)) == 3
    # SNF of the move matrix has all-ones diagonal, so the moves generate
    # a saturated rank-3 sublattice, hence the whole kernel lattice
    diag = smith_normal_form(inst.basis.to_matrix()).diagonal
    assert diag == (1, 1, 1)


def test_no_three_factor_margins():
    inst = no_three_factor(2, 3, 2)
    i_l, j_l, k_l = 2, 3, 2
    assert inst.matrix.rows == i_l * j_l + i_l * k_l + j_l * k_l
    assert inst.matrix.cols == i_l * j_l * k_l
    # margin structure, checked against hand-computed sums for a few cells
    v = tuple(range(1, i_l * j_l * k_l + 1))

    def cell(i, j, k):
        return v[(i * j_l + j) * k_l + k]

    margins = []
    for i in range(i_l):
        for j in range(j_l):
            margins.append(sum(cell(i, j, k) for k in range(k_l)))
    for i in range(i_l):
        for k in range(k_l):
            margins.append(sum(cell(i, j, k) for j in range(j_l)))
    for j in range(j_l):
        for k in range(k_l):
            margins.append(sum(cell(i, j, k) for i in range(i_l)))
    assert inst.matrix.mat_vec(v) == tuple(margins)
    _moves_in_kernel(inst)


def test_no_three_factor_binary_cube_kernel():
    inst = no_three_factor(2, 2, 2)
    assert len(inst.basis) == 1
    move = inst.basis.vectors[0]
    # the alternating sign cube, up to global sign
    want = (1, -1, -1, 1, -1, 1, 1, -1)
    assert move in (want, tuple(-x for x in want))


def test_no_three_factor_five_cube_rank():
    inst = no_three_factor(5, 5, 5)
    assert (inst.matrix.rows, inst.matrix.cols) == (75, 125)
    assert len(inst.basis) == 64
    assert inst.basis.beta == 1


def test_no_three_factor_budget():
    with pytest.raises(BudgetExceededError):
        no_three_factor(40, 40, 40, max_entries=100_000)


def test_model_parameter_validation():
    with pytest.raises(ValueError):
        bad_basis_family(1)
    with pytest.raises(ValueError):
        second_difference_family(3)
    with pytest.raises(ValueError):
        no_three_factor(1, 2, 2)


def test_model_instance_rejects_non_kernel_moves():
    m = IntMatrix.from_rows([[1, 1]])
    with pytest.raises(ValueError):
        ModelInstance("broken", m, MoveBasis.from_vectors([(1, 1)]), (1, 0))
    with pytest.raises(ValueError):
        ModelInstance("broken", m, MoveBasis.from_vectors([(1, -1)]), (1, 0, 0))

"""End-to-end acceptance checks.

Each test prints one [criterion NN] PASS/FAIL line (run with -s to see
them) and enforces the stated runtime budget. The worked two-row matrix
with the two second-difference moves appears throughout; its fiber of
(2, 2, 2, 2) has 13 elements of which (4, 0, 0, 4) is stranded.
"""

import itertools
import random
import time

import pytest

from fiberwalk.binomial import (
    iterated_subtraction,
    norm_bound,
    reduce_generating_set,
    saturation_generators,
    scientific_string,
    side_achieved,
)
from fiberwalk.fiber import (
    FiberSpec,
    coefficient_vector,
    connected_components,
    connecting_radius,
    enumerate_fiber,
    fiber_graph,
    jump_graph,
    min_excursion,
)
from fiberwalk.intlin import (
    IntMatrix,
    LatticeSolver,
    MoveBasis,
    determinant,
    kernel_basis,
    smith_normal_form,
)
from fiberwalk.models import (
    bad_basis_family,
    no_three_factor,
    second_difference_family,
    simple_example,
)
from fiberwalk.sampler import (
    ChainConfig,
    TargetWeight,
    component_hits,
    empirical_distribution,
    run_walk,
    tv_distance,
)

MATRIX = IntMatrix.from_rows([[0, 1, 2, 3], [3, 2, 1, 0]])
BASIS = MoveBasis.from_vectors([(1, -2, 1, 0), (0, 1, -2, 1)])
BASE = (2, 2, 2, 2)


class _Timer:
    def __enter__(self):
        self.start = time.perf_counter()
        return self

    def __exit__(self, *exc):
        self.elapsed = time.perf_counter() - self.start


def _report(number: int, ok: bool, text: str, elapsed: float) -> None:
    status = "PASS" if ok else "FAIL"
    print(f"[criterion {number:02d}] {status} {text} ({elapsed:.3f}s)")
    assert ok, f"criterion {number}: {text}"


def _worked_fiber():
    return enumerate_fiber(FiberSpec.build(MATRIX, BASE))


def test_criterion_01_norm_bound_small():
    with _Timer() as t:
        value = norm_bound(2, 2)
    ok = value == 16 and t.elapsed < 0.001
    _report(1, ok, f"combination bound for 2 moves of size 2 is {value}",
            t.elapsed)


def test_criterion_02_norm_bound_large():
    with _Timer() as t:
        value = norm_bound(64, 1)
        three = scientific_string(value, sig_figs=3)
        two = scientific_string(value, sig_figs=2)
    ok = (value == 2 ** 447 and three == "3.63e134" and two == "3.6e134"
          and t.elapsed < 0.001)
    _report(2, ok, f"bound for 64 unit moves is 2^447 ~ {three}", t.elapsed)


def test_criterion_03_three_factor_kernel_rank():
    with _Timer() as t:
        inst = no_three_factor(5, 5, 5)
    ok = (
        (inst.matrix.rows, inst.matrix.cols) == (75, 125)
        and len(inst.basis) == 64
        and t.elapsed < 30.0
    )
    _report(3, ok,
            f"5x5x5 margin matrix is {inst.matrix.rows}x{inst.matrix.cols} "
            f"with kernel rank {len(inst.basis)}", t.elapsed)


def test_criterion_04_fiber_census():
    with _Timer() as t:
        fiber = _worked_fiber()
        comps = connected_components(fiber_graph(fiber, BASIS.vectors))
        sizes = sorted(len(c) for c in comps)
        lone = next(c for c in comps if len(c) == 1)
        stranded = fiber.elements[lone[0]]
        # independent census: every nonnegative 4-vector with coordinate
        # sum 8 (the only candidates, since both rows sum coordinates
        # with positive total weight) checked directly against A v = A u
        target = MATRIX.mat_vec(BASE)
        scan = sorted(
            v
            for v in (
                (a, b, c, 8 - a - b - c)
                for a in range(9)
                for b in range(9 - a)
                for c in range(9 - a - b)
            )
            if MATRIX.mat_vec(v) == target
        )
    ok = (
        fiber.size == 13
        and sizes == [1, 12]
        and stranded == (4, 0, 0, 4)
        and list(fiber.elements) == scan
        and t.elapsed < 1.0
    )
    _report(4, ok,
            f"fiber has {fiber.size} elements, components {sizes}, "
            f"stranded point {stranded}", t.elapsed)


def test_criterion_05_connecting_radius():
    with _Timer() as t:
        fiber = _worked_fiber()
        radius = connecting_radius(fiber, BASIS, 64)
        wide = connected_components(jump_graph(fiber, BASIS, 16))
    ok = radius == 2 and len(wide) == 1 and t.elapsed < 1.0
    _report(5, ok,
            f"connecting radius is {radius}; radius-16 jump graph has "
            f"{len(wide)} component", t.elapsed)


def test_criterion_06_added_move_connects():
    with _Timer() as t:
        fiber = _worked_fiber()
        moves = list(BASIS.vectors) + [(1, -1, -1, 1)]
        comps = connected_components(fiber_graph(fiber, moves))
    ok = len(comps) == 1 and t.elapsed < 1.0
    _report(6, ok,
            f"with the extra move (1,-1,-1,1) the fiber has "
            f"{len(comps)} component", t.elapsed)


def test_criterion_07_minimal_excursion():
    with _Timer() as t:
        fiber = _worked_fiber()
        result = min_excursion(fiber, BASIS, 4)
        exc = result.pairs[(0, 1)]
    ok = (
        exc is not None
        and exc.path_len == 2
        and exc.outside_count == 1
        and exc.path[1] in {(4, -1, 2, 3), (3, 2, -1, 4)}
        and t.elapsed < 1.0
    )
    _report(7, ok,
            f"shortest excursion to the stranded point: {exc.path_len} "
            f"moves, {exc.outside_count} outside, via {exc.path[1]}",
            t.elapsed)


def test_criterion_08_stranded_unit_vector_family():
    with _Timer() as t:
        ok = True
        details = []
        for n in range(2, 7):
            inst = bad_basis_family(n)
            fiber = enumerate_fiber(
                FiberSpec.build(inst.matrix, inst.base_point))
            comps = connected_components(
                fiber_graph(fiber, inst.basis.vectors))
            by_elements = sorted(
                tuple(fiber.elements[i] for i in c) for c in comps
            )
            want = sorted([((1, 0, 0),), ((0, 0, 1), (0, 1, 0))])
            excursion = min_excursion(fiber, inst.basis, n + 2)
            outside = {e.outside_count
                       for e in excursion.pairs.values() if e is not None}
            ok = ok and by_elements == want and outside == {n - 1}
            details.append(f"n={n}:{n - 1}")
    ok = ok and t.elapsed < 10.0
    _report(8, ok,
            "unit-vector fiber splits {e2,e3} | {e1}; outside counts "
            + " ".join(details), t.elapsed)


def test_criterion_09_second_difference_radius_sharp():
    with _Timer() as t:
        ok = True
        details = []
        for n in range(4, 8):
            inst = second_difference_family(n)
            fiber = enumerate_fiber(
                FiberSpec.build(inst.matrix, inst.base_point))
            corner = (n,) + (0,) * (n - 2) + (n,)
            radius = connecting_radius(fiber, inst.basis, 64)
            ok = ok and corner in fiber and radius == n - 2
            details.append(f"n={n}:{radius}")
    ok = ok and t.elapsed < 60.0
    _report(9, ok, "second-difference connecting radii " + " ".join(details),
            t.elapsed)


def test_criterion_10_saturation_connects_small_fibers():
    with _Timer() as t:
        result = saturation_generators(BASIS, cap=4)
        diffs = {b.difference for b in result.binomials}
        has_bridge = (1, -1, -1, 1) in diffs or (-1, 1, 1, -1) in diffs
        reduced = reduce_generating_set(result.binomials, BASIS, 16)
        moves = [b.difference for b in reduced]
        all_connected = True
        checked = 0
        for u in itertools.product(range(4), repeat=4):
            fiber = enumerate_fiber(FiberSpec.build(MATRIX, u))
            comps = connected_components(fiber_graph(fiber, moves))
            checked += 1
            if len(comps) != 1:
                all_connected = False
                break
    ok = has_bridge and all_connected and t.elapsed < 60.0
    _report(10, ok,
            f"saturation at cap 4 bridges the split and its {len(reduced)} "
            f"reduced moves connect all {checked} small fibers", t.elapsed)


def test_criterion_11_property_suite():
    with _Timer() as t:
        rng = random.Random(20240817)
        failures = 0

        # Smith normal form identities
        for _ in range(1000):
            rows = rng.randint(1, 3)
            cols = rng.randint(1, 3)
            m = IntMatrix.from_rows(
                [[rng.randint(-3, 3) for _ in range(cols)]
                 for _ in range(rows)])
            s = smith_normal_form(m)
            if s.left.mat_mul(m).mat_mul(s.right) != s.diag:
                failures += 1
            if abs(determinant(s.left)) != 1 or abs(determinant(s.right)) != 1:
                failures += 1
            positive = [d for d in s.diagonal if d != 0]
            if any(b % a for a, b in zip(positive, positive[1:])):
                failures += 1

        # kernel closure: basis vectors are annihilated and count the
        # nullity exactly
        for _ in range(1000):
            rows = rng.randint(1, 2)
            cols = rng.randint(2, 4)
            m = IntMatrix.from_rows(
                [[rng.randint(-3, 3) for _ in range(cols)]
                 for _ in range(rows)])
            basis = kernel_basis(m)
            if len(basis) != cols - smith_normal_form(m).rank:
                failures += 1
            if any(m.mat_vec(v) != (0,) * rows for v in basis):
                failures += 1

        # coefficient uniqueness on independent move sets
        count = 0
        while count < 1000:
            n = rng.randint(1, 3)
            r = rng.randint(n, 4)
            vectors = [tuple(rng.randint(-2, 2) for _ in range(r))
                       for _ in range(n)]
            mat = IntMatrix.from_rows(vectors)
            if smith_normal_form(mat).rank != n:
                continue
            count += 1
            moves = MoveBasis.from_vectors(vectors)
            coeffs = tuple(rng.randint(-3, 3) for _ in range(n))
            vec = tuple(
                sum(c * v[j] for c, v in zip(coeffs, vectors))
                for j in range(r)
            )
            got = coefficient_vector(moves, vec)
            if got is None or got.coefficients != coeffs:
                failures += 1

        # every iterated product's difference lies in the move lattice
        count = 0
        while count < 1000:
            n = rng.randint(1, 2)
            r = rng.randint(2, 4)
            vectors = [tuple(rng.randint(-2, 2) for _ in range(r))
                       for _ in range(n)]
            mat = IntMatrix.from_rows(vectors)
            if smith_normal_form(mat).rank != n:
                continue
            count += 1
            moves = MoveBasis.from_vectors(vectors)
            solver = LatticeSolver(moves.column_matrix())
            eps = tuple(rng.choice((-1, 1)) for _ in range(n))
            tvec = tuple(rng.randint(0, 3) for _ in range(n))
            phi = iterated_subtraction(eps, tvec, moves).stripped()
            if solver.solve(phi.difference) is None:
                failures += 1

        # orientation flip sends each per-variable minimum to the other side
        for _ in range(1000):
            n = rng.randint(1, 3)
            r = rng.randint(2, 4)
            moves = MoveBasis.from_vectors(
                [tuple(rng.randint(-2, 2) for _ in range(r))
                 for _ in range(n)],
                length=r,
            )
            eps = tuple(rng.choice((-1, 1)) for _ in range(n))
            flipped = tuple(-e for e in eps)
            tvec = tuple(rng.randint(0, 2) for _ in range(n))
            for j in range(r):
                a = side_achieved(eps, tvec, moves, j)
                b = side_achieved(flipped, tvec, moves, j)
                if int(a) != -int(b):
                    failures += 1
    ok = failures == 0 and t.elapsed < 120.0
    _report(11, ok,
            f"5 property families x 1000 random instances, "
            f"{failures} failures", t.elapsed)


def test_criterion_12_truncated_poisson_mixes():
    fiber = _worked_fiber()
    comps = connected_components(fiber_graph(fiber, BASIS.vectors))
    target = TargetWeight.uniform()
    tvs = []
    seeds_with_all_hits = 0
    worst = 0.0
    ok = True
    with _Timer() as t:
        for seed in (1, 2, 3, 4, 5):
            with _Timer() as per_seed:
                cfg = ChainConfig(
                    algorithm="truncated-poisson", steps=100_000, seed=seed,
                    poisson_mean=1.0, step_bound=16, target=target,
                )
                trace = run_walk(fiber, BASIS, None, cfg)
                freqs = empirical_distribution(trace, fiber)
                tv = tv_distance(freqs, target, fiber)
                hits = component_hits(trace, comps)
            tvs.append(round(tv, 4))
            worst = max(worst, tv)
            if all(h is not None for h in hits):
                seeds_with_all_hits += 1
            ok = ok and tv < 0.05 and per_seed.elapsed < 10.0
    ok = ok and seeds_with_all_hits >= 4
    _report(12, ok,
            f"truncated walk: tv per seed {tvs}, all components hit in "
            f"{seeds_with_all_hits}/5 seeds", t.elapsed)


def test_criterion_13_single_move_walk_never_strands():
    fiber = _worked_fiber()
    stranded = fiber.index[(4, 0, 0, 4)]
    with _Timer() as t:
        cfg = ChainConfig(algorithm="naive", steps=100_000, seed=1)
        trace = run_walk(fiber, BASIS, None, cfg)
        visits = sum(1 for s in trace.states if s == stranded)
    ok = visits == 0 and t.elapsed < 5.0
    _report(13, ok,
            f"single-move walk visits the stranded point {visits} times "
            f"in 100000 steps", t.elapsed)


def test_simple_model_agrees_with_worked_constants():
    # ties the bundled instance to the constants used across this file
    inst = simple_example()
    assert inst.matrix == MATRIX
    assert inst.basis == BASIS
    assert inst.base_point == BASE

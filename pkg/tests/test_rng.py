"""Counter-based random streams."""

import math

from fiberwalk.rng import RandomStream


def test_same_seed_same_sequence():
    a = RandomStream(123)
    b = RandomStream(123)
    assert [a.next_uint64() for _ in range(50)] == \
        [b.next_uint64() for _ in range(50)]


def test_streams_are_distinct():
    a = RandomStream(123, stream=0)
    b = RandomStream(123, stream=1)
    assert [a.next_uint64() for _ in range(10)] != \
        [b.next_uint64() for _ in range(10)]


def test_outputs_are_pure_function_of_counter():
    # counter-based: the i-th output depends only on (seed, stream, i)
    a = RandomStream(7)
    first = [a.next_uint64() for _ in range(6)]
    b = RandomStream(7)
    assert b.draws == 0
    got = [b.next_uint64() for _ in range(3)]
    got += [b.next_uint64() for _ in range(3)]
    assert got == first
    assert b.draws == 6


def test_uniform_range_and_mean():
    rng = RandomStream(42)
    xs = [rng.uniform() for _ in range(20000)]
    assert all(0.0 <= x < 1.0 for x in xs)
    assert abs(sum(xs) / len(xs) - 0.5) < 0.01


def test_below_bounds_and_coverage():
    rng = RandomStream(5)
    seen = set()
    for _ in range(2000):
        v = rng.below(7)
        assert 0 <= v < 7
        seen.add(v)
    assert seen == set(range(7))


def test_sign_is_plus_minus_one():
    rng = RandomStream(9)
    values = {rng.sign() for _ in range(100)}
    assert values == {-1, 1}


def test_poisson_moments():
    rng = RandomStream(1)
    for mean in (0.5, 1.0, 4.0):
        xs = [rng.poisson(mean) for _ in range(20000)]
        m = sum(xs) / len(xs)
        v = sum((x - m) ** 2 for x in xs) / len(xs)
        assert abs(m - mean) < 0.08 * max(1.0, mean)
        assert abs(v - mean) < 0.15 * max(1.0, mean)
        assert all(isinstance(x, int) and x >= 0 for x in xs)


def test_poisson_matches_exact_pmf():
    rng = RandomStream(11)
    n = 50000
    counts = {}
    for _ in range(n):
        x = rng.poisson(1.0)
        counts[x] = counts.get(x, 0) + 1
    for k in range(4):
        want = math.exp(-1.0) / math.factorial(k)
        assert abs(counts.get(k, 0) / n - want) < 0.01


def test_poisson_truncated_respects_bound():
    rng = RandomStream(3)
    total_resamples = 0
    for _ in range(5000):
        v, resamples = rng.poisson_truncated(4.0, 3)
        assert 0 <= v <= 3
        total_resamples += resamples
    assert total_resamples > 0  # lambda 4 with bound 3 truncates often


def test_poisson_truncated_agrees_when_bound_is_loose():
    a = RandomStream(17)
    b = RandomStream(17)
    plain = [a.poisson(1.0) for _ in range(2000)]
    truncated = [b.poisson_truncated(1.0, 50)[0] for _ in range(2000)]
    assert plain == truncated


def test_geometric_mean():
    rng = RandomStream(8)
    for p in (0.5, 0.2):
        xs = [rng.geometric(p) for _ in range(20000)]
        want = (1 - p) / p  # failures before the first success
        m = sum(xs) / len(xs)
        assert abs(m - want) < 0.1 * max(1.0, want)
        assert all(x >= 0 for x in xs)

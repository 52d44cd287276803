"""Random walks over enumerated fibers with reproducible traces.

All walks share the same shape: from the current fiber element, propose a
move built from the basis vectors, stay put when the proposal leaves the
fiber, and otherwise accept or reject by a Metropolis ratio for the chosen
target weight. The proposal distributions differ:

- naive: one uniformly chosen signed basis move per step.
- poisson: signed combination with Poisson multiplicities.
- truncated poisson: Poisson multiplicities conditioned to a bound.
- geometric: geometric multiplicities.
- bounded excursion: repeated single signed moves that may wander outside
  the nonnegative orthant for a bounded number of consecutive steps. This
  walk applies no Metropolis correction; it explores connectivity and its
  stationary distribution is not asserted to match the target.

Every step appends a state to the trace, including rejections and
self-loops, so a trace with S steps has S + 1 states. Identical
configurations produce bit-identical traces.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .fiber import Fiber
from .intlin import MoveBasis
from .rng import RandomStream
from .vectors import Vector, as_vector

_VALID_KINDS = ("uniform", "hypergeometric")


@dataclass(frozen=True)
class TargetWeight:
    """Unnormalized target weight on fiber elements, in log form.

    ``uniform`` weights every element equally; ``hypergeometric`` weights an
    element v by 1 / prod_i v_i!, the conditional distribution of
    independent Poisson cells given their fiber.
    """

    kind: str

    def __post_init__(self) -> None:
        if self.kind not in _VALID_KINDS:
            raise ValueError(f"unknown target kind {self.kind!r}")

    @classmethod
    def uniform(cls) -> "TargetWeight":
        return cls("uniform")

    @classmethod
    def hypergeometric(cls) -> "TargetWeight":
        return cls("hypergeometric")

    def log_weight(self, v: Vector) -> float:
        if self.kind == "uniform":
            return 0.0
        return -sum(_log_factorial(x) for x in v)

    def log_weights_for(self, fiber: Fiber) -> tuple[float, ...]:
        return tuple(self.log_weight(v) for v in fiber.elements)

    def probabilities_for(self, fiber: Fiber) -> tuple[float, ...]:
        """Normalized target probabilities over the fiber elements."""
        logs = self.log_weights_for(fiber)
        peak = max(logs)
        weights = [math.exp(x - peak) for x in logs]
        total = sum(weights)
        return tuple(w / total for w in weights)


_LOG_FACT_CACHE: list[float] = [0.0]


def _log_factorial(n: int) -> float:
    """log(n!) by exact summation of logs of integers, cached."""
    if n < 0:
        raise ValueError("factorial of a negative number")
    while len(_LOG_FACT_CACHE) <= n:
        k = len(_LOG_FACT_CACHE)
        _LOG_FACT_CACHE.append(_LOG_FACT_CACHE[-1] + math.log(k))
    return _LOG_FACT_CACHE[n]


_ALGORITHMS = (
    "naive",
    "poisson",
    "truncated-poisson",
    "geometric",
    "bounded-excursion",
)


@dataclass(frozen=True)
class ChainConfig:
    """Everything that determines a chain's trajectory.

    ``step_bound`` is the truncation bound for the truncated Poisson walk
    and the consecutive-outside-step budget for the bounded excursion walk.
    ``stream`` separates parallel chains run under one seed.
    """

    algorithm: str
    steps: int
    seed: int
    stream: int = 0
    target: TargetWeight = field(default_factory=TargetWeight.uniform)
    poisson_mean: Optional[float] = None
    geometric_p: Optional[float] = None
    step_bound: Optional[int] = None

    def __post_init__(self) -> None:
        if self.algorithm not in _ALGORITHMS:
            raise ValueError(
                f"unknown algorithm {self.algorithm!r}; expected one of {_ALGORITHMS}"
            )
        if self.steps < 1:
            raise ValueError("steps must be at least 1")
        if not isinstance(self.seed, int):
            raise ValueError("seed must be an integer")
        if self.poisson_mean is not None and not self.poisson_mean > 0:
            raise ValueError("poisson_mean must be positive")
        if self.geometric_p is not None and not 0.0 < self.geometric_p < 1.0:
            raise ValueError("geometric_p must lie strictly between 0 and 1")
        if self.step_bound is not None and self.step_bound < 1:
            raise ValueError("step_bound must be at least 1")


@dataclass
class ProposalStats:
    """Counts accumulated over a run; purely diagnostic."""

    proposals: int = 0
    accepted: int = 0
    rejected_outside: int = 0
    rejected_weight: int = 0
    self_loops: int = 0
    coefficient_l1_total: int = 0
    truncation_resamples: int = 0
    failed_excursions: int = 0

    @property
    def acceptance_rate(self) -> float:
        if self.proposals == 0:
            return 0.0
        return self.accepted / self.proposals


@dataclass(frozen=True)
class ChainTrace:
    """A completed walk: state indices into the fiber, one per step plus
    the start, with per-step acceptance flags and proposal statistics.

    ``connectivity_oriented`` marks chains whose stationary distribution is
    not corrected toward the configured target.
    """

    config: ChainConfig
    states: tuple[int, ...]
    accepted: tuple[bool, ...]
    stats: ProposalStats
    connectivity_oriented: bool = False

    def state_vectors(self, fiber: Fiber) -> tuple[Vector, ...]:
        return tuple(fiber.elements[i] for i in self.states)


def _resolve_start(fiber: Fiber, start: Vector | None) -> int:
    if start is None:
        return fiber.base_index
    start = as_vector(start)
    idx = fiber.index.get(start)
    if idx is None:
        raise ValueError(f"start point {start} is not a fiber element")
    return idx


def _require(config: ChainConfig, **fields) -> None:
    for name, needed in fields.items():
        if needed and getattr(config, name) is None:
            raise ValueError(f"algorithm {config.algorithm!r} requires {name}")


def naive_walk(
    fiber: Fiber, basis: MoveBasis, start: Vector | None, config: ChainConfig
) -> ChainTrace:
    """Metropolis walk proposing one uniformly chosen signed basis move."""
    if len(basis) < 1:
        raise ValueError("need at least one move vector")
    rng = RandomStream(config.seed, config.stream)
    cur = _resolve_start(fiber, start)
    log_w = config.target.log_weights_for(fiber)
    index = fiber.index
    elements = fiber.elements
    vectors = basis.vectors
    n2 = 2 * len(vectors)
    stats = ProposalStats()
    states = [cur]
    accepted: list[bool] = []
    for _ in range(config.steps):
        stats.proposals += 1
        stats.coefficient_l1_total += 1
        j = rng.below(n2)
        b = vectors[j >> 1]
        v = elements[cur]
        if j & 1:
            w = tuple(a - x for a, x in zip(v, b))
        else:
            w = tuple(a + x for a, x in zip(v, b))
        nxt = index.get(w)
        if nxt is None:
            stats.rejected_outside += 1
            accepted.append(False)
        else:
            if _mh_accept(rng, log_w[cur], log_w[nxt]):
                if nxt == cur:
                    stats.self_loops += 1
                cur = nxt
                stats.accepted += 1
                accepted.append(True)
            else:
                stats.rejected_weight += 1
                accepted.append(False)
        states.append(cur)
    return ChainTrace(config, tuple(states), tuple(accepted), stats)


def _mh_accept(rng: RandomStream, log_cur: float, log_new: float) -> bool:
    diff = log_new - log_cur
    if diff >= 0:
        return True
    return rng.uniform() < math.exp(diff)


def _combination_walk(
    fiber: Fiber,
    basis: MoveBasis,
    start: Vector | None,
    config: ChainConfig,
    draw_multiplicity,
) -> ChainTrace:
    """Shared engine for walks proposing signed basis combinations."""
    if len(basis) < 1:
        raise ValueError("need at least one move vector")
    rng = RandomStream(config.seed, config.stream)
    cur = _resolve_start(fiber, start)
    log_w = config.target.log_weights_for(fiber)
    index = fiber.index
    elements = fiber.elements
    vectors = basis.vectors
    n = len(vectors)
    r = basis.length
    stats = ProposalStats()
    states = [cur]
    accepted: list[bool] = []
    for _ in range(config.steps):
        stats.proposals += 1
        counts = [draw_multiplicity(rng, stats) for _ in range(n)]
        signs = [rng.sign() for _ in range(n)]
        stats.coefficient_l1_total += sum(counts)
        move = [0] * r
        for i in range(n):
            c = counts[i] * signs[i]
            if c:
                bv = vectors[i]
                for j in range(r):
                    move[j] += c * bv[j]
        v = elements[cur]
        w = tuple(a + d for a, d in zip(v, move))
        nxt = index.get(w)
        if nxt is None:
            stats.rejected_outside += 1
            accepted.append(False)
        else:
            if _mh_accept(rng, log_w[cur], log_w[nxt]):
                if nxt == cur:
                    stats.self_loops += 1
                cur = nxt
                stats.accepted += 1
                accepted.append(True)
            else:
                stats.rejected_weight += 1
                accepted.append(False)
        states.append(cur)
    return ChainTrace(config, tuple(states), tuple(accepted), stats)


def poisson_walk(
    fiber: Fiber, basis: MoveBasis, start: Vector | None, config: ChainConfig
) -> ChainTrace:
    """Metropolis walk proposing signed combinations with Poisson
    multiplicities. An all-zero draw proposes the current state and counts
    as an accepted self-loop."""
    _require(config, poisson_mean=True)
    mean = config.poisson_mean

    def draw(rng: RandomStream, stats: ProposalStats) -> int:
        return rng.poisson(mean)

    return _combination_walk(fiber, basis, start, config, draw)


def truncated_poisson_walk(
    fiber: Fiber, basis: MoveBasis, start: Vector | None, config: ChainConfig
) -> ChainTrace:
    """Poisson-multiplicity walk with each multiplicity conditioned to be
    at most ``step_bound``, drawn by rejection-resampling."""
    _require(config, poisson_mean=True, step_bound=True)
    mean = config.poisson_mean
    bound = config.step_bound

    def draw(rng: RandomStream, stats: ProposalStats) -> int:
        k, resamples = rng.poisson_truncated(mean, bound)
        stats.truncation_resamples += resamples
        return k

    return _combination_walk(fiber, basis, start, config, draw)


def geometric_walk(
    fiber: Fiber, basis: MoveBasis, start: Vector | None, config: ChainConfig
) -> ChainTrace:
    """Metropolis walk with geometric multiplicities on {0, 1, 2, ...}."""
    _require(config, geometric_p=True)
    p = config.geometric_p

    def draw(rng: RandomStream, stats: ProposalStats) -> int:
        return rng.geometric(p)

    return _combination_walk(fiber, basis, start, config, draw)


def bounded_excursion_walk(
    fiber: Fiber, basis: MoveBasis, start: Vector | None, config: ChainConfig
) -> ChainTrace:
    """Single signed moves that may leave the orthant for a while.

    Each step accumulates uniformly chosen signed basis moves. As soon as
    the running point re-enters the fiber it becomes the next state; after
    ``step_bound`` consecutive landings outside, the step gives up and the
    chain stays put. No Metropolis correction is applied, so the trace is
    marked connectivity oriented.
    """
    _require(config, step_bound=True)
    if len(basis) < 1:
        raise ValueError("need at least one move vector")
    rng = RandomStream(config.seed, config.stream)
    cur = _resolve_start(fiber, start)
    index = fiber.index
    elements = fiber.elements
    vectors = basis.vectors
    n2 = 2 * len(vectors)
    bound = config.step_bound
    stats = ProposalStats()
    states = [cur]
    accepted: list[bool] = []
    for _ in range(config.steps):
        stats.proposals += 1
        w = elements[cur]
        outside = 0
        while True:
            stats.coefficient_l1_total += 1
            j = rng.below(n2)
            b = vectors[j >> 1]
            if j & 1:
                w = tuple(a - x for a, x in zip(w, b))
            else:
                w = tuple(a + x for a, x in zip(w, b))
            nxt = index.get(w)
            if nxt is not None:
                if nxt == cur:
                    stats.self_loops += 1
                cur = nxt
                stats.accepted += 1
                accepted.append(True)
                break
            outside += 1
            if outside >= bound:
                stats.failed_excursions += 1
                accepted.append(False)
                break
        states.append(cur)
    return ChainTrace(
        config, tuple(states), tuple(accepted), stats, connectivity_oriented=True
    )


def run_walk(
    fiber: Fiber, basis: MoveBasis, start: Vector | None, config: ChainConfig
) -> ChainTrace:
    """Dispatch on config.algorithm."""
    walks = {
        "naive": naive_walk,
        "poisson": poisson_walk,
        "truncated-poisson": truncated_poisson_walk,
        "geometric": geometric_walk,
        "bounded-excursion": bounded_excursion_walk,
    }
    return walks[config.algorithm](fiber, basis, start, config)


def empirical_distribution(trace: ChainTrace, fiber: Fiber) -> tuple[float, ...]:
    """Visit frequencies over fiber elements, including the start state."""
    counts = [0] * fiber.size
    for s in trace.states:
        counts[s] += 1
    total = len(trace.states)
    return tuple(c / total for c in counts)


def tv_distance(
    frequencies: tuple[float, ...], target: TargetWeight, fiber: Fiber
) -> float:
    """Total variation distance between visit frequencies and the target."""
    if len(frequencies) != fiber.size:
        raise ValueError("frequency vector length does not match the fiber")
    probs = target.probabilities_for(fiber)
    return 0.5 * sum(abs(f - p) for f, p in zip(frequencies, probs))


def chi_square_statistic(
    trace: ChainTrace, target: TargetWeight, fiber: Fiber
) -> tuple[float, int]:
    """Pearson chi-square of visit counts against the target.

    Returns (statistic, degrees of freedom), with fiber size minus one
    degrees of freedom. Ignores autocorrelation; useful as a rough summary,
    not as a calibrated test.
    """
    counts = [0] * fiber.size
    for s in trace.states:
        counts[s] += 1
    total = len(trace.states)
    probs = target.probabilities_for(fiber)
    stat = 0.0
    for c, p in zip(counts, probs):
        expected = p * total
        if expected > 0:
            stat += (c - expected) ** 2 / expected
    return stat, fiber.size - 1


def component_hits(
    trace: ChainTrace, components: tuple[tuple[int, ...], ...]
) -> tuple[Optional[int], ...]:
    """First step index at which each component is visited; None if never.

    The start state counts as step 0.
    """
    comp_of = {}
    for ci, comp in enumerate(components):
        for idx in comp:
            comp_of[idx] = ci
    hits: list[Optional[int]] = [None] * len(components)
    remaining = len(components)
    for step, s in enumerate(trace.states):
        ci = comp_of.get(s)
        if ci is not None and hits[ci] is None:
            hits[ci] = step
            remaining -= 1
            if remaining == 0:
                break
    return tuple(hits)


def poisson_tail_probability(mean: float, bound: int) -> float:
    """P(X >= bound) for X Poisson with the given mean.

    Sums the tail pmf directly (in log space for the leading term) so that
    very small tails keep full relative accuracy instead of vanishing into
    the rounding error of 1 - cdf.
    """
    if mean <= 0:
        raise ValueError("mean must be positive")
    if bound <= 0:
        return 1.0
    log_term = -mean + bound * math.log(mean) - math.lgamma(bound + 1)
    term = math.exp(log_term)
    total = 0.0
    k = bound
    while term > 0.0:
        total += term
        k += 1
        term *= mean / k
        if k > bound + 1000 and term < total * 1e-18:
            break
    return min(1.0, total)

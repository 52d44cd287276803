"""Pure binomials built from move vectors, and saturation generating sets.

A pure binomial is a difference of two monomials, stored as the pair of
exponent vectors. Starting from a set of move vectors, iterated subtraction
products combine the moves into longer binomials; stripping the common
monomial factor of such a product yields a generator candidate for the
saturation of the ideal spanned by the original moves.

Which monomial factor is common to both sides of an iterated product is
governed by a sign pattern: one sign per move (which side of the move goes
into the left monomial) and one sign per variable (which side achieves the
smaller degree in that variable). For a fixed pattern the multiplicity
vectors compatible with it form a cone in N^n closed under addition, so a
finite generating set of each cone is enough to generate everything the
enumeration can reach.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from decimal import Context, ROUND_HALF_UP
from typing import Optional

from .errors import BudgetExceededError
from .intlin import IntMatrix, LatticeSolver, MoveBasis
from .vectors import (
    Vector,
    as_vector,
    is_nonnegative,
    negative_part,
    positive_part,
    sub,
)


class Side(enum.IntEnum):
    """Which monomial side achieves the minimum degree in a variable."""

    MINUS = -1
    BOTH = 0
    PLUS = 1


@dataclass(frozen=True)
class PureBinomial:
    """x^plus - x^minus with nonnegative exponent vectors.

    Reduced means the two monomials share no variable, i.e.
    min(plus[i], minus[i]) == 0 for every i.
    """

    plus: Vector
    minus: Vector

    def __post_init__(self) -> None:
        if len(self.plus) != len(self.minus):
            raise ValueError("exponent vectors must have equal length")
        if not (is_nonnegative(self.plus) and is_nonnegative(self.minus)):
            raise ValueError("exponent vectors must be nonnegative")

    @property
    def nvars(self) -> int:
        return len(self.plus)

    @property
    def is_reduced(self) -> bool:
        return all(min(p, m) == 0 for p, m in zip(self.plus, self.minus))

    @property
    def is_zero(self) -> bool:
        return self.plus == self.minus

    @property
    def difference(self) -> Vector:
        """Exponent difference plus - minus; the move this binomial encodes."""
        return sub(self.plus, self.minus)

    @property
    def degree(self) -> int:
        """Total degree: the larger of the two monomial degrees."""
        return max(sum(self.plus), sum(self.minus))

    def stripped(self) -> "PureBinomial":
        """Divide out the largest common monomial factor."""
        common = tuple(min(p, m) for p, m in zip(self.plus, self.minus))
        return PureBinomial(
            tuple(p - c for p, c in zip(self.plus, common)),
            tuple(m - c for m, c in zip(self.minus, common)),
        )

    def canonical(self) -> "PureBinomial":
        """Reduced form with the lexicographically larger side as plus."""
        b = self.stripped()
        if b.minus > b.plus:
            return PureBinomial(b.minus, b.plus)
        return b

    def to_json_dict(self) -> dict:
        return {
            "plus": [str(x) for x in self.plus],
            "minus": [str(x) for x in self.minus],
        }

    @classmethod
    def from_json_dict(cls, obj: dict) -> "PureBinomial":
        return cls(as_vector(obj["plus"]), as_vector(obj["minus"]))


def binomial_from_move(move: Vector) -> PureBinomial:
    """Reduced binomial whose difference vector is the given move."""
    return PureBinomial(positive_part(move), negative_part(move))


def subtraction(f: PureBinomial, g: PureBinomial) -> PureBinomial:
    """Subtraction product: plus-product minus minus-product.

    The exponent vectors add componentwise; the result encodes
    f.plus * g.plus - f.minus * g.minus as a pure binomial.
    """
    return PureBinomial(
        tuple(a + b for a, b in zip(f.plus, g.plus)),
        tuple(a + b for a, b in zip(f.minus, g.minus)),
    )


@dataclass(frozen=True)
class SignPattern:
    """Per-move orientation signs and per-variable side signs (+1 or -1)."""

    eps: tuple[int, ...]
    delta: tuple[int, ...]

    def __post_init__(self) -> None:
        for name, vals in (("eps", self.eps), ("delta", self.delta)):
            if not vals:
                raise ValueError(f"{name} must be nonempty")
            if any(v not in (-1, 1) for v in vals):
                raise ValueError(f"{name} entries must be +1 or -1")

    def flipped(self) -> "SignPattern":
        return SignPattern(tuple(-e for e in self.eps), self.delta)


def _move_sides(basis: MoveBasis) -> tuple[tuple[Vector, ...], tuple[Vector, ...]]:
    pos = tuple(positive_part(b) for b in basis.vectors)
    neg = tuple(negative_part(b) for b in basis.vectors)
    return pos, neg


def order_sums(
    eps: tuple[int, ...], t: Vector, basis: MoveBasis
) -> tuple[Vector, Vector]:
    """Per-variable degrees of the two monomials of the iterated product.

    Entry j of the first vector is the degree of variable j in the plus
    monomial of the product of (oriented move i)^t[i]; the second vector is
    the same for the minus monomial.
    """
    n = len(basis.vectors)
    if len(eps) != n or len(t) != n:
        raise ValueError("eps and t must have one entry per move")
    pos, neg = _move_sides(basis)
    r = basis.length
    p = [0] * r
    m = [0] * r
    for i in range(n):
        ti = t[i]
        if ti == 0:
            continue
        if ti < 0:
            raise ValueError("multiplicities must be nonnegative")
        fp = pos[i] if eps[i] > 0 else neg[i]
        fm = neg[i] if eps[i] > 0 else pos[i]
        for j in range(r):
            p[j] += ti * fp[j]
            m[j] += ti * fm[j]
    return tuple(p), tuple(m)


def iterated_subtraction(
    eps: tuple[int, ...], t: Vector, basis: MoveBasis
) -> PureBinomial:
    """Product of oriented moves with multiplicities, as a pure binomial.

    Orientation +1 uses the move as is, -1 swaps its sides. The result's
    difference vector is sum_i eps[i] * t[i] * basis[i].
    """
    p, m = order_sums(eps, t, basis)
    return PureBinomial(p, m)


def side_achieved(
    eps: tuple[int, ...], t: Vector, basis: MoveBasis, index: int
) -> Side:
    """Which side of the iterated product has the smaller degree in variable
    ``index`` (0-based); BOTH when the degrees tie."""
    p, m = order_sums(eps, t, basis)
    if p[index] < m[index]:
        return Side.PLUS
    if p[index] > m[index]:
        return Side.MINUS
    return Side.BOTH


def _sides_from_orders(p: Vector, m: Vector) -> tuple[Side, ...]:
    out = []
    for pj, mj in zip(p, m):
        if pj < mj:
            out.append(Side.PLUS)
        elif pj > mj:
            out.append(Side.MINUS)
        else:
            out.append(Side.BOTH)
    return tuple(out)


def _compatible(sides: tuple[Side, ...], delta: tuple[int, ...]) -> bool:
    return all(s is Side.BOTH or int(s) == d for s, d in zip(sides, delta))


def _compositions(total: int, parts: int):
    """All tuples of ``parts`` nonnegative ints summing to ``total``, in
    lexicographic order."""
    if parts == 1:
        yield (total,)
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@dataclass(frozen=True)
class ConeGeneratorSet:
    """Generating multiplicity vectors for one sign pattern's cone."""

    pattern: SignPattern
    generators: tuple[Vector, ...]
    cap: int


def cone_generators(pattern: SignPattern, basis: MoveBasis, cap: int) -> ConeGeneratorSet:
    """Generators of the multiplicity cone of one sign pattern, up to ``cap``.

    Enumerates nonzero t in N^n with L1 norm at most cap that realize the
    pattern's per-variable sides (ties count as either side), then keeps t
    only if it is not a retained member plus another nonzero cone member.
    Every cone member within the cap is an N-combination of the result.
    """
    if cap < 1:
        raise ValueError("cap must be at least 1")
    n = len(basis.vectors)
    if len(pattern.eps) != n:
        raise ValueError("pattern has wrong number of move signs")
    if len(pattern.delta) != basis.length:
        raise ValueError("pattern has wrong number of variable signs")
    retained: list[tuple[Vector, Vector, Vector]] = []
    for total in range(1, cap + 1):
        for t in _compositions(total, n):
            p, m = order_sums(pattern.eps, t, basis)
            if not _compatible(_sides_from_orders(p, m), pattern.delta):
                continue
            if _cone_redundant(t, p, m, retained, pattern.delta):
                continue
            retained.append((t, p, m))
    return ConeGeneratorSet(pattern, tuple(r[0] for r in retained), cap)


def _cone_redundant(
    t: Vector,
    p: Vector,
    m: Vector,
    retained: list[tuple[Vector, Vector, Vector]],
    delta: tuple[int, ...],
) -> bool:
    """True when t = s + c for a retained s and a nonzero cone member c."""
    for s, sp, sm in retained:
        rest = tuple(a - b for a, b in zip(t, s))
        if any(x < 0 for x in rest):
            continue
        # rest is nonzero: equal L1 would force rest == 0, but s was
        # retained in an earlier shell or earlier in this one.
        rp = sub(p, sp)
        rm = sub(m, sm)
        if _compatible(_sides_from_orders(rp, rm), delta):
            return True
    return False


def norm_bound(n: int, beta: int) -> int:
    """The worst-case combination length bound n * (2 n beta)^(n-1).

    Any fiber step between points of one fiber can be realized by a signed
    combination of at most this many basis moves once the saturation
    generators exist; it also caps the multiplicity enumeration needed to
    produce them.
    """
    if n < 1:
        raise ValueError("need at least one move vector")
    if beta < 1:
        raise ValueError("beta must be positive (an all-zero basis has no bound)")
    return n * (2 * n * beta) ** (n - 1)


def scientific_string(value: int, sig_figs: int = 3) -> str:
    """Round an integer to a short scientific string like '3.63e134'."""
    if sig_figs < 1:
        raise ValueError("need at least one significant figure")
    if value == 0:
        return "0"
    ctx = Context(prec=sig_figs, rounding=ROUND_HALF_UP)
    d = ctx.create_decimal(value)
    mantissa, exponent = f"{d:e}".split("e")
    return f"{mantissa}e{int(exponent)}"


@dataclass(frozen=True)
class GeneratorWitness:
    """The (eps, delta, t) choice that produced a saturation generator."""

    eps: tuple[int, ...]
    delta: tuple[int, ...]
    t: Vector


@dataclass(frozen=True)
class SaturationResult:
    """Saturation generating set with provenance and the theoretical cap.

    ``binomials`` are reduced, deduplicated up to global sign, and sorted by
    total degree then lexicographically. ``witnesses`` maps each binomial to
    the first sign pattern and multiplicity vector that produced it.
    ``theoretical_bound`` is norm_bound(n, beta) for the input basis, which
    may far exceed the cap actually used.
    """

    binomials: tuple[PureBinomial, ...]
    witnesses: dict[PureBinomial, GeneratorWitness]
    cap_used: int
    theoretical_bound: int

    def moves(self) -> tuple[Vector, ...]:
        return tuple(b.difference for b in self.binomials)

    def to_json_dict(self) -> dict:
        items = []
        for b in self.binomials:
            w = self.witnesses[b]
            items.append(
                {
                    **b.to_json_dict(),
                    "witness": {
                        "eps": list(w.eps),
                        "delta": list(w.delta),
                        "t": list(w.t),
                    },
                }
            )
        return {
            "binomials": items,
            "cap_used": self.cap_used,
            "theoretical_bound": str(self.theoretical_bound),
        }


def _binomial_sort_key(b: PureBinomial):
    return (b.degree, b.plus, b.minus)


def saturation_generators(
    basis: MoveBasis,
    cap: Optional[int] = None,
    budget: int = 10_000_000,
) -> SaturationResult:
    """Generate saturation binomials from a move basis by cone enumeration.

    For each orientation pattern (modulo flipping all moves at once, which
    only negates the result), multiplicity vectors up to the cap are
    enumerated shell by shell in L1 norm. Each vector is assigned to the
    cones of every compatible per-variable side pattern; vectors that
    decompose inside a cone are dropped, and each cone generator contributes
    the stripped iterated product as an output binomial.

    The default cap is (2 n beta)^(n-1). The planned enumeration size is
    2^(n-1) * (C(cap + n, n) - 1); when it exceeds ``budget`` the call fails
    up front with a BudgetExceededError rather than silently truncating.
    """
    n = len(basis.vectors)
    if n < 1:
        raise ValueError("need at least one move vector")
    if basis.beta < 1:
        raise ValueError("all-zero move basis has no saturation generators")
    if cap is None:
        cap = (2 * n * basis.beta) ** (n - 1)
    if cap < 1:
        raise ValueError("cap must be at least 1")
    if budget < 1:
        raise ValueError("budget must be at least 1")

    planned = (2 ** (n - 1)) * (math.comb(cap + n, n) - 1)
    if planned > budget:
        raise BudgetExceededError(
            f"saturation enumeration needs {planned} multiplicity vectors, "
            f"budget is {budget} (0.0% completed); raise the budget or lower the cap",
            completed=0,
            planned=planned,
        )

    solver = LatticeSolver(basis.column_matrix())
    found: dict[PureBinomial, GeneratorWitness] = {}

    for eps in _orientation_patterns(n):
        cones: dict[tuple[int, ...], list[tuple[Vector, Vector, Vector]]] = {}
        for total in range(1, cap + 1):
            for t in _compositions(total, n):
                p, m = order_sums(eps, t, basis)
                sides = _sides_from_orders(p, m)
                emitted = False
                for delta in _delta_completions(sides):
                    retained = cones.setdefault(delta, [])
                    if _cone_redundant(t, p, m, retained, delta):
                        continue
                    retained.append((t, p, m))
                    if emitted:
                        continue
                    emitted = True
                    binom = PureBinomial(p, m).canonical()
                    if binom.is_zero or binom in found:
                        continue
                    if solver.solve(binom.difference) is None:
                        raise RuntimeError(
                            f"generator {binom} left the move lattice; "
                            "this indicates a bug in the enumeration"
                        )
                    found[binom] = GeneratorWitness(eps, delta, t)

    ordered = tuple(sorted(found, key=_binomial_sort_key))
    return SaturationResult(
        binomials=ordered,
        witnesses=found,
        cap_used=cap,
        theoretical_bound=norm_bound(n, basis.beta),
    )


def _orientation_patterns(n: int):
    """All sign tuples in {+1,-1}^n with the first entry +1.

    Flipping every orientation at once only swaps the two sides of the
    result, so half the patterns suffice.
    """
    for bits in range(2 ** (n - 1)):
        yield (1,) + tuple(1 if (bits >> i) & 1 == 0 else -1 for i in range(n - 1))


def _delta_completions(sides: tuple[Side, ...]):
    """All per-variable sign tuples compatible with the achieved sides."""
    choices = [((1, -1) if s is Side.BOTH else (int(s),)) for s in sides]
    total = 1
    for c in choices:
        total *= len(c)
    out = []
    for idx in range(total):
        pattern = []
        k = idx
        for c in choices:
            k, pick = divmod(k, len(c))
            pattern.append(c[pick])
        out.append(tuple(pattern))
    return out


def reduce_generating_set(
    binomials: tuple[PureBinomial, ...] | list[PureBinomial],
    basis: MoveBasis,
    search_bound: int,
    state_cap: int = 200_000,
) -> tuple[PureBinomial, ...]:
    """Greedy pruning of a generating set, keeping connectivity.

    Candidates are dropped largest total degree first (ties broken
    lexicographically). A binomial may go when its plus exponent vector can
    reach its minus exponent vector inside N^r using the remaining
    binomials' difference vectors as steps, with every coordinate bounded by
    ``search_bound``. Searches that would visit more than ``state_cap``
    states give up and keep the binomial, so the result stays a generating
    set even when the search is cut short.
    """
    if search_bound < 1:
        raise ValueError("search_bound must be at least 1")
    solver = LatticeSolver(basis.column_matrix())
    unique: dict[PureBinomial, None] = {}
    for b in binomials:
        c = b.canonical()
        if c.is_zero:
            continue
        if solver.solve(c.difference) is None:
            raise ValueError(f"binomial {c} is not in the lattice of the basis")
        unique[c] = None

    current = list(unique)
    order = sorted(current, key=lambda b: (-b.degree, b.plus, b.minus))
    for g in order:
        others = [h for h in current if h != g]
        if not others:
            continue
        moves = [h.difference for h in others]
        if _connects(g.plus, g.minus, moves, search_bound, state_cap):
            current = others
    return tuple(sorted(current, key=_binomial_sort_key))


def _connects(
    start: Vector,
    goal: Vector,
    moves: list[Vector],
    bound: int,
    state_cap: int,
) -> bool:
    """BFS inside N^r with coordinates <= bound; False when the cap trips."""
    if start == goal:
        return True
    steps = []
    for mv in moves:
        steps.append(mv)
        steps.append(tuple(-x for x in mv))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for v in frontier:
            for mv in steps:
                w = tuple(a + b for a, b in zip(v, mv))
                if w in seen:
                    continue
                ok = True
                for x in w:
                    if x < 0 or x > bound:
                        ok = False
                        break
                if not ok:
                    continue
                if w == goal:
                    return True
                seen.add(w)
                if len(seen) > state_cap:
                    return False
                nxt.append(w)
        frontier = nxt
    return False

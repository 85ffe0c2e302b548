"""Certified growth-rate upper bounds and the rational cut enumerators.

Every certifying comparison is exact: ``x^n > m`` for ``x = p/q`` is checked
as ``p^n > m q^n`` on Python integers.  Floats only appear in reports.
"""
from __future__ import annotations

import itertools
import logging
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterator

import numpy as np

from .census import (BallCensus, CensusError, GenerationStatus, UpperCensus, UpperCensusEngine,
                     exact_balls, generates_semi)
from .consequences import Oracle, make_oracle
from .words import GenSetSpec, Presentation, Word, canonical_member, reduced_words, shortlex_key

log = logging.getLogger(__name__)


# --------------------------------------------------------------------------
# Fekete upper bound


@dataclass(frozen=True)
class EgrUpperBound:
    witness_radius: int
    witness_count: int
    certified_exact: bool

    @property
    def value(self) -> float:
        return self.witness_count ** (1.0 / self.witness_radius)

    def exceeded_by(self, x: Fraction) -> bool:
        """Exact test ``x^n > m``."""
        return cut_holds(Fraction(x), self.witness_radius, self.witness_count)

    def format(self, digits: int = 6) -> str:
        return f"{self.value:.{digits}f}"


def _root_less(m1: int, n1: int, m2: int, n2: int) -> bool:
    # m1^(1/n1) < m2^(1/n2)
    return m1 ** n2 < m2 ** n1


def egr_upper(c: BallCensus | UpperCensus) -> EgrUpperBound:
    """``min_{n >= 1} size[n]^(1/n)`` with its witness; ties go to the least n."""
    sizes = c.ball_sizes
    if len(sizes) < 2:
        raise ValueError("census needs radius >= 1 for an upper bound")
    best_n, best_m = 1, sizes[1]
    for n in range(2, len(sizes)):
        if _root_less(sizes[n], n, best_m, best_n):
            best_n, best_m = n, sizes[n]
    return EgrUpperBound(best_n, best_m, bool(c.exact))


# --------------------------------------------------------------------------
# Rationals


def cut_holds(x: Fraction, n: int, m: int) -> bool:
    return x.numerator ** n > m * x.denominator ** n


def stern_brocot_level(level: int) -> list[Fraction]:
    """Rationals > 1 at ``level`` of the Stern-Brocot subtree rooted at 2.

    Level 0 is ``[2]``, level 1 is ``[3/2, 3]``, and every rational > 1
    appears exactly once.
    """
    # nodes as (value, left bound, right bound); 1/0 stands for infinity
    nodes = [((2, 1), (1, 1), (1, 0))]
    for _ in range(level):
        nxt = []
        for (p, q), (lp, lq), (rp, rq) in nodes:
            nxt.append(((lp + p, lq + q), (lp, lq), (p, q)))
            nxt.append(((p + rp, q + rq), (p, q), (rp, rq)))
        nodes = nxt
    return [Fraction(p, q) for (p, q), _, _ in nodes]


def stern_brocot_depth(x: Fraction) -> int:
    """Level of ``x > 1`` in the tree of ``stern_brocot_level``."""
    x = Fraction(x)
    if x <= 1:
        raise ValueError("only rationals > 1 are in the tree")
    (p, q), (lp, lq), (rp, rq) = (2, 1), (1, 1), (1, 0)
    depth = 0
    while Fraction(p, q) != x:
        if x < Fraction(p, q):
            (p, q), (rp, rq) = (lp + p, lq + q), (p, q)
        else:
            (p, q), (lp, lq) = (p + rp, q + rq), (p, q)
        depth += 1
    return depth


def free_rank_floor(k: int) -> int:
    """``2k - 1``: no generating set of a free group of rank ``k`` grows slower."""
    if k < 1:
        raise ValueError("rank must be >= 1")
    return 2 * k - 1


# --------------------------------------------------------------------------
# Cut stream


@dataclass(frozen=True)
class CutItem:
    x: Fraction
    radius: int
    count: int
    budget: int

    @property
    def certificate(self) -> tuple[int, int]:
        return self.radius, self.count

    def verify(self) -> bool:
        return cut_holds(self.x, self.radius, self.count)


class _Counts:
    """Ball-size source for a stream: exact census or a growing upper census."""

    def __init__(self, p: Presentation, s: GenSetSpec, oracle: Oracle, budget_unit: int, cap: int):
        self.exact = oracle.exact
        self.oracle = oracle
        self.genset = s
        self.budget_unit = budget_unit
        self._exact: tuple[int, ...] = (1,)
        self.engine = None if self.exact else UpperCensusEngine(p, s, cap=cap)
        self.unavailable_from: int | None = None

    def budget_steps(self, b: int) -> int:
        return self.budget_unit * b

    def count(self, n: int, b: int) -> tuple[int, int] | None:
        """``(m, budget)`` with ``m >= gr(n)``, or None past the node cap."""
        if self.exact:
            if n >= len(self._exact):
                self._exact = exact_balls(self.oracle, self.genset, n).ball_sizes
            return self._exact[n], 0
        if self.unavailable_from is not None and n >= self.unavailable_from:
            return None
        e = self.engine
        e.advance(self.budget_steps(b))
        if not e.extend(n):
            self.unavailable_from = n
            return None
        return e.sizes(n)[n], e.log_steps


class CutStream:
    """Resumable fair sweep over (rational level, radius, budget index).

    Triples are visited in increasing ``level_weight*level + radius + budget``.
    For exact oracles the budget axis is degenerate and only index 0 is used.
    Emissions are never retracted; ``run`` picks up where it stopped.
    """

    def __init__(self, p: Presentation, s: GenSetSpec, *, oracle: Oracle | None = None,
                 generation: GenerationStatus | None = None, budget_unit: int = 100,
                 level_weight: int = 1, max_level: int = 24, cap: int = 1_000_000,
                 upper: Fraction | None = None):
        self.presentation = p
        self.genset = s
        oracle = oracle if oracle is not None else make_oracle(p)
        self._counts = _Counts(p, s, oracle, budget_unit, cap)
        self.generation = generation
        self.level_weight = level_weight
        self.max_level = max_level
        self.upper = upper
        self.emitted: list[CutItem] = []
        self._done: set[Fraction] = set()
        self._levels: dict[int, list[Fraction]] = {}
        self._weight = 1
        self.floor = Fraction(1)
        if p.is_free and generation is not None and generation.generates:
            self.floor = Fraction(free_rank_floor(p.rank))

    @property
    def conditional(self) -> bool:
        """True when generation of the whole group was not certified."""
        return not (self.generation is not None and self.generation.generates)

    @property
    def weight(self) -> int:
        return self._weight

    def _level(self, level: int) -> list[Fraction]:
        if level not in self._levels:
            xs = stern_brocot_level(level)
            self._levels[level] = [x for x in xs if x > self.floor and (self.upper is None or x < self.upper)]
        return self._levels[level]

    def _triples(self, w: int):
        lw = self.level_weight
        max_b = 0 if self._counts.exact else w
        for level in range(0, min(self.max_level, w // lw) + 1):
            rest = w - lw * level
            for n in range(1, rest + 1):
                b = rest - n
                if b <= max_b and (b == 0 or not self._counts.exact):
                    yield level, n, b

    def run(self, max_weight: int | None = None, emit_limit: int | None = None) -> Iterator[CutItem]:
        """Advance the sweep, yielding new emissions."""
        new = 0
        while max_weight is None or self._weight <= max_weight:
            w = self._weight
            for level, n, b in self._triples(w):
                xs = [x for x in self._level(level) if x not in self._done]
                if not xs:
                    continue
                got = self._counts.count(n, b)
                if got is None:
                    continue
                m, steps = got
                for x in xs:
                    if cut_holds(x, n, m):
                        item = CutItem(x, n, m, steps)
                        self._done.add(x)
                        self.emitted.append(item)
                        new += 1
                        yield item
                        if emit_limit is not None and new >= emit_limit:
                            return
            self._weight += 1

    def first_below(self, r: Fraction, max_weight: int) -> CutItem | None:
        for item in self.emitted:
            if item.x < r:
                return item
        for item in self.run(max_weight):
            if item.x < r:
                return item
        return None


def cut_enumerate(p: Presentation, s: GenSetSpec, schedule_budget: int, *, emit_limit: int | None = None,
                  generation_budget: int = 4, **kwargs) -> CutStream:
    """Run a fresh ``CutStream`` up to sweep weight ``schedule_budget``."""
    gen = kwargs.pop("generation", None)
    if gen is None:
        gen = generates_semi(p, s, budget=generation_budget, steps_per_stage=kwargs.get("budget_unit", 100))
    stream = CutStream(p, s, generation=gen, **kwargs)
    for _ in stream.run(schedule_budget, emit_limit):
        pass
    return stream


# --------------------------------------------------------------------------
# Below-threshold stream


def candidate_gensets(p: Presentation, total_length: int, size: int | None = None) -> list[GenSetSpec]:
    """Normalized candidate sets of exactly this spelled length (and size), shortlex."""
    words: dict[int, list[Word]] = {}
    for L in range(1, total_length + 1):
        seen = {canonical_member(w) for w in reduced_words(p.rank, L)}
        words[L] = sorted(seen, key=shortlex_key)
    pool = [w for L in range(1, total_length + 1) for w in words[L]]
    out = []

    def extend(start: int, remaining: int, chosen: list[Word]):
        if remaining == 0:
            if size is None or len(chosen) == size:
                out.append(GenSetSpec.of(chosen))
            return
        if size is not None and len(chosen) >= size:
            return
        for i in range(start, len(pool)):
            w = pool[i]
            if len(w) > remaining:
                continue
            chosen.append(w)
            extend(i + 1, remaining - len(w), chosen)
            chosen.pop()

    extend(0, total_length, [])
    out.sort(key=lambda g: g.sort_key())
    return out


@dataclass
class BelowEmission:
    genset: GenSetSpec
    cut: CutItem
    generation: GenerationStatus = field(repr=False)


def simplest_cut_below(n: int, m: int, r: Fraction, floor: Fraction = Fraction(1)) -> Fraction | None:
    """The Stern-Brocot-first ``x`` with ``max(floor, m^(1/n)) < x < r``, if any."""
    r = Fraction(r)
    if r <= floor or r.numerator ** n <= m * r.denominator ** n:
        return None
    (p, q), (lp, lq), (rp, rq) = (2, 1), (1, 1), (1, 0)
    while True:
        x = Fraction(p, q)
        if x >= r:
            (p, q), (rp, rq) = (lp + p, lq + q), (p, q)
        elif x <= floor or not cut_holds(x, n, m):
            (p, q), (lp, lq) = (p + rp, q + rq), (p, q)
        else:
            return x


class BelowThresholdStream:
    """Dovetail candidate sets, generation checks and cuts below ``r``.

    Round ``j`` admits the next candidate and then, for every live candidate,
    checks the (radius, budget) pairs of weight ``j - admission round``.  A
    set is emitted with the simplest rational ``x < r`` certified at the
    first pair where one exists, which is exactly when ``m < r^n``.
    """

    def __init__(self, p: Presentation, r: Fraction, max_genset_length: int, *, generation_budget: int = 4,
                 steps_per_stage: int = 200, budget_unit: int = 100, cap: int = 200_000):
        self.presentation = p
        self.r = Fraction(r)
        self.max_genset_length = max_genset_length
        self.generation_budget = generation_budget
        self.steps_per_stage = steps_per_stage
        self.budget_unit = budget_unit
        self.cap = cap
        self.emitted: list[BelowEmission] = []
        self.undecided: list[GenSetSpec] = []
        self.rounds = 0
        self._candidates = itertools.chain.from_iterable(
            candidate_gensets(p, L) for L in range(1, max_genset_length + 1))
        self._active: list[list] = []  # [genset, generation, counts, weight]
        self.pruned = False
        self.floor = Fraction(1)
        if self.r <= 1:
            warnings.warn("no generating set has growth rate below 1; nothing will be emitted")
            self.pruned = True
        elif p.is_free:
            self.floor = Fraction(free_rank_floor(p.rank))
            self.pruned = self.r <= self.floor
        self._oracle = None if self.pruned else make_oracle(p)

    def _admit(self, s: GenSetSpec):
        if self._oracle.exact and not all(self._oracle.normalize(w) for w in s.members):
            return  # a member is trivial in the group
        gen = generates_semi(self.presentation, s, self.generation_budget, self.steps_per_stage)
        if not gen.generates:
            self.undecided.append(s)
            return
        counts = _Counts(self.presentation, s, self._oracle, self.budget_unit, self.cap)
        self._active.append([s, gen, counts, 0])

    def _advance(self, entry) -> CutItem | None:
        s, gen, counts, w = entry
        w += 1
        entry[3] = w
        for n in range(1, w + 1):
            b = w - n
            if counts.exact and b:
                continue
            got = counts.count(n, b)
            if got is None:
                continue
            m, steps = got
            x = simplest_cut_below(n, m, self.r, self.floor)
            if x is not None:
                return CutItem(x, n, m, steps)
        return None

    def run(self, rounds: int) -> Iterator[BelowEmission]:
        if self.pruned:
            return
        for _ in range(rounds):
            self.rounds += 1
            s = next(self._candidates, None)
            if s is not None:
                self._admit(s)
            still = []
            for entry in self._active:
                item = self._advance(entry)
                if item is None:
                    still.append(entry)
                    continue
                em = BelowEmission(entry[0], item, entry[1])
                self.emitted.append(em)
                yield em
            self._active = still


def below_r_enumerate(p: Presentation, r: Fraction, max_genset_length: int, rounds: int, **kwargs
                      ) -> BelowThresholdStream:
    stream = BelowThresholdStream(p, r, max_genset_length, **kwargs)
    for _ in stream.run(rounds):
        pass
    return stream


# --------------------------------------------------------------------------
# Point estimates (not certified)


@dataclass(frozen=True)
class RatioEstimate:
    ratio: float
    recurrence: tuple[Fraction, ...] | None
    dominant_root: float | None
    held_out: int
    finite: bool = False
    certified: bool = False


def _solve(a: list[list[Fraction]], b: list[Fraction]) -> list[Fraction] | None:
    n = len(b)
    m = [row[:] + [b[i]] for i, row in enumerate(a)]
    for col in range(n):
        piv = next((r for r in range(col, n) if m[r][col] != 0), None)
        if piv is None:
            return None
        m[col], m[piv] = m[piv], m[col]
        for r in range(n):
            if r != col and m[r][col] != 0:
                f = m[r][col] / m[col][col]
                m[r] = [x - f * y for x, y in zip(m[r], m[col])]
    return [m[i][n] / m[i][i] for i in range(n)]


def fit_recurrence(seq: list[int], max_order: int = 4, held_out: int = 3):
    """Least-order recurrence exactly satisfied by ``seq``; returns ``(coeffs, held)``."""
    for d in range(1, max_order + 1):
        if len(seq) < 2 * d + 1:
            break
        a = [[Fraction(seq[i - j]) for j in range(1, d + 1)] for i in range(d, 2 * d)]
        b = [Fraction(seq[i]) for i in range(d, 2 * d)]
        c = _solve(a, b)
        if c is None:
            continue
        if all(sum(cj * seq[i - j - 1] for j, cj in enumerate(c)) == seq[i] for i in range(d, len(seq))):
            checked = max(0, min(held_out, len(seq) - 2 * d))
            return tuple(c), checked
    return None, 0


def ratio_estimate(c: BallCensus) -> RatioEstimate:
    """Sphere ratio plus a recurrence fit of the sphere sequence; never certified."""
    if not c.exact:
        raise ValueError("ratio estimates need an exact census")
    if c.n_max < 4:
        raise ValueError("ratio estimates need radius >= 4")
    spheres = list(c.sphere_sizes)
    if 0 in spheres:
        return RatioEstimate(1.0, None, None, 0, finite=True)
    ratio = spheres[-1] / spheres[-2]
    coeffs, held = fit_recurrence(spheres[1:])
    root = None
    if coeffs is not None:
        roots = np.roots([1.0] + [-float(x) for x in coeffs])
        root = float(max(abs(z) for z in roots))
    return RatioEstimate(ratio, coeffs, root, held)

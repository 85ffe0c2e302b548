"""Cayley-ball censuses: exact, certified upper, and generation checks.

Ball radius is measured in the generating set: each member of ``S'`` and its
inverse is one edge, whatever its spelling in the presentation alphabet.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from . import derivations as dv
from .consequences import ConsequenceLog, Oracle
from .derivations import Derivation
from .words import EMPTY, GenSetSpec, Presentation, Word, free_reduce, invert, multiply


class CensusError(ValueError):
    pass


@dataclass(frozen=True)
class BallCensus:
    genset: GenSetSpec
    ball_sizes: tuple[int, ...]
    exact: bool = True

    @property
    def n_max(self) -> int:
        return len(self.ball_sizes) - 1

    @property
    def sphere_sizes(self) -> tuple[int, ...]:
        b = self.ball_sizes
        return (b[0],) + tuple(b[i] - b[i - 1] for i in range(1, len(b)))

    def truncate(self, n: int) -> "BallCensus":
        return BallCensus(self.genset, self.ball_sizes[: n + 1], self.exact)


@dataclass(frozen=True)
class UpperCensus:
    """Counts ``m_n >= gr(n)`` certified with ``log_steps`` consequence steps."""

    genset: GenSetSpec
    upper_sizes: tuple[int, ...]
    log_steps: int

    @property
    def ball_sizes(self) -> tuple[int, ...]:
        return self.upper_sizes

    @property
    def n_max(self) -> int:
        return len(self.upper_sizes) - 1

    exact = False


# --------------------------------------------------------------------------
# Free groups: Stallings folding


def subgroup_rank(words: Sequence[Word]) -> int:
    """Rank of the subgroup of a free group generated by ``words``.

    Builds the bouquet of loops, folds it, and returns ``E - V + 1``.
    """
    edges: set[tuple[int, int, int]] = set()  # (source, positive letter, target)
    next_vertex = 1
    for w in words:
        w = free_reduce(w)
        if not w:
            continue
        v = 0
        for i, x in enumerate(w):
            u = 0 if i == len(w) - 1 else next_vertex
            if u:
                next_vertex += 1
            edges.add((v, x, u) if not x & 1 else (u, x ^ 1, v))
            v = u
    while True:
        seen: dict[tuple[int, int, int], int] = {}
        merge = None
        for s, x, t in edges:
            for key, other in (((s, x, 0), t), ((t, x, 1), s)):
                if key in seen and seen[key] != other:
                    merge = (seen[key], other)
                    break
                seen[key] = other
            if merge:
                break
        if merge is None:
            break
        keep, drop = min(merge), max(merge)
        edges = {(keep if s == drop else s, x, keep if t == drop else t) for s, x, t in edges}
    vertices = {0} | {s for s, _, _ in edges} | {t for _, _, t in edges}
    return len(edges) - len(vertices) + 1


def is_free_basis(s: GenSetSpec) -> bool:
    """Whether the members of ``s`` freely generate the subgroup they span."""
    return all(s.members) and subgroup_rank(s.members) == len(s.members)


def _tree_ball_sizes(k: int, n_max: int) -> tuple[int, ...]:
    # reduced words over k letters, counted by last letter
    if k == 0:
        return (1,) * (n_max + 1)
    sizes = [1]
    by_last = [0] * (2 * k)
    for n in range(1, n_max + 1):
        if n == 1:
            by_last = [1] * (2 * k)
        else:
            total = sum(by_last)
            by_last = [total - by_last[x ^ 1] for x in range(2 * k)]
        sizes.append(sizes[-1] + sum(by_last))
    return tuple(sizes)


# --------------------------------------------------------------------------
# Exact censuses


def _check_members(oracle: Oracle, s: GenSetSpec) -> list[Word]:
    gens = []
    for w in s.members:
        nf = oracle.normalize(w)
        if not nf:
            raise CensusError(f"generating-set member {oracle.presentation.format_word(w)} is trivial in the group")
        gens.append(nf)
    return gens


def exact_balls(oracle: Oracle, s: GenSetSpec, n_max: int, method: str = "auto") -> BallCensus:
    """Exact ball sizes by breadth-first search over normal forms.

    ``method="auto"`` counts reduced words directly when the oracle is free
    and ``s`` is a free basis of its span (checked by Stallings folding);
    ``"bfs"`` always searches.
    """
    if not oracle.exact:
        raise CensusError("exact censuses need a free or confluent oracle")
    if n_max < 0:
        raise CensusError("n_max must be >= 0")
    gens = _check_members(oracle, s)
    if method == "auto" and oracle.kind == "free" and is_free_basis(s):
        return BallCensus(s, _tree_ball_sizes(len(s), n_max), True)
    steps = []
    for g in gens:
        steps.append(g)
        steps.append(oracle.normalize(invert(g)))
    free = oracle.kind == "free"
    reduce = oracle.system.reduce if not free else None
    seen = {EMPTY}
    frontier = [EMPTY]
    sizes = [1]
    for _ in range(n_max):
        nxt = []
        add = seen.add
        for w in frontier:
            for g in steps:
                v = multiply(w, g) if free else reduce(w + g)
                if v not in seen:
                    add(v)
                    nxt.append(v)
        frontier = nxt
        sizes.append(len(seen))
    return BallCensus(s, tuple(sizes), True)


# --------------------------------------------------------------------------
# Upper censuses


class UpperCensusEngine:
    """Anytime over-approximation of ball sizes in the semi-decision regime.

    Nodes are words in the presentation alphabet reduced by the log's current
    rules; each node carries the least radius at which it was reached.  When
    the log learns new rules, nodes whose reduced form changes are merged.
    Nodes only ever merge, so every count is nonincreasing as the budget
    grows, and each count stays >= the true ball size.
    """

    def __init__(self, p: Presentation, s: GenSetSpec, log: ConsequenceLog | None = None,
                 cap: int | None = None):
        self.presentation = p
        self.genset = s
        self.log = log if log is not None else ConsequenceLog(p)
        self.cap = cap
        self._steps = s.symmetrized()
        self.radius_of: dict[Word, int] = {EMPTY: 0}
        self.frontier: list[Word] = [EMPTY]
        self.radius = 0
        self._rules_seen = len(self.log.reducer)

    @property
    def log_steps(self) -> int:
        return self.log.steps

    def advance(self, log_steps: int) -> bool:
        """Advance the log to ``log_steps`` total steps and merge nodes."""
        if log_steps > self.log.steps:
            self.log.step(log_steps - self.log.steps)
        if len(self.log.reducer) == self._rules_seen:
            return False
        self._rules_seen = len(self.log.reducer)
        reduce = self.log.reducer.reduce
        merged: dict[Word, int] = {}
        for w, r in self.radius_of.items():
            v = reduce(w)
            old = merged.get(v)
            if old is None or r < old:
                merged[v] = r
        self.radius_of = merged
        self.frontier = [w for w, r in merged.items() if r == self.radius]
        return True

    def extend(self, n: int) -> bool:
        """Grow the explored radius to ``n``; False if the node cap is hit."""
        reduce = self.log.reducer.reduce
        while self.radius < n:
            new: dict[Word, None] = {}
            known = self.radius_of
            for w in self.frontier:
                for g in self._steps:
                    v = reduce(multiply(w, g))
                    if v not in known and v not in new:
                        new[v] = None
                        if self.cap is not None and len(known) + len(new) > self.cap:
                            return False
            self.radius += 1
            for v in new:
                known[v] = self.radius
            self.frontier = list(new)
        return True

    def sizes(self, n_max: int | None = None) -> tuple[int, ...]:
        n_max = self.radius if n_max is None else min(n_max, self.radius)
        counts = [0] * (self.radius + 1)
        for r in self.radius_of.values():
            counts[r] += 1
        out, total = [], 0
        for n in range(n_max + 1):
            total += counts[n]
            out.append(total)
        return tuple(out)

    def census(self, n_max: int | None = None) -> UpperCensus:
        return UpperCensus(self.genset, self.sizes(n_max), self.log.steps)


def upper_balls(p: Presentation, s: GenSetSpec, n_max: int, log_steps: int,
                cap: int | None = None) -> UpperCensus:
    """Certified ``m_n >= gr(n)`` for ``n <= n_max`` after ``log_steps`` steps.

    Raises ``CensusError`` if ``cap`` nodes would be exceeded.
    """
    if n_max < 0:
        raise CensusError("n_max must be >= 0")
    engine = UpperCensusEngine(p, s, cap=cap)
    engine.advance(log_steps)
    if not engine.extend(n_max):
        raise CensusError(f"node cap {cap} exceeded before radius {n_max}")
    return engine.census(n_max)


# --------------------------------------------------------------------------
# Generation


@dataclass
class Witness:
    """``product`` (as ``(member index, sign)`` pairs) equals generator ``target``."""

    target: int
    product: tuple[tuple[int, int], ...]
    derivation: Derivation = field(repr=False)


@dataclass
class GenerationStatus:
    generates: bool
    witnesses: dict[int, Witness]
    stages: int
    log_steps: int

    @property
    def verdict(self) -> str:
        return "generates" if self.generates else "unknown"


def evaluate_product(s: GenSetSpec, product: Sequence[tuple[int, int]]) -> Word:
    w = EMPTY
    for i, sign in product:
        m = s.members[i]
        w = multiply(w, m if sign > 0 else invert(m))
    return w


def generates_semi(p: Presentation, s: GenSetSpec, budget: int = 6, steps_per_stage: int = 1000,
                   log: ConsequenceLog | None = None, max_products: int = 200_000) -> GenerationStatus:
    """Semi-decide whether ``s`` generates ``< S | R >``.

    Stage ``L`` tries all reduced products of ``L`` members; after each stage
    that leaves a generator unmatched the log advances ``steps_per_stage``
    steps and every product seen so far is re-checked.  ``budget`` bounds the
    number of stages.
    """
    log = log if log is not None else ConsequenceLog(p)
    m = len(s)
    letters = [(i, sign) for i in range(m) for sign in (1, -1)]
    targets = {i: p.generator_word(i) for i in range(p.rank)}
    witnesses: dict[int, Witness] = {}
    products: dict[Word, tuple[tuple[int, int], ...]] = {}
    layer: list[tuple[tuple[int, int], ...]] = [()]

    def match(candidates):
        reduce = log.reducer.reduce_tracked
        goals = {}
        for i, g in targets.items():
            if i not in witnesses:
                nf, dg = reduce(g)
                goals.setdefault(nf, []).append((i, dg))
        if not goals:
            return
        for w, prod in candidates:
            nf, dw = reduce(w)
            for i, dg in goals.get(nf, ()):
                if i in witnesses:
                    continue
                d = dv.prod(dw, dv.inv(dg))  # w g^-1
                log.record_proof(multiply(w, invert(targets[i])), d)
                witnesses[i] = Witness(i, prod, d)

    stage = 0
    for stage in range(1, budget + 1):
        nxt = []
        fresh = []
        for prod in layer:
            for i, sign in letters:
                if prod and prod[-1] == (i, -sign):
                    continue
                q = prod + ((i, sign),)
                nxt.append(q)
                w = evaluate_product(s, q)
                if w not in products:
                    products[w] = q
                    fresh.append((w, q))
        layer = nxt if len(nxt) <= max_products else nxt[:max_products]
        match(fresh)
        if len(witnesses) == len(targets):
            return GenerationStatus(True, witnesses, stage, log.steps)
        if p.relators and steps_per_stage:
            before = len(log.reducer)
            log.step(steps_per_stage)
            if len(log.reducer) != before:
                match(list(products.items()))
                if len(witnesses) == len(targets):
                    return GenerationStatus(True, witnesses, stage, log.steps)
    return GenerationStatus(len(witnesses) == len(targets), witnesses, stage, log.steps)

"""Empirical probes of growth-rate sets: sampling, orbit dedup, well-order reports, cusps.

All values here are finite-radius upper bounds; reports carry the radius and
the slack between the certified bound and the ratio estimate so readers can
judge how far a value may sit above the true growth rate.
"""
from __future__ import annotations

import functools
import statistics
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

from .bounds import EgrUpperBound, RatioEstimate, _root_less, candidate_gensets, egr_upper, ratio_estimate
from .census import CensusError, GenerationStatus, exact_balls, generates_semi, upper_balls
from .consequences import Oracle, make_oracle
from .ordinals import RealSample, order_type_estimate
from .words import EMPTY, GenSetSpec, Presentation, Word, canonical_member, invert, multiply, shortlex_key


# --------------------------------------------------------------------------
# Generating-set enumeration


class GensetStream:
    """Verified ``size``-element sets of total length <= ``max_total_length``.

    Iterating yields sets certified to generate, in (total length, shortlex)
    order; sets whose generation stayed undecided within the per-set budget
    land in ``unknown``.
    """

    def __init__(self, p: Presentation, size: int, max_total_length: int, generation_budget: int = 6,
                 steps_per_stage: int = 200, oracle: Oracle | None = None):
        if size < 1 or max_total_length < size:
            raise ValueError("need size >= 1 and max_total_length >= size")
        self.presentation = p
        self.size = size
        self.max_total_length = max_total_length
        self.generation_budget = generation_budget
        self.steps_per_stage = steps_per_stage
        self.oracle = oracle if oracle is not None else make_oracle(p)
        self.verified: list[tuple[GenSetSpec, GenerationStatus]] = []
        self.unknown: list[GenSetSpec] = []
        self.trivial: list[GenSetSpec] = []

    def _has_trivial_member(self, s: GenSetSpec) -> bool:
        if self.oracle.exact:
            return any(not self.oracle.normalize(w) for w in s.members)
        return any(self.oracle.log.prove_trivial(w) is not None for w in s.members)

    def __iter__(self) -> Iterator[GenSetSpec]:
        p = self.presentation
        for total in range(self.size, self.max_total_length + 1):
            for s in candidate_gensets(p, total, self.size):
                if self._has_trivial_member(s):
                    self.trivial.append(s)
                    continue
                status = generates_semi(p, s, self.generation_budget, self.steps_per_stage)
                if status.generates:
                    self.verified.append((s, status))
                    yield s
                else:
                    self.unknown.append(s)


def enumerate_gensets(p: Presentation, size: int, max_total_length: int, **kwargs) -> GensetStream:
    return GensetStream(p, size, max_total_length, **kwargs)


# --------------------------------------------------------------------------
# Nielsen orbit keys


@dataclass(frozen=True)
class OrbitKey:
    """Greedy Nielsen-reduced tuple; equal keys mean the same orbit, not conversely."""

    words: tuple[Word, ...]
    trace: tuple[tuple[int, int, int, str], ...] = field(default=(), compare=False)

    def format(self, p: Presentation) -> tuple[str, ...]:
        return tuple(p.format_word(w) for w in self.words)


def _canonical_tuple(ws: Iterable[Word]) -> list[Word]:
    return sorted((canonical_member(w) for w in ws), key=shortlex_key)


def nielsen_canonicalize(p: Presentation, t: Sequence[Word], budget: int = 1000) -> OrbitKey:
    """Greedy Nielsen reduction to a length-minimal tuple, then shortlex sort.

    Each move replaces ``t_i`` by ``t_i t_j^(+-1)`` or ``t_j^(+-1) t_i`` when that
    shortens the tuple the most (ties: shortlex-least result, then least
    ``i``).  Members that collapse to the identity are dropped.  Input order
    and member inversion do not affect the key.
    """
    if not p.is_free:
        raise ValueError("orbit keys are only supported for free presentations")
    ws = _canonical_tuple(t)
    trace = []
    for _ in range(budget):
        best = None
        for i, u in enumerate(ws):
            for j, v in enumerate(ws):
                if i == j:
                    continue
                for sign, vv in ((1, v), (-1, invert(v))):
                    for side, cand in (("right", multiply(u, vv)), ("left", multiply(vv, u))):
                        gain = len(u) - len(cand)
                        if gain <= 0:
                            continue
                        key = (-gain, shortlex_key(canonical_member(cand)), i, j, sign, side)
                        if best is None or key < best[0]:
                            best = (key, i, j, sign, side, cand)
        if best is None:
            break
        _, i, j, sign, side, cand = best
        trace.append((i, j, sign, side))
        ws[i] = cand
        ws = _canonical_tuple(w for w in ws if w)
    return OrbitKey(tuple(w for w in ws if w), tuple(trace))


# --------------------------------------------------------------------------
# Sampling


@dataclass
class SampleEntry:
    genset: GenSetSpec
    bound: EgrUpperBound
    sizes: tuple[int, ...]
    ratio: RatioEstimate | None
    orbit_key: OrbitKey | None
    stream_index: int
    multiplicity: int = 1

    @property
    def slack(self) -> float | None:
        """Certified bound minus the ratio estimate (None without an estimate)."""
        if self.ratio is None or self.ratio.finite:
            return None
        est = self.ratio.dominant_root if self.ratio.dominant_root is not None else self.ratio.ratio
        return self.bound.value - est


def _entry_cmp(x: SampleEntry, y: SampleEntry) -> int:
    bx, by = x.bound, y.bound
    if _root_less(bx.witness_count, bx.witness_radius, by.witness_count, by.witness_radius):
        return -1
    if _root_less(by.witness_count, by.witness_radius, bx.witness_count, bx.witness_radius):
        return 1
    kx, ky = x.genset.sort_key(), y.genset.sort_key()
    return (kx > ky) - (kx < ky)


@dataclass
class EGRSample:
    group: Presentation
    entries: list[SampleEntry]
    radius: int
    log_steps: int
    exact: bool

    def values(self) -> list[float]:
        return [e.bound.value for e in self.entries]

    def in_stream_order(self) -> list[SampleEntry]:
        return sorted(self.entries, key=lambda e: e.stream_index)


def sample_egr(p: Presentation, gensets: Iterable[GenSetSpec], radius: int, log_steps: int = 0,
               oracle: Oracle | None = None, cap: int | None = 1_000_000) -> EGRSample:
    """Census and Fekete bound per set; sets sharing a Nielsen key are merged."""
    if radius < 2:
        raise ValueError("radius must be >= 2")
    oracle = oracle if oracle is not None else make_oracle(p)
    entries: dict[object, SampleEntry] = {}
    for idx, s in enumerate(gensets):
        key = nielsen_canonicalize(p, s.members) if p.is_free else None
        dedup = key.words if key is not None else s.members
        if dedup in entries:
            entries[dedup].multiplicity += 1
            continue
        if oracle.exact:
            census = exact_balls(oracle, s, radius)
            ratio = ratio_estimate(census) if radius >= 4 else None
        else:
            census = upper_balls(p, s, radius, log_steps, cap=cap)
            ratio = None
        entries[dedup] = SampleEntry(s, egr_upper(census), census.ball_sizes, ratio, key, idx)
    ordered = sorted(entries.values(), key=functools.cmp_to_key(_entry_cmp))
    return EGRSample(p, ordered, radius, log_steps if not oracle.exact else 0, oracle.exact)


# --------------------------------------------------------------------------
# Well-order probe


@dataclass
class ValueCluster:
    lo: float
    hi: float
    count: int
    indices: list[int]


@dataclass
class WellOrderReport:
    epsilon: float
    clusters: list[ValueCluster]
    descending_chain: list[float]
    accumulation_clusters: int
    order_type: str
    order_type_unstable: bool
    note: str = ("values are finite-radius upper bounds; long descending chains usually reflect "
                 "bound slack rather than true growth rates")

    @property
    def minimum(self) -> ValueCluster | None:
        return self.clusters[0] if self.clusters else None

    @property
    def chain_length(self) -> int:
        return len(self.descending_chain)

    @property
    def descending_chain_found(self) -> bool:
        return self.chain_length > 1


def _longest_descending(values: Sequence[float], eps: float) -> list[float]:
    n = len(values)
    if not n:
        return []
    best = [1] * n
    prev = [-1] * n
    for j in range(n):
        for i in range(j):
            if values[i] - values[j] > eps and best[i] + 1 > best[j]:
                best[j], prev[j] = best[i] + 1, i
    j = max(range(n), key=lambda t: (best[t], -t))
    chain = []
    while j >= 0:
        chain.append(values[j])
        j = prev[j]
    return chain[::-1]


def wellorder_report(s: EGRSample | RealSample | Sequence[float], epsilon: float | None = None
                     ) -> WellOrderReport:
    """Cluster values within ``epsilon``, find descending chains and accumulation.

    Values are read in stream order.  The default ``epsilon`` is ten times
    the median bound slack for samples and the median gap for plain values.
    """
    if isinstance(s, EGRSample):
        ordered = s.in_stream_order()
        values = [e.bound.value for e in ordered]
        weights = [e.multiplicity for e in ordered]
        if epsilon is None:
            slacks = [e.slack for e in ordered if e.slack is not None]
            if not slacks:
                raise ValueError("no slack diagnostics available; pass epsilon explicitly")
            epsilon = 10 * statistics.median(slacks)
    else:
        if isinstance(s, RealSample):
            values = list(s.values)
            weights = list(s.multiplicities) or [1] * len(values)
        else:
            values = [float(v) for v in s]
            weights = [1] * len(values)
        if epsilon is None:
            srt = sorted(values)
            gaps = [b - a for a, b in zip(srt, srt[1:]) if b > a]
            epsilon = statistics.median(gaps) if gaps else 1.0
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    order = sorted(range(len(values)), key=lambda i: (values[i], i))
    clusters: list[ValueCluster] = []
    for i in order:
        v = values[i]
        if clusters and v - clusters[-1].hi <= epsilon:
            c = clusters[-1]
            c.hi = v
            c.count += weights[i]
            c.indices.append(i)
        else:
            clusters.append(ValueCluster(v, v, weights[i], [i]))
    chain = _longest_descending(values, epsilon)
    est = order_type_estimate(sorted(set(values))) if values else None
    return WellOrderReport(
        epsilon=epsilon,
        clusters=clusters,
        descending_chain=chain,
        accumulation_clusters=est.first_level_clusters if est else 0,
        order_type=str(est.ordinal) if est else "0",
        order_type_unstable=est.unstable if est else False,
    )


# --------------------------------------------------------------------------
# Cusp sequences


def cusp_word(p: Presentation, i: int) -> Word:
    """``a b a b^2 ... a b^i`` in the first two generators."""
    if p.rank < 2:
        raise ValueError("cusp words need two generators")
    a, b = p.generator_word(0), p.generator_word(1)
    w = EMPTY
    for k in range(1, i + 1):
        w = multiply(w, a + b * k)
    return w


@dataclass
class CuspStep:
    index: int
    word: Word
    genset: GenSetSpec
    sizes: tuple[int, ...]
    bound: EgrUpperBound
    dominated: bool
    gap: float


@dataclass
class CuspSequence:
    base: Presentation
    genset: GenSetSpec
    radius: int
    target_sizes: tuple[int, ...]
    target_bound: EgrUpperBound
    steps: list[CuspStep]

    @property
    def all_dominated(self) -> bool:
        return all(st.dominated for st in self.steps)


def cusp_sequence(base: Presentation, s: GenSetSpec, words: Sequence[Word] | None = None, steps: int = 6,
                  radius: int = 8) -> CuspSequence:
    """Compare ``(L, S + {w_i})`` with ``(L * Z, S + {t})`` radius by radius.

    ``t -> w_i`` extends to an epimorphism onto ``L`` taking balls onto balls,
    so every census of ``(L, S + {w_i})`` is dominated by the free-product one.
    """
    oracle = make_oracle(base)
    if not oracle.exact:
        raise CensusError("the base group needs an exact word-problem oracle")
    big = base.free_product_with_z("t")
    big_oracle = make_oracle(big)
    t = big.generator_word(big.rank - 1)
    target = exact_balls(big_oracle, s.with_member(t), radius)
    target_bound = egr_upper(target)
    schedule = list(words) if words is not None else [cusp_word(base, i) for i in range(1, steps + 1)]
    out = []
    for i, w in enumerate(schedule, start=1):
        if not oracle.normalize(w):
            raise CensusError(f"schedule word {i} is trivial in the base group")
        si = s.with_member(w)
        census = exact_balls(oracle, si, radius)
        bound = egr_upper(census)
        dominated = all(x <= y for x, y in zip(census.ball_sizes, target.ball_sizes))
        out.append(CuspStep(i, w, si, census.ball_sizes, bound, dominated, target_bound.value - bound.value))
    return CuspSequence(base, s, radius, target.ball_sizes, target_bound, out)

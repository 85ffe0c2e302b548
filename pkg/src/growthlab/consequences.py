"""Enumeration of the normal closure of the relators and semi-decided equality.

``ConsequenceLog`` closes the relators under conjugation by letters and
multiplication by relators, in stages of growing word length.  Discovered
identities are turned into shortlex rewriting rules by splitting each cyclic rotation ``rho = u r`` into
``u -> r^-1``; those rules drive both ``equal_semi`` and the upper censuses.
"""
from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass, field

from . import derivations as dv
from .derivations import Derivation
from .rewriting import Reducer, RewritingSystem
from .words import (EMPTY, Presentation, Word, conjugator_of_cyclic_reduction, free_reduce, invert,
                    multiply, shortlex_key)


class Verdict(enum.Enum):
    YES = "yes"
    UNKNOWN = "unknown"

    def __bool__(self):
        return self is Verdict.YES


class ConsequenceLog:
    """Growing set of words known to be trivial in ``< S | R >``.

    Single writer: ``step`` mutates the log.  ``snapshot`` returns an
    immutable view of the discovered words.
    """

    def __init__(self, presentation: Presentation):
        self.presentation = presentation
        self.discovered: dict[Word, Derivation] = {}
        self.order: list[Word] = []
        self.steps = 0
        self.stage = 0
        self._queue: deque[tuple[Word, Derivation]] = deque()
        self._parked: dict[int, list[tuple[Word, Derivation]]] = {}
        self._parked_set: set[Word] = set()
        self._queued: set[Word] = set()
        self._reducer = Reducer()
        self._proven: dict[Word, Derivation] = {}
        for i, r in enumerate(presentation.relators):
            self._enqueue(self._queue, r, dv.relator(i))
            self._enqueue(self._queue, invert(r), dv.inv(dv.relator(i)))

    def __contains__(self, w: Word) -> bool:
        return w in self.discovered

    def __len__(self) -> int:
        return len(self.discovered)

    @property
    def truncation(self) -> int:
        return self.stage + self.presentation.max_relator_length

    def snapshot(self) -> frozenset[Word]:
        return frozenset(self.discovered)

    @property
    def reducer(self) -> Reducer:
        return self._reducer

    def _enqueue(self, queue, w: Word, d: Derivation):
        if w and w not in self.discovered and w not in self._queued:
            self._queued.add(w)
            queue.append((w, d))

    def _insert(self, w: Word, d: Derivation):
        for word, deriv in ((w, d), (invert(w), dv.inv(d))):
            if word in self.discovered:
                continue
            self.discovered[word] = deriv
            self.order.append(word)
            self._add_rules(word, deriv)

    def _add_rules(self, w: Word, d: Derivation):
        z, c = conjugator_of_cyclic_reduction(w)
        # c = z^-1 w z
        dc = dv.conj(invert(z), d)
        n = len(c)
        reduce = self._reducer.reduce
        period = (c + c).find(c, 1)  # distinct rotations
        for i in range(period):
            rho = c[i:] + c[:i]
            drho = dv.conj(invert(c[:i]), dc)
            for cut in range((n + 1) // 2, n + 1):
                lhs = rho[:cut]
                # a reducible proper subword makes this and every longer lhs redundant
                if cut > 1 and (reduce(lhs[:-1]) != lhs[:-1] or reduce(lhs[1:]) != lhs[1:]):
                    break
                rhs = invert(rho[cut:])
                if shortlex_key(rhs) < shortlex_key(lhs):
                    self._reducer.add(lhs, rhs, drho)

    def step(self, steps: int = 1) -> "ConsequenceLog":
        """Advance the schedule by ``steps`` new discoveries (in place)."""
        if steps < 1:
            raise ValueError("steps must be >= 1")
        for _ in range(steps):
            popped = self._pop()
            if popped is None:
                return self  # empty normal closure
            w, d = popped
            self._insert(w, d)
            self.steps += 1
            self._expand(w, d)
        return self

    def _pop(self):
        while True:
            while self._queue:
                w, d = self._queue.popleft()
                self._queued.discard(w)
                if w not in self.discovered:
                    return w, d
            if not self._parked:
                return None
            self._advance_stage()

    def _advance_stage(self):
        self.stage += 1
        limit = self.truncation
        for length in sorted(k for k in self._parked if k <= limit):
            for w, d in self._parked.pop(length):
                self._enqueue(self._queue, w, d)

    def _expand(self, w: Word, d: Derivation):
        """Candidates ``g w g^-1`` for letters ``g`` and ``w r^(+-1)``, ``r^(+-1) w``.

        Closure under these moves is the whole normal closure, since
        ``w (x r x^-1) = x (x^-1 w x r) x^-1``.  Candidates longer than the
        current truncation wait until the stage has grown enough.
        """
        limit = self.truncation
        cands = []
        for g in range(2 * self.presentation.rank):
            x = bytes([g])
            cands.append((multiply(multiply(x, w), invert(x)), dv.conj(x, d)))
        for i, r in enumerate(self.presentation.relators):
            for rr, dr in ((r, dv.relator(i)), (invert(r), dv.inv(dv.relator(i)))):
                cands.append((multiply(w, rr), dv.prod(d, dr)))
                cands.append((multiply(rr, w), dv.prod(dr, d)))
        for v, dvv in cands:
            if not v or v in self.discovered or v in self._queued:
                continue
            if len(v) <= limit:
                self._enqueue(self._queue, v, dvv)
            elif v not in self._parked_set:
                self._parked_set.add(v)
                self._parked.setdefault(len(v), []).append((v, dvv))

    def prove_trivial(self, w: Word) -> Derivation | None:
        """A derivation of ``w`` if the current rules reduce it to the identity."""
        w = free_reduce(w)
        if not w:
            return dv.EMPTY_DERIVATION
        hit = self._proven.get(w)
        if hit is not None:
            return hit
        if w in self.discovered:
            return self.discovered[w]
        red, d = self._reducer.reduce_tracked(w)
        if red:
            return None
        self._proven[w] = d
        return d

    def record_proof(self, w: Word, d: Derivation):
        """Cache an externally derived identity so later queries answer YES."""
        w = free_reduce(w)
        if w and w not in self._proven:
            self._proven[w] = d

    def equal(self, u: Word, v: Word) -> Verdict:
        return Verdict.YES if self.prove_trivial(multiply(u, invert(v))) is not None else Verdict.UNKNOWN


def consequence_step(log: ConsequenceLog, steps: int) -> ConsequenceLog:
    return log.step(steps)


def equal_semi(log: ConsequenceLog, u: Word, v: Word) -> Verdict:
    """``YES`` once ``u v^-1`` is derivable from the discovered identities.

    ``YES`` answers are cached on the log and therefore permanent.
    """
    return log.equal(u, v)


# --------------------------------------------------------------------------
# Oracles


@dataclass
class Oracle:
    """Word-problem backend: ``free``, ``confluent`` or ``semi``."""

    kind: str
    presentation: Presentation
    system: RewritingSystem | None = None
    log: ConsequenceLog | None = field(default=None, repr=False)

    def __post_init__(self):
        if self.kind == "free" and self.presentation.relators:
            raise ValueError("free oracle requires a presentation without relators")
        if self.kind == "confluent" and not (self.system and self.system.confluent):
            raise ValueError("confluent oracle requires a confluent rewriting system")
        if self.kind == "semi" and self.log is None:
            self.log = ConsequenceLog(self.presentation)

    @property
    def exact(self) -> bool:
        return self.kind in ("free", "confluent")

    def normalize(self, w: Word) -> Word:
        if self.kind == "free":
            return free_reduce(w)
        if self.kind == "confluent":
            return self.system.reduce(w)
        raise TypeError("normalize needs an exact oracle, not a semi-decision one")

    def reducer(self) -> Reducer:
        if self.kind == "free":
            return Reducer()
        if self.kind == "confluent":
            return self.system.reducer
        return self.log.reducer


def normalize(oracle: Oracle, w: Word) -> Word:
    return oracle.normalize(w)


def make_oracle(p: Presentation, max_rules: int = 200, max_lhs_len: int = 24,
                cache_dir=None, semi_only: bool = False) -> Oracle:
    """The strongest available oracle: free, else completed, else semi-decision."""
    from .rewriting import kb_complete_cached

    if p.is_free:
        return Oracle("free", p)
    if not semi_only:
        system = kb_complete_cached(p, cache_dir, max_rules, max_lhs_len)
        if system.confluent:
            return Oracle("confluent", p, system)
    return Oracle("semi", p)


__all__ = [
    "ConsequenceLog", "Oracle", "Verdict", "consequence_step", "equal_semi", "make_oracle", "normalize",
    "EMPTY",
]

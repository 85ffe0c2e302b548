"""Shortlex string rewriting over a group alphabet and Knuth-Bendix completion.

Free cancellation ``x x^-1 -> 1`` is built into every reducer; the explicit
rule sets never list it.  Every rule carries a derivation of ``lhs rhs^-1``
from the relators, so completed (or partial) systems can be replayed.
"""
from __future__ import annotations

import hashlib
import heapq
import itertools
from dataclasses import dataclass, field
from pathlib import Path

from . import derivations as dv
from .derivations import Derivation
from .words import EMPTY, Presentation, Word, shortlex_key


class Reducer:
    """Apply shortlex-decreasing rules plus free cancellation until irreducible."""

    def __init__(self):
        self.rules: dict[Word, tuple[Word, Derivation | None]] = {}
        self._lengths: list[int] = []

    def __len__(self):
        return len(self.rules)

    def add(self, lhs: Word, rhs: Word, deriv: Derivation | None = None) -> bool:
        """Insert ``lhs -> rhs``; keeps the shortlex-least rhs for a repeated lhs."""
        assert shortlex_key(rhs) < shortlex_key(lhs), "rules must decrease shortlex"
        old = self.rules.get(lhs)
        if old is not None and shortlex_key(old[0]) <= shortlex_key(rhs):
            return False
        if old is None and len(lhs) not in self._lengths:
            self._lengths.append(len(lhs))
            self._lengths.sort()
        self.rules[lhs] = (rhs, deriv)
        return True

    def remove(self, lhs: Word):
        del self.rules[lhs]
        if not any(len(k) == len(lhs) for k in self.rules):
            self._lengths.remove(len(lhs))

    def reduce(self, w: Word) -> Word:
        rules = self.rules
        lengths = self._lengths
        out = bytearray()
        pending = bytearray(w[::-1])
        while pending:
            x = pending.pop()
            if out and out[-1] == x ^ 1:
                out.pop()
                continue
            out.append(x)
            n = len(out)
            for L in lengths:
                if L > n:
                    break
                hit = rules.get(bytes(out[n - L :]))
                if hit is not None:
                    del out[n - L :]
                    pending.extend(hit[0][::-1])
                    break
        return bytes(out)

    def reduce_tracked(self, w: Word) -> tuple[Word, Derivation]:
        """Reduce ``w`` to ``w'`` and return a derivation of ``w w'^-1``."""
        rules = self.rules
        lengths = self._lengths
        out = bytearray()
        pending = bytearray(w[::-1])
        steps = []
        while pending:
            x = pending.pop()
            if out and out[-1] == x ^ 1:
                out.pop()
                continue
            out.append(x)
            n = len(out)
            for L in lengths:
                if L > n:
                    break
                hit = rules.get(bytes(out[n - L :]))
                if hit is not None:
                    rhs, d = hit
                    if d is None:
                        raise ValueError("rule without derivation cannot be tracked")
                    steps.append(dv.conj(bytes(out[: n - L]), d))
                    del out[n - L :]
                    pending.extend(rhs[::-1])
                    break
        return bytes(out), dv.prod(*steps)


@dataclass
class RewritingSystem:
    presentation: Presentation
    rules: list[tuple[Word, Word]]
    confluent: bool = False
    derivations: dict[Word, Derivation] = field(default_factory=dict, repr=False)

    def __post_init__(self):
        self._reducer = Reducer()
        for lhs, rhs in self.rules:
            self._reducer.add(lhs, rhs, self.derivations.get(lhs))

    def reduce(self, w: Word) -> Word:
        return self._reducer.reduce(w)

    def reduce_tracked(self, w: Word):
        return self._reducer.reduce_tracked(w)

    @property
    def reducer(self) -> Reducer:
        return self._reducer

    def dumps(self) -> str:
        p = self.presentation
        lines = [f"# {p.format()}", f"# confluent: {str(self.confluent).lower()}"]
        for lhs, rhs in self.rules:
            lines.append(f"{p.format_word(lhs)} -> {p.format_word(rhs)}")
        return "\n".join(lines) + "\n"

    @classmethod
    def loads(cls, text: str, p: Presentation) -> "RewritingSystem":
        rules = []
        confluent = False
        for line in text.splitlines():
            line = line.strip()
            if line.startswith("# confluent:"):
                confluent = line.split(":", 1)[1].strip() == "true"
                continue
            if not line or line.startswith("#"):
                continue
            lhs, rhs = line.split("->")
            rules.append((p.parse_word(lhs), p.parse_word(rhs)))
        system = cls(p, rules, False)
        # re-establish the flag rather than trusting the file
        system.confluent = confluent and not unresolved_critical_pairs(system)
        return system

    def check_derivations(self) -> bool:
        """Replay every recorded derivation against ``lhs rhs^-1``."""
        from .words import free_reduce, invert

        rels = self.presentation.relators
        for lhs, rhs in self.rules:
            d = self.derivations.get(lhs)
            if d is None or dv.evaluate(d, rels) != free_reduce(lhs + invert(rhs)):
                return False
        return True


class Incomplete(RewritingSystem):
    """A sound but not (known to be) confluent partial system."""


def _cancellation_rules(rank: int) -> list[tuple[Word, Word, Derivation]]:
    return [(bytes([x, x ^ 1]), EMPTY, dv.EMPTY_DERIVATION) for x in range(2 * rank)]


def _overlaps(l1: Word, l2: Word):
    for k in range(1, min(len(l1), len(l2))):
        if l1[len(l1) - k :] == l2[:k]:
            yield k


def _critical_pairs(r1, r2):
    """Yield ``(p1, p2, derivation of p1 p2^-1)`` for overlaps of ``r1`` then ``r2``."""
    l1, rhs1, d1 = r1
    l2, rhs2, d2 = r2
    for k in _overlaps(l1, l2):
        x = l1[: len(l1) - k]
        p1 = rhs1 + l2[k:]
        p2 = x + rhs2
        yield p1, p2, dv.prod(dv.inv(d1), dv.conj(x, d2))


def unresolved_critical_pairs(system: RewritingSystem) -> list[tuple[Word, Word]]:
    """Critical pairs whose two reducts have different normal forms."""
    red = system.reducer
    rules = [(l, r, dv.EMPTY_DERIVATION) for l, r in system.rules]
    rules += _cancellation_rules(system.presentation.rank)
    bad = []
    for a in rules:
        for b in rules:
            for p1, p2, _ in _critical_pairs(a, b):
                if red.reduce(p1) != red.reduce(p2):
                    bad.append((p1, p2))
    return bad


def kb_complete(p: Presentation, max_rules: int = 200, max_lhs_len: int = 24) -> RewritingSystem:
    """Shortlex Knuth-Bendix completion with ``a < A < b < B < ...``.

    Returns a ``RewritingSystem`` with ``confluent=True`` on success and an
    ``Incomplete`` (sound, not confluent) system when a budget runs out.
    """
    if max_rules <= 0 or max_lhs_len <= 0:
        raise ValueError("completion budgets must be positive")
    if max_rules < len(p.relators):
        raise ValueError("max_rules must be at least the number of relators")

    red = Reducer()
    cancel = _cancellation_rules(p.rank)
    pending: list = []
    counter = itertools.count()

    def push(u: Word, v: Word, d: Derivation):
        heapq.heappush(pending, (max(len(u), len(v)), next(counter), u, v, d))

    for i, r in enumerate(p.relators):
        push(r, EMPTY, dv.relator(i))
    checked: set[tuple[Word, ...]] = set()
    deferred: list[tuple[Word, Word, Derivation]] = []

    def orient_and_add(u: Word, v: Word, d: Derivation) -> bool:
        u2, du = red.reduce_tracked(u)
        v2, dv_ = red.reduce_tracked(v)
        if u2 == v2:
            return True
        d2 = dv.prod(dv.inv(du), d, dv_)  # u2 v2^-1
        if shortlex_key(u2) < shortlex_key(v2):
            u2, v2, d2 = v2, u2, dv.inv(d2)
        if len(u2) > max_lhs_len:
            deferred.append((u2, v2, d2))
            return True
        # interreduce: rules whose lhs contains u2 go back to pending
        for lhs in [l for l in red.rules if u2 in l]:
            rhs, dl = red.rules[lhs]
            red.remove(lhs)
            push(lhs, rhs, dl)
        red.add(u2, v2, d2)
        for lhs, (rhs, dl) in list(red.rules.items()):
            if lhs == u2:
                continue
            rhs2, drhs = red.reduce_tracked(rhs)
            if rhs2 != rhs:
                red.rules[lhs] = (rhs2, dv.prod(dl, drhs))
        return True

    while True:
        while pending:
            _, _, u, v, d = heapq.heappop(pending)
            orient_and_add(u, v, d)
            if len(red) > max_rules:
                return _finish(p, red, Incomplete)
        current = [(l, r, d) for l, (r, d) in red.rules.items()] + cancel
        current.sort(key=lambda rule: shortlex_key(rule[0]))
        for a in current:
            for b in current:
                key = (a[0], a[1], b[0], b[1])
                if key in checked:
                    continue
                checked.add(key)
                for p1, p2, d in _critical_pairs(a, b):
                    if red.reduce(p1) != red.reduce(p2):
                        push(p1, p2, d)
        if not pending and deferred:
            retry, deferred[:] = list(deferred), []
            for u, v, d in retry:
                if red.reduce(u) != red.reduce(v):
                    push(u, v, d)
            if pending and all(max(len(red.reduce(u)), len(red.reduce(v))) > max_lhs_len
                               for _, _, u, v, _ in pending):
                # nothing new can be learned within the length budget
                deferred.extend((u, v, d) for _, _, u, v, d in pending)
                pending.clear()
                break
        if not pending:
            break
    exhausted = bool(deferred)
    system = _finish(p, red, Incomplete if exhausted else RewritingSystem)
    if not exhausted:
        system.confluent = not unresolved_critical_pairs(system)
        if not system.confluent:
            system = _finish(p, red, Incomplete)
    return system


def _finish(p, red: Reducer, cls) -> RewritingSystem:
    rules = sorted(((l, r) for l, (r, _) in red.rules.items()), key=lambda lr: shortlex_key(lr[0]))
    derivs = {l: d for l, (_, d) in red.rules.items()}
    return cls(p, rules, False, derivs)


def cache_key(p: Presentation, max_rules: int, max_lhs_len: int) -> str:
    text = f"{p.format()}|{max_rules}|{max_lhs_len}"
    return hashlib.sha256(text.encode()).hexdigest()[:20]


def kb_complete_cached(p: Presentation, cache_dir: str | Path | None, max_rules: int = 200,
                       max_lhs_len: int = 24) -> RewritingSystem:
    """``kb_complete`` with an on-disk ``lhs -> rhs`` cache (confluent results only).

    Systems loaded from the cache have their confluence re-checked but carry
    no derivations.
    """
    if cache_dir is None:
        return kb_complete(p, max_rules, max_lhs_len)
    path = Path(cache_dir) / f"{cache_key(p, max_rules, max_lhs_len)}.rws"
    if path.exists():
        system = RewritingSystem.loads(path.read_text(), p)
        if system.confluent:
            return system
    system = kb_complete(p, max_rules, max_lhs_len)
    if system.confluent:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(system.dumps())
    return system

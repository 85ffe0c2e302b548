"""Ordinals below epsilon_0 in Cantor normal form, and order types of real samples.

``canonical_set`` realizes ordinals below ``w^w`` as finite truncations of
well-ordered subsets of the reals (nested ``1 - 1/n`` blocks), and
``order_type_estimate`` tries to read the ordinal back from such a sample.
The estimator is a heuristic; its diagnostics say how much to trust it.
"""
from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from functools import total_ordering
from typing import Sequence


@total_ordering
@dataclass(frozen=True)
class Ordinal:
    """``sum w^e * c`` over ``terms`` with strictly decreasing exponents."""

    terms: tuple[tuple["Ordinal", int], ...] = ()

    def __post_init__(self):
        for i, (e, c) in enumerate(self.terms):
            if not isinstance(c, int) or c < 1:
                raise ValueError("coefficients must be positive integers")
            if i and ord_compare(self.terms[i - 1][0], e) <= 0:
                raise ValueError("exponents must be strictly decreasing")

    @classmethod
    def of(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are nonnegative")
        return cls(((ZERO, n),)) if n else ZERO

    @classmethod
    def omega_power(cls, e: "Ordinal | int", c: int = 1) -> "Ordinal":
        e = e if isinstance(e, Ordinal) else Ordinal.of(e)
        return cls(((e, c),))

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def is_finite(self) -> bool:
        return all(e.is_zero for e, _ in self.terms)

    def finite_value(self) -> int | None:
        if not self.is_finite:
            return None
        return self.terms[0][1] if self.terms else 0

    @property
    def leading_exponent(self) -> "Ordinal":
        return self.terms[0][0] if self.terms else ZERO

    def __lt__(self, other: "Ordinal") -> bool:
        return ord_compare(self, other) < 0

    def __add__(self, other: "Ordinal") -> "Ordinal":
        return ord_add(self, other)

    def __mul__(self, other: "Ordinal") -> "Ordinal":
        return ord_mul(self, other)

    def __str__(self) -> str:
        return format_ordinal(self)

    def __repr__(self) -> str:
        return f"Ordinal({format_ordinal(self)!r})"


ZERO = Ordinal(())
ONE = Ordinal(((ZERO, 1),))
OMEGA = Ordinal(((ONE, 1),))


def ord_compare(x: Ordinal, y: Ordinal) -> int:
    """-1, 0 or 1; lexicographic on CNF terms, exponents first."""
    for (ex, cx), (ey, cy) in zip(x.terms, y.terms):
        c = ord_compare(ex, ey)
        if c:
            return c
        if cx != cy:
            return -1 if cx < cy else 1
    return (len(x.terms) > len(y.terms)) - (len(x.terms) < len(y.terms))


def ord_add(x: Ordinal, y: Ordinal) -> Ordinal:
    if y.is_zero:
        return x
    e, c = y.terms[0]
    kept = []
    for ex, cx in x.terms:
        cmp = ord_compare(ex, e)
        if cmp > 0:
            kept.append((ex, cx))
        elif cmp == 0:
            c += cx
            break
        else:
            break
    return Ordinal(tuple(kept) + ((e, c),) + y.terms[1:])


def ord_mul(x: Ordinal, y: Ordinal) -> Ordinal:
    if x.is_zero or y.is_zero:
        return ZERO
    e1, c1 = x.terms[0]
    out = ZERO
    for e, c in y.terms:
        if e.is_zero:
            piece = Ordinal(((e1, c1 * c),) + x.terms[1:])
        else:
            piece = Ordinal(((ord_add(e1, e), c),))
        out = ord_add(out, piece)
    return out


def ord_pow(x: Ordinal, n: int) -> Ordinal:
    out = ONE
    for _ in range(n):
        out = ord_mul(out, x)
    return out


def format_ordinal(x: Ordinal) -> str:
    if x.is_zero:
        return "0"
    parts = []
    for e, c in x.terms:
        if e.is_zero:
            parts.append(str(c))
            continue
        if e == ONE:
            base = "w"
        elif e.is_finite:
            base = f"w^{e.finite_value()}"
        elif e == OMEGA:
            base = "w^w"
        else:
            base = f"w^({format_ordinal(e)})"
        parts.append(base if c == 1 else f"{base}*{c}")
    return " + ".join(parts)


_TOKEN = re.compile(r"\s*(?:(\d+)|(w|ω)|(\*\*|[-+*^()]))")


class OrdinalSyntaxError(ValueError):
    pass


def parse_ordinal(text: str) -> Ordinal:
    """Parse expressions such as ``"w^2*3 + w + 4"`` or ``"(w + 1) * w"``.

    ``w`` (or ``ω``) is omega; ``+`` and ``*`` are ordinal operations; ``^``
    takes any exponent when the base is ``w`` and a natural one otherwise.
    """
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise OrdinalSyntaxError(f"unexpected character at column {pos + 1}: {text[pos:pos + 5]!r}")
        tokens.append(m.group(1) or m.group(2) or ("^" if m.group(3) == "**" else m.group(3)))
        pos = m.end()
    tokens = [t if t != "ω" else "w" for t in tokens]
    i = 0

    def peek():
        return tokens[i] if i < len(tokens) else None

    def take(expected=None):
        nonlocal i
        t = peek()
        if t is None or (expected is not None and t != expected):
            raise OrdinalSyntaxError(f"expected {expected or 'a term'} but found {t or 'end of input'}")
        i += 1
        return t

    def expr():
        v = term()
        while peek() == "+":
            take()
            v = ord_add(v, term())
        return v

    def term():
        v = factor()
        while peek() == "*":
            take()
            v = ord_mul(v, factor())
        return v

    def factor():
        base, is_omega = atom()
        if peek() == "^":
            take()
            exp, _ = atom()
            if is_omega:
                return Ordinal.omega_power(exp)
            if not exp.is_finite:
                raise OrdinalSyntaxError("only w may be raised to an infinite power")
            return ord_pow(base, exp.finite_value())
        return base

    def atom():
        t = take()
        if t == "w":
            return OMEGA, True
        if t == "(":
            v = expr()
            take(")")
            return v, False
        if t.isdigit():
            return Ordinal.of(int(t)), False
        raise OrdinalSyntaxError(f"unexpected token {t!r}")

    if not tokens:
        raise OrdinalSyntaxError("empty ordinal expression")
    v = expr()
    if i != len(tokens):
        raise OrdinalSyntaxError(f"trailing input starting at {tokens[i]!r}")
    return v


def infinite_part(x: Ordinal) -> Ordinal:
    """``x`` without its finite tail."""
    return Ordinal(tuple((e, c) for e, c in x.terms if not e.is_zero))


# --------------------------------------------------------------------------
# Real realizations


@dataclass(frozen=True)
class RealSample:
    """Sorted reals; values closer than ``tolerance`` are merged with multiplicity."""

    values: tuple[float, ...]
    tolerance: float = 0.0
    multiplicities: tuple[int, ...] = ()

    @classmethod
    def of(cls, values: Sequence[float], tolerance: float = 0.0) -> "RealSample":
        vals, mult = [], []
        for v in sorted(float(x) for x in values):
            if vals and v - vals[-1] <= tolerance:
                mult[-1] += 1
            else:
                vals.append(v)
                mult.append(1)
        return cls(tuple(vals), tolerance, tuple(mult))

    def __len__(self):
        return len(self.values)


def _block(n: int) -> tuple[float, float]:
    # f(n-1), f(n) with f(n) = 1 - 1/(n+1)
    return 1 - 1 / n, 1 - 1 / (n + 1)


def _nested(e: int, depth: int, lo: float, hi: float, out: list[float]):
    if e == 0:
        out.append(lo)
        return
    width = hi - lo
    for n in range(1, depth + 1):
        a, b = _block(n)
        _nested(e - 1, depth, lo + width * a, lo + width * b, out)


def canonical_set(x: Ordinal, depth: int) -> RealSample:
    """Finite truncation of a well-ordered subset of the reals of type ``x``.

    Each ``w^e`` digit of the normal form occupies its own unit interval and
    nests ``depth`` blocks ``[f(n-1), f(n))`` per level; a finite digit is a
    single point.  So ``w`` gives ``{1 - 1/n}`` and ``3`` gives ``{0, 1, 2}``.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    out: list[float] = []
    offset = 0
    for e, c in x.terms:
        if not e.is_finite:
            raise ValueError("only exponents that are natural numbers can be realized")
        k = e.finite_value()
        for _ in range(c):
            _nested(k, depth, float(offset), float(offset + 1), out)
            offset += 1
    return RealSample.of(out)


# --------------------------------------------------------------------------
# Order-type estimation


@dataclass
class LevelReport:
    epsilon: float
    items_in: int
    clusters: int
    cluster_sizes: list[int]


@dataclass
class OrderTypeEstimate:
    ordinal: Ordinal
    levels: list[LevelReport]
    lower_bound: bool = False
    unstable: bool = False
    heuristic: bool = field(default=True, init=False)

    @property
    def first_level_clusters(self) -> int:
        return self.levels[0].clusters if self.levels else 0


def default_schedule(n_points: int, k: int = 5) -> tuple[float, ...]:
    """Enough levels to exhaust ``n`` points when each level groups ``k+1`` or more."""
    length = 1 + max(1, int(math.log(max(n_points, 2)) / math.log(k + 1)))
    return tuple(0.02 * 0.5 ** j for j in range(length))


def _runs(pos: list[float], k: int, eps: float, min_ratio: float, slack: float) -> list[tuple[int, int]]:
    """Maximal runs ``[i, j]`` of at least ``k+1`` items with strictly shrinking gaps.

    Gap ratios inside a run may not fall by more than ``slack``: convergent
    sequences decelerate regularly, noise does not.
    """
    runs = []
    i = 0
    n = len(pos)
    while i < n - 1:
        j = i
        last_ratio = None
        while j + 1 < n:
            if j > i:
                g_prev = pos[j] - pos[j - 1]
                g = pos[j + 1] - pos[j]
                if not (g <= g_prev * (1 - eps) and g >= g_prev * min_ratio):
                    break
                ratio = g / g_prev
                if last_ratio is not None and ratio < last_ratio - slack:
                    break
                last_ratio = ratio
            j += 1
        if j - i + 1 >= k + 1:
            runs.append((i, j))
            i = j + 1
        else:
            i += 1
    return runs


Item = tuple[float, Ordinal]  # position, value


def _level(items: list[Item], eps: float, k: int, min_ratio: float, slack: float):
    pos = [p for p, _ in items]
    out: list[Item] = []
    sizes = []
    covered = 0
    for i, j in _runs(pos, k, eps, min_ratio, slack):
        out.extend(items[covered:i])
        e = max((items[t][1].leading_exponent for t in range(i, j + 1)), key=_Key)
        out.append((pos[j], Ordinal.omega_power(ord_add(e, ONE))))
        sizes.append(j - i + 1)
        covered = j + 1
    out.extend(items[covered:])
    # x + y = y whenever x's leading exponent is below y's
    absorbed: list[Item] = []
    for p, v in out:
        while absorbed and ord_compare(absorbed[-1][1].leading_exponent, v.leading_exponent) < 0:
            absorbed.pop()
        absorbed.append((p, v))
    return absorbed, sizes


class _Key:
    __slots__ = ("v",)

    def __init__(self, v):
        self.v = v

    def __lt__(self, other):
        return ord_compare(self.v, other.v) < 0


def _estimate(values: Sequence[float], schedule: Sequence[float], k: int, min_ratio: float, slack: float):
    items: list[Item] = [(v, ONE) for v in values]
    levels = []
    stable = False
    for eps in schedule:
        if len(items) <= 1:
            stable = True
            break
        nxt, sizes = _level(items, eps, k, min_ratio, slack)
        levels.append(LevelReport(eps, len(items), len(sizes), sizes))
        if not sizes:
            items = nxt
            stable = True
            break
        items = nxt
    else:
        stable = len(items) <= 1 or not _level(items, schedule[-1], k, min_ratio, slack)[1]
    total = ZERO
    for _, v in items:
        total = ord_add(total, v)
    return total, levels, not stable


def order_type_estimate(s: RealSample | Sequence[float], epsilon_schedule: Sequence[float] | None = None,
                        k: int = 5, min_ratio: float = 0.33, slack: float = 0.05) -> OrderTypeEstimate:
    """Estimate the ordinal a sorted sample realizes by iterated derived sets.

    Level ``j`` groups consecutive items whose gaps shrink by a factor of at
    most ``1 - eps_j`` each time (and by no more than ``min_ratio``); a group
    of ``k+1`` or more items of leading exponent ``e`` is an accumulation
    cluster worth ``w^(e+1)``.  The estimate is the ordinal sum of what is
    left when a level finds no new clusters.
    """
    values = list(s.values) if isinstance(s, RealSample) else sorted(float(v) for v in s)
    schedule = tuple(epsilon_schedule) if epsilon_schedule is not None else default_schedule(len(values), k)
    if not schedule or any(e <= 0 for e in schedule) or any(a <= b for a, b in zip(schedule, schedule[1:])):
        raise ValueError("epsilon schedule must be nonempty, positive and strictly decreasing")
    if not values:
        return OrderTypeEstimate(ZERO, [])
    ordinal, levels, exhausted = _estimate(values, schedule, k, min_ratio, slack)
    # perturbations: a stable answer survives a stricter cluster size, and
    # its infinite part survives dropping the last point
    alt1 = _estimate(values, schedule, k + 1, min_ratio, slack)[0]
    alt2 = _estimate(values[:-1], schedule, k, min_ratio, slack)[0] if len(values) > 2 else ordinal
    unstable = ord_compare(alt1, ordinal) != 0 or ord_compare(infinite_part(alt2), infinite_part(ordinal)) != 0
    return OrderTypeEstimate(ordinal, levels, lower_bound=exhausted, unstable=unstable)

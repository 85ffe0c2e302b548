"""Words over a signed alphabet, presentations and generating-set specs.

A word is stored as ``bytes``: generator ``i`` is the letter ``2*i`` and its
formal inverse is ``2*i + 1``.  Comparing two equal-length words as bytes is
then exactly the alphabet order ``g < g^-1 < h < h^-1 < ...``, so shortlex
order is ``(len(w), w)``.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from typing import Iterable, Sequence

Word = bytes

EMPTY: Word = b""

# letter -> inverse letter, usable with bytes.translate
_INVERSE_TABLE = bytes(i ^ 1 for i in range(256))

MAX_GENERATORS = 128

_NAME_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")


class PresentationError(ValueError):
    """Raised for malformed presentation or generating-set text."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        if line is not None:
            message = f"line {line}, column {column}: {message}"
        super().__init__(message)


def inverse_letter(x: int) -> int:
    return x ^ 1


def invert(w: Word) -> Word:
    return w[::-1].translate(_INVERSE_TABLE)


def free_reduce(letters: Iterable[int]) -> Word:
    out = bytearray()
    for x in letters:
        if out and out[-1] == x ^ 1:
            out.pop()
        else:
            out.append(x)
    return bytes(out)


def is_reduced(w: Word) -> bool:
    return all(w[i] != w[i + 1] ^ 1 for i in range(len(w) - 1))


def multiply(u: Word, v: Word) -> Word:
    """Product of two reduced words, cancelling at the junction."""
    k = 0
    n = min(len(u), len(v))
    while k < n and u[-1 - k] == v[k] ^ 1:
        k += 1
    if k == 0:
        return u + v
    return u[: len(u) - k] + v[k:]


def cyclically_reduce(w: Word) -> Word:
    w = free_reduce(w)
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1] ^ 1:
        i += 1
        j -= 1
    return w[i:j]


def conjugator_of_cyclic_reduction(w: Word) -> tuple[Word, Word]:
    """Split a reduced ``w`` as ``z c z^-1`` with ``c`` cyclically reduced."""
    i, j = 0, len(w)
    while j - i >= 2 and w[i] == w[j - 1] ^ 1:
        i += 1
        j -= 1
    return w[:i], w[i:j]


def rotations(w: Word) -> list[Word]:
    return [w[i:] + w[:i] for i in range(len(w))] if w else []


def shortlex_key(w: Word) -> tuple[int, bytes]:
    return (len(w), w)


def shortlex_less(u: Word, v: Word) -> bool:
    return (len(u), u) < (len(v), v)


def power(w: Word, k: int) -> Word:
    if k < 0:
        return power(invert(w), -k)
    out = EMPTY
    for _ in range(k):
        out = multiply(out, w)
    return out


def letters_of_rank(rank: int) -> list[Word]:
    """All single-letter words ``a, A, b, B, ...`` for ``rank`` generators."""
    return [bytes([x]) for x in range(2 * rank)]


def reduced_words(rank: int, length: int) -> Iterable[Word]:
    """Reduced words of exactly ``length`` letters, in shortlex order."""
    if length == 0:
        yield EMPTY
        return
    for w in reduced_words(rank, length - 1):
        for x in range(2 * rank):
            if not w or w[-1] != x ^ 1:
                yield w + bytes([x])


# --------------------------------------------------------------------------
# Presentations


@dataclass(frozen=True)
class Presentation:
    """A finite presentation ``< generators | relators >``."""

    generators: tuple[str, ...]
    relators: tuple[Word, ...] = ()

    def __post_init__(self):
        if not self.generators:
            raise PresentationError("empty alphabet")
        if len(self.generators) > MAX_GENERATORS:
            raise PresentationError(f"at most {MAX_GENERATORS} generators supported")
        if len(set(self.generators)) != len(self.generators):
            raise PresentationError("duplicate generator name")
        for name in self.generators:
            if not _NAME_RE.fullmatch(name):
                raise PresentationError(f"bad generator name {name!r}")
        limit = 2 * len(self.generators)
        rels = []
        for r in self.relators:
            if any(x >= limit for x in r):
                raise PresentationError("relator uses a letter outside the alphabet")
            c = cyclically_reduce(r)
            if c:
                rels.append(c)
        object.__setattr__(self, "relators", tuple(rels))

    @property
    def rank(self) -> int:
        return len(self.generators)

    @property
    def is_free(self) -> bool:
        return not self.relators

    @property
    def max_relator_length(self) -> int:
        return max((len(r) for r in self.relators), default=0)

    def letter_name(self, x: int) -> str:
        name = self.generators[x >> 1]
        if not x & 1:
            return name
        if len(name) == 1 and name.islower():
            return name.upper()
        return f"{name}^-1"

    def format_word(self, w: Word) -> str:
        if not w:
            return "1"
        if all(len(n) == 1 and n.islower() for n in self.generators):
            return "".join(self.letter_name(x) for x in w)
        return " ".join(self.letter_name(x) for x in w)

    def parse_word(self, text: str) -> Word:
        return free_reduce(_parse_word(text, self.generators, 1, 1))

    def generator_word(self, i: int) -> Word:
        return bytes([2 * i])

    def format(self) -> str:
        gens = ", ".join(self.generators)
        rels = ", ".join(self.format_word(r) for r in self.relators)
        return f"< {gens} | {rels} >"

    def digest(self) -> str:
        return hashlib.sha256(self.format().encode()).hexdigest()[:16]

    def free_product_with_z(self, name: str = "t") -> "Presentation":
        """The presentation of ``self * Z`` with a new free generator."""
        if name in self.generators:
            raise PresentationError(f"generator {name!r} already present")
        return Presentation(self.generators + (name,), self.relators)


def _parse_word(text: str, generators: Sequence[str], line: int, col0: int) -> list[int]:
    """Tokenize a juxtaposition of generator symbols with optional powers."""
    index = {name: i for i, name in enumerate(generators)}
    singles = {name for name in generators if len(name) == 1}
    by_length = sorted(generators, key=len, reverse=True)
    out: list[int] = []
    pos = 0
    n = len(text)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        if ch == "1" and (pos + 1 == n or not text[pos + 1].isdigit()):
            # explicit identity
            pos += 1
            continue
        letter = None
        for name in by_length:
            if text.startswith(name, pos):
                letter = 2 * index[name]
                pos += len(name)
                break
        else:
            if ch.isupper() and ch.lower() in singles and ch not in index:
                letter = 2 * index[ch.lower()] + 1
                pos += 1
        if letter is None:
            m = _NAME_RE.match(text, pos)
            what = m.group(0) if m else ch
            raise PresentationError(f"unknown generator symbol {what!r}", line, col0 + pos)
        exponent = 1
        if pos < n and text[pos] == "^":
            m = re.compile(r"\^(-?)(\d+)").match(text, pos)
            if not m or int(m.group(2)) == 0:
                raise PresentationError("bad exponent", line, col0 + pos)
            exponent = int(m.group(2)) * (-1 if m.group(1) else 1)
            pos = m.end()
        if exponent < 0:
            letter ^= 1
        out.extend([letter] * abs(exponent))
    return out


def _line_col(text: str, offset: int) -> tuple[int, int]:
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_presentation(text: str) -> Presentation:
    """Parse ``< g1, g2, ... | w1, w2, ... >``; ``#`` starts a comment."""
    stripped = re.sub(r"#[^\n]*", lambda m: " " * len(m.group(0)), text)
    lt = stripped.find("<")
    if lt < 0 or stripped[:lt].strip():
        line, col = _line_col(text, max(lt, 0) if lt >= 0 else 0)
        raise PresentationError("expected '<'", line, col)
    bar = stripped.find("|", lt)
    gt = stripped.rfind(">")
    if bar < 0:
        line, col = _line_col(text, len(text))
        raise PresentationError("expected '|'", line, col)
    if gt < bar:
        line, col = _line_col(text, len(text))
        raise PresentationError("expected '>'", line, col)
    if stripped[gt + 1 :].strip():
        line, col = _line_col(text, gt + 1)
        raise PresentationError("trailing text after '>'", line, col)

    generators: list[str] = []
    offset = lt + 1
    for part in stripped[lt + 1 : bar].split(","):
        name = part.strip()
        start = offset + (len(part) - len(part.lstrip()))
        offset += len(part) + 1
        if not name:
            if part.strip() == "" and stripped[lt + 1 : bar].strip() == "":
                break
            line, col = _line_col(text, start)
            raise PresentationError("empty generator name", line, col)
        if not _NAME_RE.fullmatch(name):
            line, col = _line_col(text, start)
            raise PresentationError(f"bad generator name {name!r}", line, col)
        if name in generators:
            line, col = _line_col(text, start)
            raise PresentationError(f"duplicate generator {name!r}", line, col)
        generators.append(name)
    if not generators:
        line, col = _line_col(text, lt)
        raise PresentationError("empty alphabet", line, col)

    relators: list[Word] = []
    body = stripped[bar + 1 : gt]
    offset = bar + 1
    if body.strip():
        for part in body.split(","):
            start = offset
            offset += len(part) + 1
            if not part.strip():
                line, col = _line_col(text, start)
                raise PresentationError("empty relator", line, col)
            line, col = _line_col(text, start)
            letters = _parse_word(part, generators, line, col)
            relators.append(free_reduce(letters))
    return Presentation(tuple(generators), tuple(relators))


# --------------------------------------------------------------------------
# Generating sets


@dataclass(frozen=True)
class GenSetSpec:
    """A finite set of nontrivial reduced words, closed-up to inverses.

    Each member is stored as the shortlex-smaller of ``w`` and ``w^-1`` and
    the members are sorted shortlex, so two specs with the same symmetrized
    set ``S u S^-1`` compare equal.
    """

    members: tuple[Word, ...]
    _normalized: bool = field(default=False, repr=False, compare=False)

    def __post_init__(self):
        if not self._normalized:
            object.__setattr__(self, "members", normalize_members(self.members))
            object.__setattr__(self, "_normalized", True)

    @classmethod
    def of(cls, words: Iterable[Word]) -> "GenSetSpec":
        return cls(tuple(free_reduce(w) for w in words))

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    @property
    def total_length(self) -> int:
        return sum(len(w) for w in self.members)

    def symmetrized(self) -> tuple[Word, ...]:
        """``members`` interleaved with their inverses: ``s1, s1^-1, s2, ...``."""
        out = []
        for w in self.members:
            out.append(w)
            out.append(invert(w))
        return tuple(out)

    def sort_key(self) -> tuple:
        return (self.total_length, tuple(shortlex_key(w) for w in self.members))

    def with_member(self, w: Word) -> "GenSetSpec":
        return GenSetSpec(self.members + (free_reduce(w),))

    def format(self, p: Presentation) -> list[str]:
        return [p.format_word(w) for w in self.members]


def canonical_member(w: Word) -> Word:
    v = invert(w)
    return w if (len(w), w) <= (len(v), v) else v


def normalize_members(words: Iterable[Word]) -> tuple[Word, ...]:
    seen = set()
    for w in words:
        w = free_reduce(w)
        if w:
            seen.add(canonical_member(w))
    return tuple(sorted(seen, key=shortlex_key))


def parse_genset(text: str, p: Presentation) -> GenSetSpec:
    """One word per line; ``#`` comments and blank lines are ignored."""
    words = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        words.append(free_reduce(_parse_word(line, p.generators, lineno, 1)))
    if not any(words):
        raise PresentationError("generating set has no nontrivial member")
    return GenSetSpec.of(words)


def standard_genset(p: Presentation) -> GenSetSpec:
    return GenSetSpec(tuple(p.generator_word(i) for i in range(p.rank)))

"""Derivations: certificates that a word lies in the normal closure of the relators.

A derivation is a small expression DAG built from relators by conjugation,
products and inversion.  ``evaluate`` returns the reduced word it denotes;
``flatten`` expands it into an explicit product of conjugates of relators,
which is what emitted records carry so third parties can re-check them with
free reduction alone.
"""
from __future__ import annotations

from typing import Sequence

from .words import EMPTY, Word, free_reduce, invert, multiply


class Derivation:
    __slots__ = ("kind", "args", "_value")

    def __init__(self, kind: str, args: tuple):
        self.kind = kind
        self.args = args
        self._value: Word | None = None

    def __repr__(self):
        return f"Derivation({self.kind})"


EMPTY_DERIVATION = Derivation("empty", ())


def relator(index: int) -> Derivation:
    return Derivation("rel", (index,))


def conj(x: Word, d: Derivation) -> Derivation:
    """The derivation of ``x d x^-1``."""
    if not x or d is EMPTY_DERIVATION:
        return d
    return Derivation("conj", (x, d))


def inv(d: Derivation) -> Derivation:
    if d is EMPTY_DERIVATION:
        return d
    if d.kind == "inv":
        return d.args[0]
    return Derivation("inv", (d,))


def prod(*ds: Derivation) -> Derivation:
    parts = tuple(d for d in ds if d is not EMPTY_DERIVATION)
    if not parts:
        return EMPTY_DERIVATION
    if len(parts) == 1:
        return parts[0]
    return Derivation("prod", parts)


def evaluate(d: Derivation, relators: Sequence[Word]) -> Word:
    """The reduced word denoted by ``d`` (memoized on the node)."""
    if d._value is not None:
        return d._value
    # iterative post-order to survive deep chains
    stack = [(d, False)]
    while stack:
        node, ready = stack.pop()
        if node._value is not None:
            continue
        kind = node.kind
        if kind == "empty":
            node._value = EMPTY
        elif kind == "rel":
            node._value = relators[node.args[0]]
        elif not ready:
            stack.append((node, True))
            children = (node.args[1],) if kind == "conj" else node.args if kind == "prod" else (node.args[0],)
            for c in children:
                if c._value is None:
                    stack.append((c, False))
        elif kind == "conj":
            x, c = node.args
            node._value = multiply(multiply(x, c._value), invert(x))
        elif kind == "inv":
            node._value = invert(node.args[0]._value)
        else:
            w = EMPTY
            for c in node.args:
                w = multiply(w, c._value)
            node._value = w
    return d._value


def flatten(d: Derivation, limit: int | None = None) -> list[tuple[Word, int, int]]:
    """Expand ``d`` into ``[(conjugator, relator index, sign), ...]``.

    The product of ``c r_i^sign c^-1`` over the list, left to right, freely
    reduces to ``evaluate(d)``.  Raises ``OverflowError`` past ``limit`` terms.
    """
    out: list[tuple[Word, int, int]] = []
    # (node, conjugator prefix, inverted?)
    stack = [(d, EMPTY, False)]
    while stack:
        node, x, neg = stack.pop()
        kind = node.kind
        if kind == "empty":
            continue
        if kind == "rel":
            out.append((x, node.args[0], -1 if neg else 1))
            if limit is not None and len(out) > limit:
                raise OverflowError("derivation too large to flatten")
        elif kind == "conj":
            stack.append((node.args[1], multiply(x, node.args[0]), neg))
        elif kind == "inv":
            stack.append((node.args[0], x, not neg))
        else:
            parts = node.args if neg else node.args[::-1]
            # stack is LIFO: push so that the first factor pops first
            for c in parts:
                stack.append((c, x, neg))
    return out


def product_of_conjugates(terms: Sequence[tuple[Word, int, int]], relators: Sequence[Word]) -> Word:
    w = EMPTY
    for x, i, sign in terms:
        r = relators[i] if sign > 0 else invert(relators[i])
        w = multiply(w, multiply(multiply(x, r), invert(x)))
    return w


def check_terms(terms, relators, target: Word) -> bool:
    return product_of_conjugates(terms, relators) == free_reduce(target)

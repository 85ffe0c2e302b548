"""Small presentations used by tests, scripts and examples."""
from __future__ import annotations

from .words import Presentation, parse_presentation

_NAMES = "abcdefghijklmnopqrsuvwxyz"  # t is kept free for free products


def free(k: int) -> Presentation:
    if not 1 <= k <= len(_NAMES):
        raise ValueError("rank out of range")
    return Presentation(tuple(_NAMES[:k]))


def z2() -> Presentation:
    return parse_presentation("< a, b | abAB >")


def z3() -> Presentation:
    return parse_presentation("< a, b, c | abAB, acAC, bcBC >")


def cyclic(n: int) -> Presentation:
    return parse_presentation(f"< a | a^{n} >")


def surface2() -> Presentation:
    """Genus-2 surface group, relator ``[a,c][b,d]``.

    This spelling completes to a finite shortlex system; the textbook
    ``[a,b][c,d]`` does not under the same ordering.
    """
    return parse_presentation("< a, b, c, d | acACbdBD >")

"""Line-delimited, self-verifying result records.

Each record is a JSON object with ``version`` and ``kind``; words are stored
in the presentation's own spelling and the presentation text travels with the
record, so ``verify`` needs nothing but the file.  Floats only appear as
fixed-precision strings next to the integers that certify them.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from . import derivations as dv
from .bounds import BelowEmission, CutItem, EgrUpperBound, cut_holds
from .census import BallCensus, GenerationStatus, UpperCensus
from .explorer import CuspSequence, EGRSample
from .words import GenSetSpec, Presentation, Word, free_reduce, invert, multiply, parse_presentation

VERSION = 1
DIGITS = 6


def dumps(record: dict) -> str:
    return json.dumps(record, sort_keys=True, separators=(",", ":"), ensure_ascii=False)


def _head(kind: str, p: Presentation) -> dict:
    return {"version": VERSION, "kind": kind, "presentation": p.format(), "digest": p.digest()}


def _fmt(x: float) -> str:
    return f"{x:.{DIGITS}f}"


def _bound_fields(b: EgrUpperBound) -> dict:
    return {"value": _fmt(b.value), "witness_radius": b.witness_radius, "witness_count": b.witness_count,
            "certified_exact": b.certified_exact}


def census_record(p: Presentation, c: BallCensus | UpperCensus) -> dict:
    r = _head("census", p)
    r.update(genset=c.genset.format(p), sizes=list(c.ball_sizes), exact=bool(c.exact),
             log_steps=getattr(c, "log_steps", 0))
    return r


def egr_record(p: Presentation, c: BallCensus | UpperCensus, b: EgrUpperBound) -> dict:
    r = census_record(p, c)
    r["kind"] = "egr"
    r.update(_bound_fields(b))
    return r


def cut_record(p: Presentation, s: GenSetSpec, item: CutItem, conditional: bool) -> dict:
    r = _head("cut", p)
    r.update(genset=s.format(p), x=str(item.x), radius=item.radius, count=item.count, budget=item.budget,
             conditional=conditional)
    return r


def _witness_fields(p: Presentation, gen: GenerationStatus) -> list[dict]:
    out = []
    for i in sorted(gen.witnesses):
        w = gen.witnesses[i]
        terms = dv.flatten(w.derivation)
        out.append({"generator": p.generators[i], "product": [[m, sign] for m, sign in w.product],
                    "terms": [[p.format_word(x), k, sign] for x, k, sign in terms]})
    return out


def below_record(p: Presentation, r_value: Fraction, em: BelowEmission) -> dict:
    r = cut_record(p, em.genset, em.cut, False)
    r["kind"] = "below"
    r.update(r=str(r_value), witnesses=_witness_fields(p, em.generation))
    return r


def sample_records(s: EGRSample) -> list[dict]:
    p = s.group
    out = []
    for e in s.entries:
        r = _head("sample", p)
        r.update(genset=e.genset.format(p), sizes=list(e.sizes), exact=s.exact, log_steps=s.log_steps,
                 multiplicity=e.multiplicity,
                 orbit_key=list(e.orbit_key.format(p)) if e.orbit_key is not None else None,
                 ratio=_fmt(e.ratio.ratio) if e.ratio is not None else None,
                 slack=_fmt(e.slack) if e.slack is not None else None)
        r.update(_bound_fields(e.bound))
        out.append(r)
    return out


def cusp_record(c: CuspSequence) -> dict:
    p = c.base
    r = _head("cusp", p)
    r.update(genset=c.genset.format(p), radius=c.radius, target_sizes=list(c.target_sizes),
             target=_bound_fields(c.target_bound),
             steps=[{"index": st.index, "word": p.format_word(st.word), "sizes": list(st.sizes),
                     "bound": _bound_fields(st.bound), "dominated": st.dominated, "gap": _fmt(st.gap)}
                    for st in c.steps])
    return r


def ordinal_record(expr: str, normal_form: str, points: Sequence[float] | None = None) -> dict:
    r = {"version": VERSION, "kind": "ordinal", "expr": expr, "normal_form": normal_form}
    if points is not None:
        r["points"] = [repr(float(x)) for x in points]
    return r


def estimate_record(estimate, n_points: int) -> dict:
    return {"version": VERSION, "kind": "ordinal-estimate", "estimate": str(estimate.ordinal),
            "points": n_points, "lower_bound": estimate.lower_bound, "unstable": estimate.unstable,
            "heuristic": True,
            "levels": [{"epsilon": repr(l.epsilon), "clusters": l.clusters} for l in estimate.levels]}


# --------------------------------------------------------------------------
# Verification


class RecordError(ValueError):
    pass


def _check(cond: bool, message: str):
    if not cond:
        raise RecordError(message)


def _presentation(r: dict) -> Presentation:
    p = parse_presentation(r["presentation"])
    _check(p.digest() == r["digest"], "presentation digest mismatch")
    return p


def _check_sizes(sizes: Sequence[int], exact: bool):
    _check(len(sizes) >= 1 and sizes[0] == 1, "ball of radius 0 must have size 1")
    _check(all(isinstance(x, int) and x >= 1 for x in sizes), "sizes must be positive integers")
    _check(all(a <= b for a, b in zip(sizes, sizes[1:])), "ball sizes must be nondecreasing")
    if exact:
        n_max = len(sizes) - 1
        for n in range(1, n_max + 1):
            for m in range(1, n_max - n + 1):
                _check(sizes[n + m] <= sizes[n] * sizes[m], f"submultiplicativity fails at {n}+{m}")


def _check_value(value: str, n: int, m: int):
    v = Fraction(value)
    ulp = Fraction(1, 10 ** DIGITS)
    _check((v - ulp) ** n <= m <= (v + ulp) ** n, f"value {value} is not the {n}-th root of {m}")


def _check_bound(r: dict, sizes: Sequence[int]):
    n, m = r["witness_radius"], r["witness_count"]
    _check(1 <= n < len(sizes) and sizes[n] == m, "witness does not match the census")
    for k in range(1, len(sizes)):
        # m^(1/n) <= sizes[k]^(1/k)
        _check(m ** k <= sizes[k] ** n, f"radius {k} gives a smaller bound than the witness")
    _check_value(r["value"], n, m)


def _check_cut(r: dict):
    x = Fraction(r["x"])
    n, m = r["radius"], r["count"]
    _check(x > 1 and n >= 1 and m >= 1, "malformed cut")
    _check(cut_holds(x, n, m), f"x^n > m fails for x={r['x']}, n={n}, m={m}")


def _check_witnesses(p: Presentation, r: dict):
    members = [p.parse_word(w) for w in r["genset"]]
    names = set()
    for wit in r["witnesses"]:
        g = p.parse_word(wit["generator"])
        names.add(wit["generator"])
        prod: Word = b""
        for idx, sign in wit["product"]:
            m = members[idx]
            prod = multiply(prod, m if sign > 0 else invert(m))
        target = free_reduce(prod + invert(g))
        terms = [(p.parse_word(x), k, sign) for x, k, sign in wit["terms"]]
        _check(all(0 <= k < len(p.relators) for _, k, _ in terms), "relator index out of range")
        _check(dv.check_terms(terms, p.relators, target),
               f"witness for {wit['generator']} is not a product of relator conjugates")
    _check(names == set(p.generators), "not every generator has a witness")


def verify_record(r: dict) -> None:
    """Raise ``RecordError`` unless every certificate in ``r`` checks out."""
    _check(r.get("version") == VERSION, "unsupported record version")
    kind = r.get("kind")
    if kind in ("census", "egr", "sample"):
        _presentation(r)
        _check_sizes(r["sizes"], r["exact"])
        if kind != "census":
            _check_bound(r, r["sizes"])
    elif kind == "cut":
        _presentation(r)
        _check_cut(r)
    elif kind == "below":
        p = _presentation(r)
        _check_cut(r)
        _check(Fraction(r["x"]) < Fraction(r["r"]), "cut rational is not below r")
        _check_witnesses(p, r)
    elif kind == "cusp":
        _presentation(r)
        target = r["target_sizes"]
        _check_sizes(target, True)
        _check_bound(r["target"], target)
        for st in r["steps"]:
            _check_sizes(st["sizes"], True)
            _check_bound(st["bound"], st["sizes"])
            dominated = all(a <= b for a, b in zip(st["sizes"], target))
            _check(dominated == st["dominated"], f"domination flag wrong at step {st['index']}")
            _check(dominated, f"step {st['index']} is not dominated by the free product census")
    elif kind == "ordinal":
        from .ordinals import parse_ordinal
        _check(str(parse_ordinal(r["normal_form"])) == r["normal_form"], "normal form does not round trip")
        _check(str(parse_ordinal(r["expr"])) == r["normal_form"], "normal form does not match the expression")
        if "points" in r:
            pts = [float(x) for x in r["points"]]
            _check(all(a < b for a, b in zip(pts, pts[1:])), "realization is not strictly increasing")
    elif kind == "ordinal-estimate":
        _check(r.get("heuristic") is True, "estimates must be labelled heuristic")
    else:
        raise RecordError(f"unknown record kind {kind!r}")


@dataclass
class Failure:
    line: int
    kind: str
    message: str

    def describe(self) -> str:
        return f"record {self.line} ({self.kind}): {self.message}"


def verify_lines(lines: Iterable[str]) -> tuple[int, list[Failure]]:
    """Check every record; returns ``(records checked, failures)``."""
    count = 0
    failures = []
    for lineno, line in enumerate(lines, 1):
        if not line.strip():
            continue
        count += 1
        try:
            r = json.loads(line)
            verify_record(r)
        except (RecordError, ValueError, KeyError, TypeError, IndexError) as exc:
            kind = r.get("kind", "?") if isinstance(locals().get("r"), dict) else "?"
            failures.append(Failure(lineno, kind, str(exc) or type(exc).__name__))
        finally:
            r = None
    return count, failures

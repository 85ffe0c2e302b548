"""``growthlab`` command line: censuses, bounds, cut streams, probes and verification.

Exit status: 0 on success, 1 when ``verify`` finds a bad certificate, 2 on
usage errors (bad flags, unreadable or malformed inputs).
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from fractions import Fraction
from pathlib import Path

from . import records as rec
from .bounds import BelowThresholdStream, CutStream, egr_upper, ratio_estimate
from .census import CensusError, exact_balls, generates_semi, upper_balls
from .config import ConfigError, RunConfig
from .consequences import make_oracle
from .explorer import cusp_sequence, enumerate_gensets, sample_egr, wellorder_report
from .ordinals import OrdinalSyntaxError, canonical_set, order_type_estimate, parse_ordinal
from .words import PresentationError, parse_genset, parse_presentation, standard_genset

COMMANDS = ("balls", "egr", "cuts", "below-r", "explore", "cusp", "ordinal", "ordinal-estimate", "verify")


class UsageError(Exception):
    pass


def _read(path: str | None, what: str) -> str:
    if not path:
        raise UsageError(f"--{what} FILE is required")
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {what} file {path!r}: {exc.strerror}") from None


def _presentation(path: str | None, what: str = "presentation"):
    text = _read(path, what)
    try:
        return parse_presentation(text)
    except PresentationError as exc:
        raise UsageError(f"{path}: {exc}") from None


def _genset(cfg: RunConfig, p):
    if not cfg.genset:
        return standard_genset(p)
    try:
        return parse_genset(_read(cfg.genset, "genset"), p)
    except PresentationError as exc:
        raise UsageError(f"{cfg.genset}: {exc}") from None


class Output:
    def __init__(self, cfg: RunConfig, stream):
        self.records = cfg.format == "records"
        self.stream = stream

    def human(self, text: str):
        if not self.records:
            print(text, file=self.stream)

    def record(self, r: dict):
        if self.records:
            print(rec.dumps(r), file=self.stream)


# --------------------------------------------------------------------------
# Subcommands


def _census(cfg: RunConfig, p, s):
    oracle = make_oracle(p, cfg.max_rules, cfg.max_lhs_len, cfg.cache_dir, semi_only=cfg.semi)
    if oracle.exact and cfg.budget is None:
        return exact_balls(oracle, s, cfg.radius)
    return upper_balls(p, s, cfg.radius, cfg.budget or 0, cap=cfg.cap)


def cmd_balls(cfg, out):
    p = _presentation(cfg.presentation)
    c = _census(cfg, p, _genset(cfg, p))
    out.human(json.dumps(list(c.ball_sizes)))
    if not c.exact:
        out.human(f"# upper census after {c.log_steps} consequence steps")
    out.record(rec.census_record(p, c))


def cmd_egr(cfg, out):
    p = _presentation(cfg.presentation)
    c = _census(cfg, p, _genset(cfg, p))
    b = egr_upper(c)
    out.human(f"egr <= {b.format()}")
    if cfg.certify:
        out.human(f"witness (m, n) = ({b.witness_count}, {b.witness_radius})  "
                  f"{'exact' if b.certified_exact else 'upper'} census")
    if c.exact and cfg.radius >= 4:
        est = ratio_estimate(c)
        out.human(f"ratio estimate {est.ratio:.6f} (not certified{', finite group' if est.finite else ''})")
    out.record(rec.egr_record(p, c, b))


def cmd_cuts(cfg, out):
    p = _presentation(cfg.presentation)
    s = _genset(cfg, p)
    oracle = make_oracle(p, cfg.max_rules, cfg.max_lhs_len, cfg.cache_dir, semi_only=cfg.semi)
    gen = generates_semi(p, s, cfg.generation_budget, cfg.steps_per_stage)
    stream = CutStream(p, s, oracle=oracle, generation=gen, budget_unit=cfg.budget_unit,
                       level_weight=cfg.level_weight, cap=cfg.cap)
    if stream.conditional:
        out.human("# generation not certified: emissions bound the growth of the generated subgroup")
    for item in stream.run(cfg.max_weight, cfg.emit_limit):
        out.human(f"x = {item.x}  certificate n={item.radius} m={item.count} budget={item.budget}")
        out.record(rec.cut_record(p, s, item, stream.conditional))


def cmd_below_r(cfg, out):
    p = _presentation(cfg.presentation)
    if not cfg.r:
        raise UsageError("--r P/Q is required")
    try:
        r = Fraction(cfg.r)
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"--r must be a rational like 3/2, got {cfg.r!r}") from None
    stream = BelowThresholdStream(p, r, cfg.max_genset_length, generation_budget=cfg.generation_budget,
                                  steps_per_stage=cfg.steps_per_stage, budget_unit=cfg.budget_unit,
                                  cap=cfg.cap)
    if stream.pruned:
        out.human(f"# nothing can be emitted below r = {r} (floor {stream.floor})")
    for em in stream.run(cfg.rounds):
        out.human(f"{em.genset.format(p)}  x = {em.cut.x}  n={em.cut.radius} m={em.cut.count}")
        out.record(rec.below_record(p, r, em))
        if cfg.emit_limit is not None and len(stream.emitted) >= cfg.emit_limit:
            break


def cmd_explore(cfg, out):
    p = _presentation(cfg.presentation)
    gensets = enumerate_gensets(p, cfg.size, cfg.max_length, generation_budget=cfg.generation_budget,
                                steps_per_stage=cfg.steps_per_stage)
    sample = sample_egr(p, gensets, cfg.radius, cfg.budget or 0, cap=cfg.cap)
    out.human(f"# {len(sample.entries)} orbit classes from {len(gensets.verified)} verified sets "
              f"({len(gensets.unknown)} undecided), radius {cfg.radius}")
    for e in sample.entries:
        key = ",".join(e.orbit_key.format(p)) if e.orbit_key else "-"
        slack = f"{e.slack:.4f}" if e.slack is not None else "-"
        out.human(f"{e.bound.format()}  x{e.multiplicity}  {{{','.join(e.genset.format(p))}}}  "
                  f"orbit=({key})  slack={slack}")
    for r in rec.sample_records(sample):
        out.record(r)
    if sample.entries:
        try:
            rep = wellorder_report(sample, cfg.epsilon)
        except ValueError as exc:
            out.human(f"# no well-order report: {exc}")
            return
        out.human(f"# epsilon {rep.epsilon:.4g}: {len(rep.clusters)} clusters, least at "
                  f"{rep.minimum.lo:.6f} (x{rep.minimum.count}), longest descending chain {rep.chain_length}")
        out.human(f"# {rep.note}")


def cmd_cusp(cfg, out):
    base = _presentation(cfg.base or cfg.presentation, "base")
    s = _genset(cfg, base)
    seq = cusp_sequence(base, s, steps=cfg.steps, radius=cfg.radius)
    out.human(f"target {{S, t}}: bound {seq.target_bound.format()}  sizes {list(seq.target_sizes)}")
    for st in seq.steps:
        out.human(f"w_{st.index} = {base.format_word(st.word)}: bound {st.bound.format()}  "
                  f"gap {st.gap:.6f}  dominated={st.dominated}")
    out.record(rec.cusp_record(seq))


def cmd_ordinal(cfg, out):
    if not cfg.expr:
        raise UsageError("--expr is required")
    try:
        x = parse_ordinal(cfg.expr)
    except OrdinalSyntaxError as exc:
        raise UsageError(f"bad ordinal expression: {exc}") from None
    out.human(str(x))
    points = None
    if cfg.realize:
        try:
            points = canonical_set(x, cfg.depth).values
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        for v in points:
            out.human(repr(v))
    out.record(rec.ordinal_record(cfg.expr, str(x), points))


def cmd_ordinal_estimate(cfg, out):
    text = _read(cfg.input, "input")
    try:
        values = [float(line) for line in text.split() if line.strip()]
    except ValueError as exc:
        raise UsageError(f"{cfg.input}: {exc}") from None
    try:
        est = order_type_estimate(values, cfg.schedule)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    flags = [f for f, on in (("lower bound", est.lower_bound), ("unstable", est.unstable)) if on]
    out.human(f"{est.ordinal}  (heuristic{'; ' + ', '.join(flags) if flags else ''})")
    for lvl in est.levels:
        out.human(f"# epsilon {lvl.epsilon:g}: {lvl.clusters} clusters from {lvl.items_in} items")
    out.record(rec.estimate_record(est, len(values)))


def cmd_verify(cfg, out) -> int:
    text = _read(cfg.input, "input")
    count, failures = rec.verify_lines(text.splitlines())
    if count == 0:
        raise UsageError(f"{cfg.input} contains no records")
    for f in failures:
        print(f"FAIL {f.describe()}", file=sys.stderr)
    print(f"{count - len(failures)}/{count} records verified", file=out.stream)
    return 1 if failures else 0


HANDLERS = {
    "balls": cmd_balls, "egr": cmd_egr, "cuts": cmd_cuts, "below-r": cmd_below_r, "explore": cmd_explore,
    "cusp": cmd_cusp, "ordinal": cmd_ordinal, "ordinal-estimate": cmd_ordinal_estimate, "verify": cmd_verify,
}


# --------------------------------------------------------------------------
# Argument parsing


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="growthlab", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--config", help="JSON RunConfig; its keys override flags")
        sp.add_argument("--format", choices=("human", "records"), default=argparse.SUPPRESS)
        sp.add_argument("--output", default=argparse.SUPPRESS, help="write to FILE instead of stdout")
        return sp

    def group_args(sp, genset=True):
        sp.add_argument("--presentation", default=argparse.SUPPRESS)
        if genset:
            sp.add_argument("--genset", default=argparse.SUPPRESS)
        sp.add_argument("--semi", action="store_true", default=argparse.SUPPRESS,
                        help="use only the semi-decision engine")
        sp.add_argument("--cap", type=int, default=argparse.SUPPRESS)

    sp = common(sub.add_parser("balls", help="ball sizes"))
    group_args(sp)
    sp.add_argument("--radius", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--budget", type=int, default=argparse.SUPPRESS)

    sp = common(sub.add_parser("egr", help="certified growth-rate upper bound"))
    group_args(sp)
    sp.add_argument("--radius", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--certify", action="store_true", default=argparse.SUPPRESS)

    sp = common(sub.add_parser("cuts", help="enumerate rationals above the growth rate"))
    group_args(sp)
    sp.add_argument("--max-weight", dest="max_weight", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--emit-limit", dest="emit_limit", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--budget-unit", dest="budget_unit", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--level-weight", dest="level_weight", type=int, default=argparse.SUPPRESS)

    sp = common(sub.add_parser("below-r", help="generating sets with growth rate below r"))
    group_args(sp, genset=False)
    sp.add_argument("--r", default=argparse.SUPPRESS)
    sp.add_argument("--max-genset-length", dest="max_genset_length", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--rounds", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--emit-limit", dest="emit_limit", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--budget-unit", dest="budget_unit", type=int, default=argparse.SUPPRESS)

    sp = common(sub.add_parser("explore", help="sample growth-rate bounds over generating sets"))
    group_args(sp, genset=False)
    sp.add_argument("--size", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--max-length", dest="max_length", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--radius", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--epsilon", type=float, default=argparse.SUPPRESS)

    sp = common(sub.add_parser("cusp", help="cusp-sequence experiment"))
    sp.add_argument("--base", default=argparse.SUPPRESS)
    sp.add_argument("--genset", default=argparse.SUPPRESS)
    sp.add_argument("--steps", type=int, default=argparse.SUPPRESS)
    sp.add_argument("--radius", type=int, default=argparse.SUPPRESS)

    sp = common(sub.add_parser("ordinal", help="normal form and real realization of an ordinal"))
    sp.add_argument("--expr", default=argparse.SUPPRESS)
    sp.add_argument("--realize", action="store_true", default=argparse.SUPPRESS)
    sp.add_argument("--depth", type=int, default=argparse.SUPPRESS)

    sp = common(sub.add_parser("ordinal-estimate", help="estimate the order type of a sample of reals"))
    sp.add_argument("--input", default=argparse.SUPPRESS)
    sp.add_argument("--schedule", type=lambda t: [float(x) for x in t.split(",")], default=argparse.SUPPRESS,
                    help="comma-separated decreasing epsilons")

    sp = common(sub.add_parser("verify", help="re-check every certificate in a record file"))
    sp.add_argument("--input", default=argparse.SUPPRESS)
    return parser


def make_config(argv) -> RunConfig:
    ns = vars(build_parser().parse_args(argv))
    config_path = ns.pop("config", None)
    cfg = RunConfig().merged(ns)
    if config_path:
        try:
            data = json.loads(Path(config_path).read_text())
        except OSError as exc:
            raise UsageError(f"cannot read config {config_path!r}: {exc.strerror}") from None
        except json.JSONDecodeError as exc:
            raise UsageError(f"config {config_path!r} is not valid JSON: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError(f"config {config_path!r} must be a JSON object")
        data.pop("command", None)
        cfg = cfg.merged(data)
    return cfg


def run(cfg: RunConfig, stream=None) -> int:
    stream = stream if stream is not None else sys.stdout
    if cfg.command not in HANDLERS:
        raise UsageError(f"unknown command {cfg.command!r}; choose from {', '.join(COMMANDS)}")
    if cfg.output:
        with open(cfg.output, "w") as fh:
            return run(RunConfig(**{**asdict(cfg), "output": None}), fh)
    status = HANDLERS[cfg.command](cfg, Output(cfg, stream))
    return status or 0


def main(argv=None) -> int:
    try:
        cfg = make_config(argv)
        return run(cfg)
    except (UsageError, ConfigError) as exc:
        print(f"growthlab: error: {exc}", file=sys.stderr)
        return 2
    except CensusError as exc:
        print(f"growthlab: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Command-line interface.

stdout carries data only (JSON, JSON-lines, CSV or SVG); diagnostics go to
stderr.  Exit codes: 0 ok, 1 bad flags or malformed input, 2-6 map the
library errors (see ``charvar --help``).
"""
from __future__ import annotations

import argparse
import logging
import math
import sys
import time
from fractions import Fraction
from typing import List, Optional, Sequence

from . import emit
from .config import Config, load_config
from .errors import EXIT_CODES, CharVarError
from .farey import PrimitiveClass
from .lengths import (
    area,
    concavity_check,
    convexity_check,
    estimate_compare,
    length_bracket,
    level_set,
    sectors,
    transvection_report,
)
from .markoff import (
    FORMS,
    BigTriple,
    clebsch_roots,
    count,
    enumerate_orbit,
    flip_count,
    reduce,
)
from .traces import Character, TraceContext, classify_character, length_of_class

log = logging.getLogger("charvar")

_VALUE_FLAGS = ("--chi", "--triple", "--roots", "--class", "--vector")


class UsageError(Exception):
    """Malformed flags or values; exit status 1."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _number(tok: str):
    tok = tok.strip()
    try:
        return int(tok)
    except ValueError:
        pass
    if "/" in tok:
        return Fraction(tok)
    return float(tok)


def _numbers(text: str, count: int, what: str) -> list:
    parts = text.split(",")
    if len(parts) != count:
        raise UsageError(f"{what} needs {count} comma-separated numbers, got {text!r}")
    try:
        return [_number(p) for p in parts]
    except ValueError as exc:
        raise UsageError(f"malformed {what} {text!r}") from exc


def _ints(text: str, count: int, what: str) -> List[int]:
    vals = _numbers(text, count, what)
    if not all(isinstance(v, int) for v in vals):
        raise UsageError(f"{what} must be integers, got {text!r}")
    return vals


def _character(args, cfg: Config) -> Character:
    if args.chi is None:
        raise UsageError("--chi x,y,z is required")
    vals = _numbers(args.chi, 3, "--chi")
    try:
        return Character(*vals, mode=cfg.arithmetic_mode)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _default_roots(k: int, form: str):
    if k == 0:
        return [(3, 3, 3)] if form == "kappa" else [(1, 1, 1)]
    if k == 20 and form == "kappa":
        return [r.coords for r in clebsch_roots()]
    raise UsageError(f"no default roots for k={k}; pass --roots a,b,c;...")


def _roots(args) -> list:
    if args.roots is None:
        return _default_roots(args.k, args.normalization)
    return [tuple(_ints(chunk, 3, "--roots")) for chunk in args.roots.split(";") if chunk.strip()]


class _Out:
    """Collects stdout text; adds timing metadata when not deterministic."""

    def __init__(self, cfg: Config, stream):
        self.cfg = cfg
        self.stream = stream
        self.start = time.perf_counter()

    def elapsed(self) -> float:
        return round(time.perf_counter() - self.start, 6)

    def obj(self, record: dict):
        if not self.cfg.deterministic:
            record = dict(record, elapsed_s=self.elapsed())
        self.stream.write(emit.json_line(record) + "\n")

    def line(self, text: str):
        self.stream.write(text + "\n")

    def text(self, text: str, path: Optional[str] = None):
        if path:
            with open(path, "w", encoding="utf-8", newline="\n") as fh:
                fh.write(text)
        else:
            self.stream.write(text)


# --------------------------------------------------------------------------
# subcommands

def cmd_enumerate(args, cfg, out):
    form = args.normalization
    triples = enumerate_orbit(args.k, _roots(args), args.radius, form)
    for t in triples:
        out.line(emit.json_line(emit.triple_record(t)))


def cmd_count(args, cfg, out):
    try:
        radii = [int(r) for r in args.radii.split(",") if r.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed --radii {args.radii!r}") from exc
    if not radii:
        raise UsageError("empty radius schedule")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise UsageError("--radii must be increasing")
    stats = count(args.k, _roots(args), radii, fit=args.fit, raw=args.raw,
                  form=args.normalization)
    for row in stats.rows():
        out.line(emit.json_line(row))
    if args.fit:
        out.obj({"C_fit": stats.fit_constant})


def cmd_levelset(args, cfg, out):
    chi = _character(args, cfg)
    samples = level_set(chi, args.level, cfg.depth, cfg.r_max)
    if cfg.output_format == "svg":
        comment = None
        if not cfg.deterministic:
            comment = f"generated {time.strftime('%Y-%m-%dT%H:%M:%S')} in {out.elapsed()} s"
        title = f"level {args.level} of length function at chi = {args.chi}"
        out.text(emit.levelset_svg(samples, title=title, comment=comment), args.out)
    elif cfg.output_format == "csv":
        out.text(emit.levelset_csv(samples), args.out)
    else:
        text = "".join(emit.json_line({"angle": s.angle, "radius": s.radius, "m": s.m,
                                       "n": s.n, "trace": s.trace, "length": s.length,
                                       "spike": s.spike}) + "\n" for s in samples)
        out.text(text, args.out)


def _cls_list(classes):
    return [[c.m, c.n] for c in sorted(classes)]


def cmd_classify(args, cfg, out):
    chi = _character(args, cfg)
    case = classify_character(chi, cfg.depth)
    out.obj({
        "case": case.case,
        "order": case.order,
        "cone_direction": None if case.cone_direction is None else list(case.cone_direction),
        "cusp_directions": _cls_list(case.cusp_directions),
        "vanishing": _cls_list(case.vanishing),
    })


def cmd_length(args, cfg, out):
    chi = _character(args, cfg)
    if args.vector is not None:
        v = _numbers(args.vector, 2, "--vector")
        value, low, high = length_bracket(chi, v, cfg.depth)
        out.obj({"vector": v if all(isinstance(a, int) for a in v) else [float(a) for a in v],
                 "length": value, "bracket": [low, high]})
        return
    if args.cls is None:
        raise UsageError("length needs --class m,n or --vector vx,vy")
    m, n = _ints(args.cls, 2, "--class")
    out.obj({"class": [m, n], "length": length_of_class(chi, m, n)})


def cmd_trace(args, cfg, out):
    chi = _character(args, cfg)
    if args.cls is None:
        raise UsageError("trace needs --class m,n")
    cls = PrimitiveClass(*_ints(args.cls, 2, "--class"))
    t = TraceContext(chi).trace(cls)
    out.obj({"class": [cls.m, cls.n], "trace": t if isinstance(t, int) else emit.to_jsonable(
        float(t) if isinstance(t, (float, Fraction)) else t)})


def cmd_reduce(args, cfg, out):
    if args.triple is None:
        raise UsageError("reduce needs --triple a,b,c")
    a, b, c = _ints(args.triple, 3, "--triple")
    root, path = reduce(BigTriple(a, b, c, k=args.k, form=args.normalization))
    out.obj({"root": list(root.coords), "steps": flip_count(path),
             "path": [str(mv) for mv in path]})


def cmd_area(args, cfg, out):
    chi = _character(args, cfg)
    res = area(chi, depth=args.max_depth)
    rec = {"kind": res.kind}
    if res.kind == "Finite":
        rec.update(value=res.value, error_estimate=res.error_estimate, depth=res.depth)
    else:
        rec["reason"] = res.reason
    out.obj(rec)


def cmd_propcheck(args, cfg, out):
    chi = _character(args, cfg)
    dps = cfg.dps if chi.exact else None
    if args.mode == "convex":
        out.obj({"mode": "convex", "bound": args.bound,
                 "min_slack": convexity_check(chi, args.bound, dps=dps)})
    elif args.mode == "concave":
        per = []
        for sec in sectors(chi, cfg.depth):
            per.append({"u": list(sec.u), "v": list(sec.v),
                        "min_slack": concavity_check(chi, sec, args.bound, dps=dps)})
        out.obj({"mode": "concave", "bound": args.bound,
                 "min_slack": min(p["min_slack"] for p in per), "sectors": per})
    else:
        rep = transvection_report(chi, args.bound)
        out.obj({"mode": "transvection", "bound": args.bound,
                 "max_discrepancy": rep.max_discrepancy, "order": rep.order,
                 "cone_direction": list(rep.cone_direction), "basis": rep.basis,
                 "trace_mismatches": rep.trace_mismatches})


def _int_range(text: str, what: str) -> range:
    try:
        lo, hi = (int(p) for p in text.split(":"))
    except ValueError as exc:
        raise UsageError(f"{what} must look like lo:hi") from exc
    return range(lo, hi + 1)


def cmd_estimate(args, cfg, out):
    rows = estimate_compare(_int_range(args.m_range, "--m-range"),
                            _int_range(args.n_range, "--n-range"))
    out.text(emit.estimate_csv(rows), args.out)


# --------------------------------------------------------------------------

def _exit_code_help() -> str:
    lines = ["exit codes:", "  0  success", "  1  bad flags or malformed input"]
    lines += [f"  {code}  {text}" for code, text in sorted(EXIT_CODES.items())]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--config", help="key = value config file; flags override it")
    common.add_argument("--arithmetic", choices=["exact", "float"], dest="arithmetic_mode",
                        help="force arithmetic mode (default: exact for integer input)")
    common.add_argument("--depth", type=int, help="max |m| + |n| of sampled classes (default 50)")
    common.add_argument("--rmax", type=float, dest="r_max", help="radius clip (default 1000)")
    common.add_argument("--precision", type=int, help="bits for high-precision checks")
    common.add_argument("--no-deterministic", dest="deterministic", action="store_false",
                        default=None, help="add timing metadata to the output")
    common.add_argument("-v", "--verbose", action="store_true")

    p = _Parser(prog="charvar", description=__doc__.splitlines()[0],
                epilog=_exit_code_help(), formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, epilog=_exit_code_help(),
                            formatter_class=argparse.RawDescriptionHelpFormatter)
        sp.set_defaults(func=func)
        return sp

    def markoff_flags(sp):
        sp.add_argument("--k", type=int, required=True, help="level of x^2+y^2+z^2-xyz")
        sp.add_argument("--roots", help="roots as a,b,c;a,b,c (default: known roots of k)")
        sp.add_argument("--normalization", choices=sorted(FORMS), default="kappa")

    sp = add("enumerate", cmd_enumerate, "JSON-lines triples of the Markoff-tree orbit")
    markoff_flags(sp)
    sp.add_argument("--radius", type=int, required=True)

    sp = add("count", cmd_count, "counting table M(R) for a radius schedule")
    markoff_flags(sp)
    sp.add_argument("--radii", required=True, help="R1,R2,... increasing")
    sp.add_argument("--fit", action="store_true", help="also fit M(R) ~ C (log R)^2")
    sp.add_argument("--raw", action="store_true", help="count ordered signed triples")

    sp = add("levelset", cmd_levelset, "sample a level set of the length function")
    sp.add_argument("--chi", help="character x,y,z")
    sp.add_argument("--level", type=float, default=1.0)
    sp.add_argument("--format", choices=["csv", "jsonl", "svg"], dest="output_format")
    sp.add_argument("--out", help="write here instead of stdout")

    sp = add("classify", cmd_classify, "vanishing pattern of the length function")
    sp.add_argument("--chi")

    sp = add("length", cmd_length, "length of a class, or of a real vector")
    sp.add_argument("--chi")
    sp.add_argument("--class", dest="cls", help="m,n")
    sp.add_argument("--vector", help="vx,vy (real)")

    sp = add("trace", cmd_trace, "trace of a primitive class")
    sp.add_argument("--chi")
    sp.add_argument("--class", dest="cls", help="m,n")

    sp = add("reduce", cmd_reduce, "reduce a triple to its Markoff-tree root")
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--triple")
    sp.add_argument("--normalization", choices=sorted(FORMS), default="kappa")

    sp = add("area", cmd_area, "area enclosed by the unit level set")
    sp.add_argument("--chi")
    sp.add_argument("--max-depth", type=int, default=256)

    sp = add("propcheck", cmd_propcheck, "triangle / anti-triangle / transvection checks")
    sp.add_argument("--chi")
    sp.add_argument("--mode", choices=["convex", "concave", "transvection"], required=True)
    sp.add_argument("--bound", type=int, default=15)

    sp = add("estimate", cmd_estimate, "CSV of Gamma(2) lengths against the estimate")
    sp.add_argument("--m-range", default="2:40")
    sp.add_argument("--n-range", default="1:10")
    sp.add_argument("--out")
    return p


def _glue_values(argv: Sequence[str]) -> List[str]:
    """Let '--chi -2,-2,-2' through: argparse would read the value as a flag."""
    out = []
    it = iter(argv)
    for tok in it:
        if tok in _VALUE_FLAGS:
            nxt = next(it, None)
            out.append(tok if nxt is None else f"{tok}={nxt}")
        else:
            out.append(tok)
    return out


def main(argv: Optional[Sequence[str]] = None, stdout=None) -> int:
    stdout = stdout or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(_glue_values(argv))
        logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING,
                            stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")
        cfg = load_config(args.config).override(
            arithmetic_mode=args.arithmetic_mode, depth=args.depth, r_max=args.r_max,
            precision=args.precision, deterministic=args.deterministic,
            output_format=getattr(args, "output_format", None))
        args.func(args, cfg, _Out(cfg, stdout))
    except UsageError as exc:
        print(f"charvar: error: {exc}", file=sys.stderr)
        return 1
    except CharVarError as exc:
        print(f"charvar: {type(exc).__name__}: {exc}", file=sys.stderr)
        return exc.exit_code
    except (ValueError, OSError) as exc:
        print(f"charvar: error: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())

"""Serialisation: level-set and estimate CSV, JSON-lines records, SVG plots.

Numbers are written with Python's shortest round-trip repr, so CSV output
parses back to bit-identical values.  CSV uses a header row, '.' decimals
and LF line endings.
"""
from __future__ import annotations

import csv
import io
import json
import math
import re
from typing import Iterable, List, Optional, Sequence

from .lengths import EstimateRow, LevelSetSample
from .traces import LogTrace

LEVELSET_FIELDS = ["angle", "radius", "m", "n", "trace", "length", "spike"]
ESTIMATE_FIELDS = ["m", "n", "actual", "estimate", "lower_bound"]
_LOG_RE = re.compile(r"^(-?)exp\((.+)\)$")


def format_number(x) -> str:
    if isinstance(x, bool):
        return "1" if x else "0"
    if isinstance(x, int):
        return str(x)
    if isinstance(x, LogTrace):
        return str(x)
    return repr(float(x))


def parse_number(s: str):
    """Inverse of format_number: ints stay ints, log-form traces come back."""
    m = _LOG_RE.match(s)
    if m:
        return LogTrace(-1 if m.group(1) else 1, float(m.group(2)))
    try:
        return int(s)
    except ValueError:
        return float(s)


def _writer(buf):
    return csv.writer(buf, lineterminator="\n")


def levelset_csv(samples: Iterable[LevelSetSample]) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(LEVELSET_FIELDS)
    for s in samples:
        radius = "" if (s.spike and math.isinf(s.radius)) else format_number(s.radius)
        w.writerow([format_number(s.angle), radius, s.m, s.n, format_number(s.trace),
                    format_number(s.length), format_number(s.spike)])
    return buf.getvalue()


def parse_levelset_csv(text: str) -> List[LevelSetSample]:
    rows = csv.DictReader(io.StringIO(text))
    if rows.fieldnames != LEVELSET_FIELDS:
        raise ValueError(f"unexpected header {rows.fieldnames}")
    out = []
    for r in rows:
        spike = r["spike"] == "1"
        radius = math.inf if r["radius"] == "" else float(r["radius"])
        out.append(LevelSetSample(float(r["angle"]), radius, int(r["m"]), int(r["n"]),
                                  parse_number(r["trace"]), float(r["length"]), spike))
    return out


def estimate_csv(rows: Iterable[EstimateRow]) -> str:
    buf = io.StringIO()
    w = _writer(buf)
    w.writerow(ESTIMATE_FIELDS)
    for row in rows:
        w.writerow([row.m, row.n] + [format_number(v) for v in row[2:]])
    return buf.getvalue()


def to_jsonable(x):
    if isinstance(x, LogTrace):
        return str(x)
    if isinstance(x, float) and not math.isfinite(x):
        return None
    if isinstance(x, dict):
        return {k: to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(v) for v in x]
    return x


def json_line(record) -> str:
    return json.dumps(to_jsonable(record), allow_nan=False)


def triple_record(t) -> dict:
    return {"k": t.k, "triple": list(t.coords), "norm": t.norm}


# --------------------------------------------------------------------------
# SVG

SVG_SIZE = 600
_MARGIN = 20


def _fmt(v: float) -> str:
    s = f"{v:.3f}"
    return "0.000" if s == "-0.000" else s


def _runs_between_spikes(samples: Sequence[LevelSetSample]) -> List[List[LevelSetSample]]:
    """Cyclic runs of non-spike samples separated by spike samples."""
    idx = [i for i, s in enumerate(samples) if s.spike]
    if not idx:
        return [list(samples)]
    runs = []
    k = len(samples)
    for a, b in zip(idx, idx[1:] + [idx[0] + k]):
        run = [samples[j % k] for j in range(a + 1, b)]
        if run:
            runs.append(run)
    return runs


def levelset_svg(samples: Sequence[LevelSetSample], title: Optional[str] = None,
                 comment: Optional[str] = None) -> str:
    """SVG 1.1 polar plot of a level set.

    Non-spike samples in each sector between spikes become one polyline (a
    closed polygon when there are no spikes); each spike is one line from
    the origin to the frame edge.  The frame is scaled to the finite part
    of the level set; a cross marks the axes at the origin.
    """
    finite = [s for s in samples if not s.spike]
    extent = max((max(abs(x), abs(y)) for x, y in (s.point for s in finite)), default=0.0)
    half = extent * 1.1 if extent > 0 else 1.0
    centre = SVG_SIZE / 2.0
    scale = (centre - _MARGIN) / half

    def px(x, y):
        return _fmt(centre + x * scale), _fmt(centre - y * scale)

    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" xmlns:cv="urn:charvar" version="1.1" '
        f'width="{SVG_SIZE}" height="{SVG_SIZE}" viewBox="0 0 {SVG_SIZE} {SVG_SIZE}">',
    ]
    if comment:
        lines.append(f"<!-- {comment} -->")
    if title:
        lines.append(f"<title>{title}</title>")
    arm = 0.05 * half
    (ax0, ay0), (ax1, ay1) = px(-arm, 0.0), px(arm, 0.0)
    (bx0, by0), (bx1, by1) = px(0.0, -arm), px(0.0, arm)
    lines.append(f'<path class="axes" d="M{ax0} {ay0}L{ax1} {ay1}M{bx0} {by0}L{bx1} {by1}" '
                 'stroke="black" stroke-width="2" fill="none"/>')
    runs = _runs_between_spikes(samples)
    for run in runs:
        pts = " ".join(",".join(px(*s.point)) for s in run)
        tag = "polygon" if len(runs) == 1 and len(finite) == len(samples) else "polyline"
        lines.append(f'<{tag} class="level" points="{pts}" fill="none" stroke="navy" '
                     f'stroke-width="1"/>')
    for s in samples:
        if not s.spike:
            continue
        c, sn = math.cos(s.angle), math.sin(s.angle)
        reach = min(s.radius, half / max(abs(c), abs(sn)))
        x1, y1 = px(0.0, 0.0)
        x2, y2 = px(reach * c, reach * sn)
        lines.append(f'<line class="spike" x1="{x1}" y1="{y1}" x2="{x2}" y2="{y2}" '
                     f'cv:m="{s.m}" cv:n="{s.n}" cv:trace="{format_number(s.trace)}" '
                     'stroke="firebrick" stroke-width="1"/>')
    lines.append("</svg>")
    return "\n".join(lines) + "\n"

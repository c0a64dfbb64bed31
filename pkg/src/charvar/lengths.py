"""The length function extended homogeneously to R^2, and its level sets.

For a nonzero vector v = s * (m, n) with (m, n) primitive, the extension is
s * length(m, n).  Level sets {v : l(v) = level} are sampled radially at the
directions of primitive classes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, List, NamedTuple, Optional, Sequence, Tuple

import mpmath

from .errors import BadSector, NoFiniteOrderCone, ZeroVector
from .farey import Cone, PrimitiveClass, christoffel_exponents, primitive_part
from .traces import (
    BOUNDARY_CLASSES,
    Character,
    Scalar,
    TraceContext,
    as_character,
    classify_character,
    classify_holonomy,
    gamma2_matrices,
    is_vanishing,
    length_from_trace,
    vanishing_classes,
    word_trace,
)

TWO_PI = 2.0 * math.pi
HIGH_PRECISION_DPS = 60


def _context(c, ctx: Optional[TraceContext]) -> TraceContext:
    if ctx is not None:
        return ctx
    return TraceContext(c)


def _is_exact_vector(v) -> bool:
    return all(isinstance(a, Rational) and not isinstance(a, bool) for a in v)


def length_bracket(c, v: Sequence, depth: int = 50,
                   ctx: Optional[TraceContext] = None) -> Tuple[float, float, float]:
    """(value, low, high) for the extended length at v.

    Rational vectors give value == low == high.  Otherwise the direction is
    approached down the Farey tree for ``depth`` steps; the value comes from
    the last convergent and the bracket from the two enclosing ones, each
    scaled to the Euclidean norm of v.
    """
    if v[0] == 0 and v[1] == 0:
        raise ZeroVector("length of the zero vector")
    ctx = _context(c, ctx)
    if _is_exact_vector(v):
        fx, fy = Fraction(v[0]), Fraction(v[1])
        den = math.lcm(fx.denominator, fy.denominator)
        g, cls = primitive_part(int(fx * den), int(fy * den))
        val = float(Fraction(g, den) * Fraction(length_from_trace(ctx.trace(cls))))
        return val, val, val
    if ctx.character.exact:
        # deep convergents have huge classes; exact traces would have millions of digits
        ctx = TraceContext(Character(*ctx.character.triple, mode="float"))
    vx, vy = float(v[0]), float(v[1])
    if vx < 0 or (vx == 0 and vy < 0):
        vx, vy = -vx, -vy
    norm = math.hypot(vx, vy)

    def scaled(u):
        g, cls = primitive_part(*u)
        return length_from_trace(ctx.trace(cls)) * norm / math.hypot(*u)

    if vy == 0:
        return scaled((1, 0)), scaled((1, 0)), scaled((1, 0))
    if vx == 0:
        return scaled((0, 1)), scaled((0, 1)), scaled((0, 1))
    sign = 1 if vy > 0 else -1
    ay = abs(vy)
    lo, hi, mid = (1, 0), (0, 1), (1, 1)
    last = mid
    for _ in range(depth):
        c_ = ay * mid[0] - vx * mid[1]
        if c_ == 0:
            val = scaled((mid[0], sign * mid[1]))
            return val, val, val
        if c_ < 0:
            hi = mid
        else:
            lo = mid
        mid = (lo[0] + hi[0], lo[1] + hi[1])
        last = lo if c_ > 0 else hi
    a = scaled((lo[0], sign * lo[1]))
    b = scaled((hi[0], sign * hi[1]))
    val = scaled((last[0], sign * last[1]))
    return val, min(a, b), max(a, b)


def length_extended(c, v: Sequence, depth: int = 50,
                    ctx: Optional[TraceContext] = None) -> float:
    return length_bracket(c, v, depth, ctx)[0]


# --------------------------------------------------------------------------
# level sets

@dataclass(frozen=True)
class LevelSetSample:
    """One radial sample; (m, n) is the oriented direction vector."""

    angle: float
    radius: float  # math.inf for an unclipped spike
    m: int
    n: int
    trace: Scalar
    length: float
    spike: bool

    @property
    def cls(self) -> PrimitiveClass:
        return PrimitiveClass(self.m, self.n)

    @property
    def point(self) -> Tuple[float, float]:
        return (self.radius * math.cos(self.angle), self.radius * math.sin(self.angle))


def _angle(m: int, n: int) -> float:
    a = math.atan2(n, m)
    return a + TWO_PI if a < 0 else a


def level_set(c, level: float = 1.0, depth: int = 50, r_max: Optional[float] = None,
              ctx: Optional[TraceContext] = None) -> List[LevelSetSample]:
    """Radial samples of l^-1(level) at every class with |m| + |n| <= depth.

    Each canonical class gives two samples, for v and -v.  Radii are
    clipped at ``r_max`` (default 1000 * level); pass math.inf to keep
    spikes unbounded.
    """
    if level <= 0:
        raise ValueError("level must be positive")
    if r_max is None:
        r_max = 1000.0 * level
    ctx = _context(c, ctx)
    out = []
    for cls, t in ctx.iter_classes(depth):
        spike = is_vanishing(t)
        ell = length_from_trace(t)
        norm = math.hypot(cls.m, cls.n)
        r = level * norm / ell if ell > 0 else math.inf
        r = min(r, r_max)
        for s in (1, -1):
            m, n = s * cls.m, s * cls.n
            out.append(LevelSetSample(_angle(m, n), r, m, n, t, ell, spike))
    out.sort(key=lambda smp: smp.angle)
    return out


def spikes(c, depth: int = 50, ctx: Optional[TraceContext] = None) -> List[PrimitiveClass]:
    """Canonical classes with |m| + |n| <= depth along which l vanishes."""
    return vanishing_classes(c, depth, ctx)


# --------------------------------------------------------------------------
# area

@dataclass(frozen=True)
class AreaResult:
    kind: str  # "Finite" | "Divergent"
    value: Optional[float] = None
    error_estimate: Optional[float] = None
    reason: Optional[str] = None  # "cusp" | "cone" when Divergent
    depth: Optional[int] = None


def polygon_area(samples: Sequence[LevelSetSample]) -> float:
    """Area of the star polygon through angle-sorted samples."""
    total = 0.0
    k = len(samples)
    for i in range(k):
        a, b = samples[i], samples[(i + 1) % k]
        dtheta = b.angle - a.angle
        if i == k - 1:
            dtheta += TWO_PI
        total += 0.5 * a.radius * b.radius * math.sin(dtheta)
    return total


def _divergence_reason(c, depth: int) -> Optional[str]:
    case = classify_character(c, depth)
    if case.case == "Generic" and not case.vanishing:
        return None
    if case.cusp_directions:
        return "cusp"
    ctx = TraceContext(c)
    if any(classify_holonomy(ctx.trace(cls)).kind == "parabolic" for cls in case.vanishing):
        return "cusp"
    return "cone"


def area(c, depth: int = 256, rel_tol: float = 1e-3, start_depth: int = 16) -> AreaResult:
    """Area enclosed by l^-1(1), refined by doubling the sampling depth.

    Stops when the relative change between successive depths drops below
    ``rel_tol`` or the depth cap is reached; error_estimate is the last
    change.  Any vanishing direction makes the area infinite.
    """
    c = as_character(c)
    reason = _divergence_reason(c, min(depth, 50))
    if reason is not None:
        return AreaResult("Divergent", reason=reason)
    ctx = TraceContext(c)
    d = min(start_depth, depth)
    prev = polygon_area(level_set(c, 1.0, d, math.inf, ctx))
    delta = math.inf
    while d < depth:
        d = min(2 * d, depth)
        cur = polygon_area(level_set(c, 1.0, d, math.inf, ctx))
        delta = abs(cur - prev)
        prev = cur
        if delta < rel_tol * abs(cur):
            break
    return AreaResult("Finite", prev, delta, depth=d)


def equilateral_family(lengths: Iterable[float]) -> List[Character]:
    """Characters (-2 cosh(L/2),) * 3 with all boundary lengths L."""
    out = []
    for L in lengths:
        if L < 0:
            raise ValueError("boundary length must be non-negative")
        t = -2.0 * math.cosh(L / 2.0)
        out.append(Character(t, t, t))
    return out


# --------------------------------------------------------------------------
# transvection invariance

@dataclass(frozen=True)
class TransvectionReport:
    max_discrepancy: float
    order: int
    cone_direction: PrimitiveClass
    basis: str
    trace_mismatches: int


def _cone_basis(c: Character, cone: PrimitiveClass):
    """Character in a basis whose first generator is the cone loop.

    Returns (character, label, to_old) where to_old maps new (m, n) to
    the original homology coordinates.
    """
    if cone == PrimitiveClass(1, 0):
        return c, "identity", lambda m, n: (m, n)
    if cone == PrimitiveClass(0, 1):
        return c.swapped(), "swap", lambda m, n: (n, m)
    # cone is alpha beta: new generators (alpha beta, beta)
    x, y, z = c.triple
    new = Character(z, y, y * z - x, c.mode)
    return new, "(ab, b)", lambda m, n: (m, m + n)


def transvection_report(c, bound: int = 30) -> TransvectionReport:
    c = as_character(c)
    case = classify_character(c, depth=2)
    if case.cone_direction is None or case.order is None:
        raise NoFiniteOrderCone(f"{c.triple} has no finite-order cone point")
    p = case.order
    new, label, _ = _cone_basis(c, case.cone_direction)
    ctx = TraceContext(new)
    worst = 0.0
    mismatches = 0
    for cls, t in list(ctx.iter_classes(bound)):
        m, n = cls.m, cls.n
        _, img = primitive_part(m + p * n, n)
        t2 = ctx.trace(img)
        if new.exact and abs(t) != abs(t2):
            mismatches += 1
        worst = max(worst, abs(length_from_trace(t) - length_from_trace(t2)))
    return TransvectionReport(worst, p, case.cone_direction, label, mismatches)


def transvection_check(c, bound: int = 30) -> float:
    """max |l(m, n) - l(m + p n, n)| over classes with |m| + |n| <= bound."""
    return transvection_report(c, bound).max_discrepancy


# --------------------------------------------------------------------------
# triangle / anti-triangle inequalities

def _length_table(ctx: TraceContext, dps: Optional[int]):
    """Memoised l(v) for integer vectors; mpmath lengths when dps is set."""
    cache = {}

    def ell(v):
        if v not in cache:
            g, cls = primitive_part(*v)
            t = ctx.trace(cls)
            if dps is None:
                cache[v] = g * length_from_trace(t)
            else:
                a = abs(mpmath.mpf(t))
                cache[v] = g * 2 * mpmath.acosh(a / 2) if a > 2 else mpmath.mpf(0)
        return cache[v]

    return ell


def _precision(ctx: TraceContext, dps: Optional[int]) -> Optional[int]:
    # slacks of Farey-neighbour pairs shrink like 1/(t(h) t(g)), far below
    # double precision, so exact characters are measured in mpmath
    if dps is None and ctx.character.exact:
        return HIGH_PRECISION_DPS
    return dps


def _box_vectors(bound: int, primitive_only: bool):
    out = []
    for m in range(-bound, bound + 1):
        for n in range(-bound, bound + 1):
            if (m, n) == (0, 0):
                continue
            if primitive_only and math.gcd(m, n) != 1:
                continue
            out.append((m, n))
    return out


def convexity_check(c, bound: int = 15, ctx: Optional[TraceContext] = None,
                    dps: Optional[int] = None) -> float:
    """min of l(h) + l(g) - l(h + g) over non-parallel primitive h, g.

    h and g range over primitive vectors with |coordinates| <= bound.
    Exact characters are evaluated with ``dps`` decimal digits (default 60).
    """
    ctx = _context(c, ctx)
    dps = _precision(ctx, dps)
    vecs = _box_vectors(bound, primitive_only=True)
    with mpmath.workdps(dps or 15):
        ell = _length_table(ctx, dps)
        best = math.inf
        for i, h in enumerate(vecs):
            lh = ell(h)
            for g in vecs[i + 1:]:
                if h[0] * g[1] == h[1] * g[0]:
                    continue
                s = (h[0] + g[0], h[1] + g[1])
                slack = lh + ell(g) - ell(s)
                if slack < best:
                    best = slack
    return float(best)


def _direction_key(v) -> float:
    return _angle(*v)


def sectors(c, depth: int = 50) -> List[Cone]:
    """Open cones between angularly adjacent vanishing directions.

    With no vanishing direction the three boundary classes and their
    negatives are used, giving six sectors.
    """
    dirs = vanishing_classes(c, depth) or list(BOUNDARY_CLASSES)
    rays = sorted({v for cls in dirs for v in (cls.vector, (-cls.m, -cls.n))},
                  key=_direction_key)
    return [Cone(rays[i], rays[(i + 1) % len(rays)]) for i in range(len(rays))]


def concavity_check(c, sector: Cone, bound: int = 12,
                    ctx: Optional[TraceContext] = None, dps: Optional[int] = None) -> float:
    """min of l(h + g) - l(h) - l(g) over h, g in the open sector.

    h and g are nonzero integer vectors with |coordinates| <= bound.
    Parallel pairs give slack 0 by homogeneity and are kept.
    """
    for cls in BOUNDARY_CLASSES:
        for v in (cls.vector, (-cls.m, -cls.n)):
            if sector.interior_contains(v):
                raise BadSector(f"sector {sector.u}, {sector.v} contains boundary direction {v}")
    ctx = _context(c, ctx)
    dps = _precision(ctx, dps)
    vecs = [v for v in _box_vectors(bound, primitive_only=False) if sector.interior_contains(v)]
    with mpmath.workdps(dps or 15):
        ell = _length_table(ctx, dps)
        best = math.inf
        for i, h in enumerate(vecs):
            lh = ell(h)
            for g in vecs[i:]:
                s = (h[0] + g[0], h[1] + g[1])
                slack = ell(s) - lh - ell(g)
                if slack < best:
                    best = slack
    return float(best)


# --------------------------------------------------------------------------
# Gamma(2) length estimate

class EstimateRow(NamedTuple):
    m: int
    n: int
    actual: float
    estimate: float
    lower_bound: float


def estimate_compare(m_range: Iterable[int], n_range: Iterable[int]) -> List[EstimateRow]:
    """Thrice-punctured-sphere lengths against n * l(A^m1 B) style estimates.

    actual is computed from the exact Gamma(2) trace of the word with
    Christoffel exponents; estimate = 2 n log(2 floor(m/n)); lower_bound =
    (log 2 / K) m with K = ceil(m / n).
    """
    mats = gamma2_matrices()
    n_values = list(n_range)
    rows = []
    for m in m_range:
        for n in n_values:
            if not (m > n >= 1) or math.gcd(m, n) != 1:
                continue
            t = word_trace(mats, christoffel_exponents(m, n))
            K = -(-m // n)
            rows.append(EstimateRow(m, n, length_from_trace(t),
                                    2.0 * n * math.log(2 * (m // n)),
                                    math.log(2.0) / K * m))
    return rows

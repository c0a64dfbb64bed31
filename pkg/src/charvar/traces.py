"""Characters of the rank-2 free group and traces of primitive classes.

A character is the triple (x, y, z) = (tr A, tr B, tr AB).  The trace of
every primitive class is reached through the Farey tessellation using

    t(u + v) + t(u - v) = t(u) t(v)

for Farey-neighbour vectors u, v, with base values

    t(1, 0) = x,  t(0, 1) = y,  t(1, 1) = z,  t(1, -1) = xy - z.

Integer (and Fraction) characters are evaluated exactly; real characters
in floating point, switching to a sign/log representation once a trace
passes 1e150 so that lengths stay finite.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational
from typing import Dict, Iterator, List, NamedTuple, Optional, Sequence, Tuple, Union

from .errors import EllipticProduct, UnclassifiableCharacter, ZeroClass
from .farey import PrimitiveClass, canonical_classes, primitive_part

LOG_SWITCH = 1e150
_LOG_SWITCH = math.log(LOG_SWITCH)
PARABOLIC_TOL = 1e-9
ANGLE_TOL = 1e-9
MAX_ORDER = 60


class LogTrace(NamedTuple):
    """A float-mode trace too large for a float: value = sign * exp(log_abs)."""

    sign: int
    log_abs: float

    def __float__(self):
        return math.copysign(math.inf, self.sign)

    def __str__(self):
        return f"{'-' if self.sign < 0 else ''}exp({self.log_abs!r})"


Scalar = Union[int, Fraction, float, LogTrace]


def _is_exact(v) -> bool:
    return isinstance(v, Rational) and not isinstance(v, bool)


def _sign_log(v) -> Tuple[int, float]:
    if isinstance(v, LogTrace):
        return v.sign, v.log_abs
    if v == 0:
        return 0, -math.inf
    return (1 if v > 0 else -1), math.log(abs(v))


def _from_sign_log(sign: int, log_abs: float) -> Union[float, LogTrace]:
    if sign == 0:
        return 0.0
    if log_abs < _LOG_SWITCH:
        return math.copysign(math.exp(log_abs), sign)
    return LogTrace(sign, log_abs)


def mul_sub(a: Scalar, b: Scalar, c: Scalar) -> Scalar:
    """a * b - c, exact for rationals, overflow-safe for floats."""
    if type(a) is not LogTrace and type(b) is not LogTrace and type(c) is not LogTrace:
        if _is_exact(a) and _is_exact(b) and _is_exact(c):
            return a * b - c
        r = a * b - c
        if abs(r) < LOG_SWITCH:
            return float(r)
        return LogTrace(1 if r > 0 else -1, math.log(abs(r)))
    sa, la = _sign_log(a)
    sb, lb = _sign_log(b)
    sc, lc = _sign_log(c)
    sp, lp = sa * sb, la + lb
    if sp == 0:
        return _from_sign_log(-sc, lc)
    if sc == 0 or lc - lp < -745.0:
        return _from_sign_log(sp, lp)
    # p - c = p (1 - q) with q = c / p
    q = sc * sp * math.exp(lc - lp) if lc - lp < 700.0 else None
    if q is None:
        return _from_sign_log(-sc, lc + math.log1p(-sp * sc * math.exp(lp - lc)))
    if q == 1.0:
        return 0.0
    if q < 1.0:
        return _from_sign_log(sp, lp + math.log1p(-q))
    return _from_sign_log(-sp, lp + math.log(q - 1.0))


def abs_log(t: Scalar) -> float:
    """log |t|, valid for bignums and log-form traces."""
    if isinstance(t, LogTrace):
        return t.log_abs
    return math.log(abs(t))


def length_from_trace(t: Scalar) -> float:
    """2 arccosh(|t| / 2) for |t| > 2, otherwise 0."""
    if isinstance(t, LogTrace):
        return 2.0 * t.log_abs
    a = abs(t)
    if a <= 2:
        return 0.0
    if a > LOG_SWITCH:
        # arccosh(y) = log(2y) - O(1/y^2); the correction is below 1e-300
        return 2.0 * math.log(a)
    return 2.0 * math.acosh(float(a) / 2.0)


# --------------------------------------------------------------------------
# characters

@dataclass(frozen=True)
class Character:
    """Trace coordinates (tr A, tr B, tr AB).

    ``mode`` is ``"exact"`` when all three are integers/Fractions, else
    ``"float"``.  Forcing ``mode="float"`` converts; forcing ``"exact"`` on
    non-integral floats raises ValueError.
    """

    x: Scalar
    y: Scalar
    z: Scalar
    mode: Optional[str] = None

    def __post_init__(self):
        vals = (self.x, self.y, self.z)
        mode = self.mode
        if mode is None:
            mode = "exact" if all(_is_exact(v) for v in vals) else "float"
        if mode == "float":
            vals = tuple(float(v) for v in vals)
        elif mode == "exact":
            conv = []
            for v in vals:
                if _is_exact(v):
                    conv.append(v)
                elif float(v).is_integer():
                    conv.append(int(v))
                else:
                    raise ValueError(f"{v!r} is not exactly representable")
            vals = tuple(conv)
        else:
            raise ValueError(f"unknown arithmetic mode {mode!r}")
        for name, v in zip("xyz", vals):
            object.__setattr__(self, name, v)
        object.__setattr__(self, "mode", mode)

    @property
    def exact(self) -> bool:
        return self.mode == "exact"

    @property
    def w(self) -> Scalar:
        """tr(A B^-1), the trace of slope -1."""
        return self.x * self.y - self.z

    @property
    def triple(self) -> tuple:
        return (self.x, self.y, self.z)

    def mirrored(self) -> "Character":
        """Character after beta -> beta^-1: the class (m, n) becomes (m, -n)."""
        return Character(self.x, self.y, self.w, self.mode)

    def swapped(self) -> "Character":
        """Character after alpha <-> beta: the class (m, n) becomes (n, m)."""
        return Character(self.y, self.x, self.z, self.mode)


def as_character(c) -> Character:
    if isinstance(c, Character):
        return c
    return Character(*c)


def kappa(c) -> Scalar:
    c = as_character(c)
    x, y, z = c.triple
    return x * x + y * y + z * z - x * y * z


# --------------------------------------------------------------------------
# trace evaluation

class TraceContext:
    """Memoised trace evaluation for one character.

    The cache is keyed by canonical (m, n).  Values are deterministic, so
    concurrent callers at worst recompute an entry; the lock only guards the
    dictionary writes.
    """

    def __init__(self, character):
        self.character = as_character(character)
        self._mirror = self.character.mirrored()
        self._cache: Dict[Tuple[int, int], Scalar] = {}
        self._lock = threading.Lock()
        c = self.character
        self._store((1, 0), c.x)
        self._store((0, 1), c.y)
        self._store((1, 1), c.z)
        self._store((1, -1), c.w)

    def _store(self, key, value):
        with self._lock:
            self._cache.setdefault(key, value)

    def __len__(self):
        return len(self._cache)

    def trace(self, cls) -> Scalar:
        """Trace of a primitive class (PrimitiveClass or coprime pair)."""
        if not isinstance(cls, PrimitiveClass):
            cls = PrimitiveClass(*cls)
        key = (cls.m, cls.n)
        hit = self._cache.get(key)
        if hit is not None:
            return hit
        # (m, n) with m > 0 and n != 0, not one of the base four
        sign = 1 if cls.n > 0 else -1
        p, q = abs(cls.n), cls.m  # target slope p/q in the positive tree
        lo, hi = (1, 0), (0, 1)
        t_lo, t_hi, t_mid = self.character.x, self.character.y, (
            self.character.z if sign > 0 else self._mirror.z)
        mid = (1, 1)
        while (mid[0], mid[1]) != (q, p):
            if p * mid[0] < q * mid[1]:  # go left: new mid = lo + mid
                hi, t_hi = mid, t_mid
                mid = (lo[0] + mid[0], lo[1] + mid[1])
                key = (mid[0], sign * mid[1])
                t_mid = self._cache.get(key)
                if t_mid is None:
                    # far vertex of edge (lo, old mid) is old hi
                    t_mid = mul_sub(t_lo, t_hi, self._trace_far(lo, hi, sign))
                    self._store(key, t_mid)
            else:
                lo, t_lo = mid, t_mid
                mid = (mid[0] + hi[0], mid[1] + hi[1])
                key = (mid[0], sign * mid[1])
                t_mid = self._cache.get(key)
                if t_mid is None:
                    t_mid = mul_sub(t_lo, t_hi, self._trace_far(lo, hi, sign))
                    self._store(key, t_mid)
        return t_mid

    def _trace_far(self, lo, hi, sign) -> Scalar:
        # the far vertex of edge (lo, hi) is hi - lo or lo - hi, an ancestor
        m, n = lo[0] - hi[0], lo[1] - hi[1]
        if m < 0 or (m == 0 and n < 0):
            m, n = -m, -n
        if m == 0:
            return self.character.y
        return self._cache[(m, sign * n)]

    def iter_classes(self, max_weight: int) -> Iterator[Tuple[PrimitiveClass, Scalar]]:
        """All canonical classes with |m| + |n| <= max_weight and their traces.

        Walks the Stern-Brocot tree on both halves, O(1) per class.
        """
        c = self.character
        if max_weight >= 1:
            yield PrimitiveClass(1, 0), c.x
            yield PrimitiveClass(0, 1), c.y
        for sign, z in ((1, c.z), (-1, self._mirror.z)):
            if max_weight < 2:
                break
            # stack entries: lo, hi, t_lo, t_hi, t_mid (mid = lo + hi)
            stack = [((1, 0), (0, 1), c.x, c.y, z)]
            while stack:
                lo, hi, t_lo, t_hi, t_mid = stack.pop()
                mid = (lo[0] + hi[0], lo[1] + hi[1])
                key = (mid[0], sign * mid[1])
                self._store(key, t_mid)
                yield PrimitiveClass(*key), t_mid
                # right child (mid, hi) first so the left one pops first
                if mid[0] + hi[0] + mid[1] + hi[1] <= max_weight:
                    stack.append((mid, hi, t_mid, t_hi, mul_sub(t_mid, t_hi, t_lo)))
                if lo[0] + mid[0] + lo[1] + mid[1] <= max_weight:
                    stack.append((lo, mid, t_lo, t_mid, mul_sub(t_lo, t_mid, t_hi)))

    def length(self, m: int, n: int) -> float:
        g, cls = primitive_part(m, n)
        return g * length_from_trace(self.trace(cls))


def trace_of_class(c, cls, ctx: Optional[TraceContext] = None) -> Scalar:
    """Trace of the primitive conjugacy class with homology ``cls``."""
    if ctx is None:
        ctx = TraceContext(c)
    return ctx.trace(cls)


def length_of_class(c, m: int, n: int, ctx: Optional[TraceContext] = None) -> float:
    """Length of the class (m, n); g * length of the primitive part.

    Parabolic and elliptic classes count as length 0.
    """
    if m == 0 and n == 0:
        raise ZeroClass("length of the zero class is undefined")
    if ctx is None:
        ctx = TraceContext(c)
    return ctx.length(m, n)


# --------------------------------------------------------------------------
# holonomy

@dataclass(frozen=True)
class Holonomy:
    kind: str  # "hyperbolic" | "parabolic" | "elliptic"
    length: Optional[float] = None
    angle: Optional[float] = None
    order: Optional[int] = None

    @property
    def vanishes(self) -> bool:
        return self.kind != "hyperbolic"


def classify_holonomy(t: Scalar, tol: float = PARABOLIC_TOL,
                      max_order: int = MAX_ORDER) -> Holonomy:
    """Hyperbolic / parabolic / elliptic type of an SL(2, R) trace.

    Exact inputs compare |t| with 2 exactly; floats use ``tol``.  For an
    elliptic trace the rotation angle theta solves |t| = 2 cos(theta / 2), and
    the order is the denominator of theta / 2 pi when that is rational with
    denominator <= max_order.
    """
    if isinstance(t, LogTrace):
        return Holonomy("hyperbolic", length=2.0 * t.log_abs)
    a = abs(t)
    if _is_exact(t):
        parabolic = a == 2
    else:
        parabolic = abs(a - 2.0) <= tol
    if parabolic:
        return Holonomy("parabolic")
    if a > 2:
        return Holonomy("hyperbolic", length=length_from_trace(t))
    theta = 2.0 * math.acos(float(a) / 2.0)
    turns = theta / (2.0 * math.pi)
    frac = Fraction(turns).limit_denominator(max_order)
    order = frac.denominator if abs(float(frac) - turns) <= ANGLE_TOL else None
    return Holonomy("elliptic", angle=theta, order=order)


def is_vanishing(t: Scalar, tol: float = PARABOLIC_TOL) -> bool:
    """|t| <= 2 (with float tolerance): the class has length 0."""
    if isinstance(t, LogTrace):
        return False
    if _is_exact(t):
        return abs(t) <= 2
    return abs(t) <= 2.0 + tol


BOUNDARY_CLASSES = (PrimitiveClass(1, 0), PrimitiveClass(0, 1), PrimitiveClass(1, 1))


@dataclass(frozen=True)
class TheoremOneCase:
    """Which of the four vanishing patterns a character falls into.

    ``vanishing`` lists every class found with |trace| <= 2 in the search
    window; the case itself depends only on the boundary traces x, y, z.
    """

    case: str  # Generic | CuspsOnly | ConeOnly | ConeAndCusp
    cusp_directions: frozenset = frozenset()
    cone_direction: Optional[PrimitiveClass] = None
    order: Optional[int] = None
    vanishing: Tuple[PrimitiveClass, ...] = ()


def vanishing_classes(c, depth: int, ctx: Optional[TraceContext] = None,
                      tol: float = PARABOLIC_TOL) -> List[PrimitiveClass]:
    """Sorted canonical classes with |m| + |n| <= depth and |trace| <= 2."""
    if ctx is None:
        ctx = TraceContext(c)
    return sorted(cls for cls, t in ctx.iter_classes(depth) if is_vanishing(t, tol))


def classify_character(c, depth: int = 50, tol: float = PARABOLIC_TOL,
                       ctx: Optional[TraceContext] = None) -> TheoremOneCase:
    c = as_character(c)
    hol = {cls: classify_holonomy(t, tol) for cls, t in zip(BOUNDARY_CLASSES, c.triple)}
    cusps = frozenset(cls for cls, h in hol.items() if h.kind == "parabolic")
    cones = [cls for cls, h in hol.items() if h.kind == "elliptic"]
    if len(cones) > 1:
        raise UnclassifiableCharacter(
            f"{c.triple} has {len(cones)} elliptic boundary traces")
    vanishing = tuple(vanishing_classes(c, depth, ctx, tol))
    if not cones:
        case = "CuspsOnly" if cusps else "Generic"
        return TheoremOneCase(case, cusps, vanishing=vanishing)
    cone = cones[0]
    case = "ConeAndCusp" if cusps else "ConeOnly"
    return TheoremOneCase(case, cusps, cone, hol[cone].order, vanishing)


# --------------------------------------------------------------------------
# matrix oracles

Matrix = Tuple[Tuple[Scalar, Scalar], Tuple[Scalar, Scalar]]


def mat_mul(P: Matrix, Q: Matrix) -> Matrix:
    (a, b), (c, d) = P
    (e, f), (g, h) = Q
    return ((a * e + b * g, a * f + b * h), (c * e + d * g, c * f + d * h))


def mat_pow(P: Matrix, k: int) -> Matrix:
    out = ((1, 0), (0, 1))
    base = P
    if k < 0:
        base, k = mat_inv(P), -k
    while k:
        if k & 1:
            out = mat_mul(out, base)
        base = mat_mul(base, base)
        k >>= 1
    return out


def mat_inv(P: Matrix) -> Matrix:
    """Inverse of a unit-determinant matrix."""
    (a, b), (c, d) = P
    return ((d, -b), (-c, a))


def mat_trace(P: Matrix) -> Scalar:
    return P[0][0] + P[1][1]


def mat_det(P: Matrix) -> Scalar:
    return P[0][0] * P[1][1] - P[0][1] * P[1][0]


@dataclass(frozen=True)
class MatrixPair:
    A: Matrix
    B: Matrix

    def __post_init__(self):
        for M in (self.A, self.B):
            d = mat_det(M)
            ok = d == 1 if all(_is_exact(e) for row in M for e in row) else abs(d - 1) <= 1e-12
            if not ok:
                raise ValueError(f"determinant {d} != 1")


def fricke_matrices(c) -> MatrixPair:
    """Real matrices with tr A = x, tr B = y, tr AB = z (needs |z| > 2)."""
    c = as_character(c)
    x, y, z = (float(v) for v in c.triple)
    if abs(z) <= 2:
        raise EllipticProduct(f"|z| = {abs(z)} <= 2 has no real Fricke normal form")
    xi = (z + math.copysign(math.sqrt(z * z - 4.0), z)) / 2.0
    A = ((x, -1.0), (1.0, 0.0))
    B = ((0.0, xi), (-1.0 / xi, y))
    return MatrixPair(A, B)


def gamma2_matrices() -> MatrixPair:
    """Generators of Gamma(2): parabolics A = [[1,2],[0,1]], B = [[1,0],[2,1]]."""
    return MatrixPair(((1, 2), (0, 1)), ((1, 0), (2, 1)))


def word_trace(mats: MatrixPair, exponents: Sequence[int]) -> Scalar:
    """Trace of A^e1 B A^e2 B ... A^er B."""
    if not exponents:
        raise ValueError("empty exponent sequence")
    out = ((1, 0), (0, 1))
    for e in exponents:
        out = mat_mul(out, mat_mul(mat_pow(mats.A, e), mats.B))
    return mat_trace(out)

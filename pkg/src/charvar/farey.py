"""Primitive homology classes, slopes and the Farey / Stern-Brocot tree.

All arithmetic here is exact integer arithmetic.

Conventions: the class (m, n) has slope n/m, so alpha = (1, 0) has slope 0
and beta = (0, 1) has slope infinity (encoded as 1/0).  Negative slopes live
in a mirror copy of the Stern-Brocot tree rooted at -1/1.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Iterator, Sequence, Tuple

from .errors import BadInput, BaseSlope, DegenerateCone, NotFareyNeighbors, NotInCone, ZeroClass

Vector = Tuple[int, int]


@dataclass(frozen=True, order=True)
class PrimitiveClass:
    """A primitive class (m, n) in Z^2, stored in canonical orientation.

    Canonical means m > 0, or (m, n) == (0, 1).  Passing (-m, -n) builds
    the same value, because length does not see orientation.
    """

    m: int
    n: int

    def __post_init__(self):
        m, n = int(self.m), int(self.n)
        if m == 0 and n == 0:
            raise ZeroClass("(0, 0) is not a primitive class")
        if gcd(m, n) != 1:
            raise BadInput(f"({m}, {n}) is not primitive")
        if m < 0 or (m == 0 and n < 0):
            m, n = -m, -n
        object.__setattr__(self, "m", m)
        object.__setattr__(self, "n", n)

    @property
    def slope(self) -> "Slope":
        return Slope(self.n, self.m)

    @property
    def vector(self) -> Vector:
        return (self.m, self.n)

    def __iter__(self):
        yield self.m
        yield self.n

    def __repr__(self):
        return f"PrimitiveClass({self.m}, {self.n})"


def primitive_part(m: int, n: int) -> Tuple[int, PrimitiveClass]:
    """Split a nonzero vector as g * cls with g = gcd(|m|, |n|)."""
    if m == 0 and n == 0:
        raise ZeroClass("(0, 0) has no primitive part")
    g = gcd(m, n)
    return g, PrimitiveClass(m // g, n // g)


@dataclass(frozen=True)
class Slope:
    """Extended rational numerator/denominator; infinity is 1/0."""

    numerator: int
    denominator: int

    def __post_init__(self):
        p, q = int(self.numerator), int(self.denominator)
        if p == 0 and q == 0:
            raise BadInput("0/0 is not a slope")
        if q < 0:
            p, q = -p, -q
        g = gcd(p, q)
        p, q = p // g, q // g
        if q == 0:
            p = 1
        object.__setattr__(self, "numerator", p)
        object.__setattr__(self, "denominator", q)

    @property
    def is_infinite(self) -> bool:
        return self.denominator == 0

    @property
    def primitive_class(self) -> PrimitiveClass:
        return PrimitiveClass(self.denominator, self.numerator)

    def __lt__(self, other: "Slope") -> bool:
        # infinity is larger than every finite slope
        if other.is_infinite:
            return not self.is_infinite
        if self.is_infinite:
            return False
        return self.numerator * other.denominator < other.numerator * self.denominator

    def __repr__(self):
        return f"{self.numerator}/{self.denominator}"


ZERO = Slope(0, 1)
INFINITY = Slope(1, 0)


def det(u: Sequence[int], v: Sequence[int]) -> int:
    return u[0] * v[1] - u[1] * v[0]


def _farey_det(a: Slope, b: Slope) -> int:
    return a.numerator * b.denominator - b.numerator * a.denominator


def mediant(a: Slope, b: Slope) -> Slope:
    """Mediant of two Farey neighbours.

    Infinity is read as -1/0 when the other slope is negative, so the mirror
    tree works: mediant(-1/1, 1/0) == -2/1.
    """
    if abs(_farey_det(a, b)) != 1:
        raise NotFareyNeighbors(f"{a} and {b} are not Farey neighbours")
    ap, aq = a.numerator, a.denominator
    bp, bq = b.numerator, b.denominator
    if a.is_infinite and bp < 0:
        ap = -1
    if b.is_infinite and ap < 0:
        bp = -1
    return Slope(ap + bp, aq + bq)


def _positive_descent(p: int, q: int) -> Iterator[Tuple[str, Vector, Vector]]:
    """Walk the positive Stern-Brocot tree towards p/q (p, q > 0).

    Yields (step, lo, hi) after each move, where lo/hi are the bounding
    classes as (denominator, numerator) vectors.
    """
    lo, hi = (1, 0), (0, 1)  # slopes 0/1 and 1/0 as (m, n)
    mid = (1, 1)
    while True:
        # compare p/q with mid = mid[1]/mid[0]
        c = p * mid[0] - q * mid[1]
        if c == 0:
            return
        if c < 0:
            hi = mid
            step = "L"
        else:
            lo = mid
            step = "R"
        mid = (lo[0] + hi[0], lo[1] + hi[1])
        yield step, lo, hi


def stern_brocot_path(s: Slope) -> list:
    """Sequence of 'L'/'R' moves from 1/1 down to s.

    Negative slopes use the mirror tree rooted at -1/1: the path of -s is
    returned.  0 and infinity are not in either tree.
    """
    p, q = s.numerator, s.denominator
    if p == 0 or q == 0:
        raise BaseSlope(f"{s} is a root of the Farey tessellation, not a tree node")
    return [step for step, _, _ in _positive_descent(abs(p), q)]


def farey_parents(s: Slope) -> Tuple[Slope, Slope]:
    """The Farey-neighbour pair whose mediant is s.

    -1/1 shares the base edge {0/1, 1/0} with 1/1, so both return
    (0/1, 1/0); mediant() of that pair gives back 1/1 only.
    """
    p, q = s.numerator, s.denominator
    if q == 0 or p == 0:
        raise BaseSlope(f"{s} has no Farey parents")
    lo, hi = (1, 0), (0, 1)
    for _, lo, hi in _positive_descent(abs(p), q):
        pass
    a, b = Slope(lo[1], lo[0]), Slope(hi[1], hi[0])
    if p > 0 or (abs(p), q) == (1, 1):
        return a, b
    # mirror: negate numerators; the order flips
    return (Slope(-b.numerator, b.denominator) if not b.is_infinite else INFINITY,
            Slope(-a.numerator, a.denominator))


def christoffel_exponents(m: int, n: int) -> list:
    """Block exponents (m_1, ..., m_n) of the word A^m_1 B ... A^m_n B.

    Lower mechanical word: m_i = floor(i m / n) - floor((i - 1) m / n).
    """
    if n < 1 or m <= n or gcd(m, n) != 1:
        raise BadInput(f"christoffel_exponents needs coprime m > n >= 1, got ({m}, {n})")
    return [(i * m) // n - ((i - 1) * m) // n for i in range(1, n + 1)]


@dataclass(frozen=True)
class Cone:
    """Closed positive cone spanned by two oriented primitive vectors.

    Orientation matters here, so u and v are plain integer pairs rather than
    canonical classes.
    """

    u: Vector
    v: Vector

    def __post_init__(self):
        u = tuple(int(a) for a in self.u)
        v = tuple(int(a) for a in self.v)
        if det(u, v) == 0:
            raise DegenerateCone(f"{u} and {v} are parallel")
        object.__setattr__(self, "u", u)
        object.__setattr__(self, "v", v)

    def coefficients(self, w: Sequence[int]) -> Tuple[int, int, int]:
        """(k, a, b) with k = |det(u, v)| and k w = a u + b v."""
        d = det(self.u, self.v)
        sign = 1 if d > 0 else -1
        return abs(d), sign * det(w, self.v), sign * det(self.u, w)

    def contains(self, w: Sequence[int]) -> bool:
        _, a, b = self.coefficients(w)
        return a >= 0 and b >= 0

    def interior_contains(self, w: Sequence[int]) -> bool:
        _, a, b = self.coefficients(w)
        return a > 0 and b > 0


def _as_vector(x) -> Vector:
    if isinstance(x, PrimitiveClass):
        return x.vector
    return (int(x[0]), int(x[1]))


def cone_decompose(u, v, t) -> Tuple[int, int, int]:
    """Write k t = a u + b v with k = |det(u, v)| and a, b >= 0."""
    cone = Cone(_as_vector(u), _as_vector(v))
    k, a, b = cone.coefficients(_as_vector(t))
    if a < 0 or b < 0:
        raise NotInCone(f"{tuple(t)} is not in the cone of {cone.u}, {cone.v}")
    return k, a, b


def canonical_classes(max_weight: int) -> list:
    """All canonical primitive classes with |m| + |n| <= max_weight."""
    out = []
    for m in range(0, max_weight + 1):
        for n in range(-(max_weight - m), max_weight - m + 1):
            if gcd(m, n) != 1 or (m == 0 and n != 1):
                continue
            out.append(PrimitiveClass(m, n))
    return out

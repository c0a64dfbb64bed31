"""Integer points on x^2 + y^2 + z^2 - xyz = k and their Markoff-tree dynamics.

Triples are Python ints throughout, so nothing here overflows.  Two cubic
normalisations are supported: the kappa form (coefficient 1 on xyz, the
internal default) and the classical Markoff form (coefficient 3).
"""
from __future__ import annotations

import logging
import math
from collections import deque
from dataclasses import dataclass
from itertools import permutations
from typing import Iterable, List, Optional, Sequence, Tuple

import numpy as np

from .errors import BoxTooLarge, NotDivisible, OffSurface, RootOffSurface

log = logging.getLogger(__name__)

FORMS = {"kappa": 1, "markoff": 3}
BRUTE_FORCE_LIMIT = 10**5
# |a b| below this keeps a^2 b^2 inside int64 for the vectorised box search
_INT64_SAFE = 3 * 10**9


def level(a: int, b: int, c: int, form: str = "kappa") -> int:
    return a * a + b * b + c * c - FORMS[form] * a * b * c


@dataclass(frozen=True)
class BigTriple:
    a: int
    b: int
    c: int
    k: int = 0
    form: str = "kappa"

    def __post_init__(self):
        for name in "abc":
            object.__setattr__(self, name, int(getattr(self, name)))
        if self.form not in FORMS:
            raise ValueError(f"unknown form {self.form!r}")
        lv = level(self.a, self.b, self.c, self.form)
        if lv != self.k:
            raise OffSurface(f"{self.coords} has level {lv}, not {self.k}")

    @property
    def coords(self) -> Tuple[int, int, int]:
        return (self.a, self.b, self.c)

    @property
    def norm(self) -> int:
        return max(abs(self.a), abs(self.b), abs(self.c))

    def with_coords(self, a, b, c) -> "BigTriple":
        return BigTriple(a, b, c, self.k, self.form)

    def __iter__(self):
        return iter(self.coords)


@dataclass(frozen=True)
class Move:
    """One generator of the automorphism group of the cubic.

    kind is "flip" (index 0/1/2 names the coordinate), "permute" (perm is
    a tuple sigma with new[i] = old[sigma[i]]) or "sign" (index names the
    coordinate left alone; the other two change sign).
    """

    kind: str
    index: int = 0
    perm: Tuple[int, int, int] = (0, 1, 2)

    def __str__(self):
        if self.kind == "flip":
            return "Flip" + "XYZ"[self.index]
        if self.kind == "sign":
            return "SignChange(" + ["yz", "xz", "xy"][self.index] + ")"
        return "Permute" + "".join(map(str, self.perm))


FLIP_X, FLIP_Y, FLIP_Z = Move("flip", 0), Move("flip", 1), Move("flip", 2)
SIGN_YZ, SIGN_XZ, SIGN_XY = Move("sign", 0), Move("sign", 1), Move("sign", 2)


def apply_move(t: BigTriple, mv: Move) -> BigTriple:
    v = list(t.coords)
    if mv.kind == "flip":
        i = mv.index
        j, l = [p for p in range(3) if p != i]
        v[i] = FORMS[t.form] * v[j] * v[l] - v[i]
    elif mv.kind == "permute":
        v = [v[s] for s in mv.perm]
    elif mv.kind == "sign":
        v = [x if p == mv.index else -x for p, x in enumerate(v)]
    else:
        raise ValueError(f"unknown move {mv.kind!r}")
    return t.with_coords(*v)


def normalize_signs(t: BigTriple) -> BigTriple:
    """Canonical representative under pairwise sign changes and permutations.

    Sign changes fix the sign of abc, so the result has no negative entry
    when abc >= 0 and exactly one (the largest in absolute value) otherwise.
    """
    p, q, r = sorted(abs(x) for x in t.coords)
    if t.a * t.b * t.c < 0:
        r = -r
    return t.with_coords(p, q, r)


def reduce(t: BigTriple) -> Tuple[BigTriple, List[Move]]:
    """Descend by Vieta flips to a local minimum of the coordinate sizes.

    Each round sorts by absolute value and flips the largest coordinate if
    that makes it strictly smaller in absolute value.  The sum of absolute
    values strictly drops each flip, so this terminates.
    """
    path: List[Move] = []
    cur = t
    while True:
        order = tuple(sorted(range(3), key=lambda i: abs(cur.coords[i])))
        if order != (0, 1, 2):
            mv = Move("permute", perm=order)
            path.append(mv)
            cur = apply_move(cur, mv)
        flipped = apply_move(cur, FLIP_Z)
        if abs(flipped.c) >= abs(cur.c):
            return cur, path
        path.append(FLIP_Z)
        cur = flipped


def flip_count(path: Sequence[Move]) -> int:
    return sum(1 for mv in path if mv.kind == "flip")


def _check_roots(k: int, roots: Iterable, form: str) -> List[BigTriple]:
    out = []
    for r in roots:
        coords = tuple(r.coords) if isinstance(r, BigTriple) else tuple(r)
        if level(*coords, form=form) != k:
            raise RootOffSurface(f"root {coords} is not on level {k}")
        out.append(BigTriple(*coords, k=k, form=form))
    return out


def enumerate_orbit(k: int, roots: Sequence, R: int, form: str = "kappa") -> List[BigTriple]:
    """Sign-normalised triples of sup-norm <= R reachable from ``roots``.

    Breadth-first over the three Vieta flips, children in X, Y, Z order, FIFO
    queue, so the returned list (discovery order) is reproducible.  Pruning
    at R is sound because reduction never increases the sup-norm.
    """
    seen = set()
    out = []
    queue: deque = deque()
    for r in _check_roots(k, roots, form):
        n = normalize_signs(r)
        if n.norm <= R and n.coords not in seen:
            seen.add(n.coords)
            out.append(n)
            queue.append(n)
    while queue:
        t = queue.popleft()
        for mv in (FLIP_X, FLIP_Y, FLIP_Z):
            child = normalize_signs(apply_move(t, mv))
            if child.norm > R or child.coords in seen:
                continue
            seen.add(child.coords)
            out.append(child)
            queue.append(child)
    log.debug("enumerate k=%d R=%d: %d triples", k, R, len(out))
    return out


def brute_force_box(k: int, N: int, form: str = "kappa") -> List[BigTriple]:
    """Every integer triple on level k with all |coordinates| <= N.

    For each (a, b) solve c^2 - (f ab) c + (a^2 + b^2 - k) = 0 over the
    integers.  Rows are vectorised with numpy while a^2 b^2 fits in int64.
    """
    if N > BRUTE_FORCE_LIMIT:
        raise BoxTooLarge(f"N = {N} exceeds {BRUTE_FORCE_LIMIT}")
    f = FORMS[form]
    found = set()
    bs = np.arange(-N, N + 1, dtype=np.int64)
    for a in range(-N, N + 1):
        if f * abs(a) * N < _INT64_SAFE:
            p = f * a * bs
            disc = p * p - 4 * (a * a + bs * bs - k)
            ok = disc >= 0
            root = np.zeros_like(disc)
            root[ok] = np.rint(np.sqrt(disc[ok].astype(np.float64))).astype(np.int64)
            # fix float rounding of the square root by one either way
            for adj in (-1, 1):
                cand = root + adj
                better = ok & (cand >= 0) & (cand * cand == disc)
                root[better] = cand[better]
            square = ok & (root * root == disc)
            for idx in np.nonzero(square)[0]:
                b = int(bs[idx])
                s = int(root[idx])
                pa = int(p[idx])
                for num in {pa + s, pa - s}:
                    if num % 2 == 0 and abs(num // 2) <= N:
                        found.add((a, b, num // 2))
        else:
            for b in range(-N, N + 1):
                pa = f * a * b
                disc = pa * pa - 4 * (a * a + b * b - k)
                if disc < 0:
                    continue
                s = math.isqrt(disc)
                if s * s != disc:
                    continue
                for num in {pa + s, pa - s}:
                    if num % 2 == 0 and abs(num // 2) <= N:
                        found.add((a, b, num // 2))
    return [BigTriple(*t, k=k, form=form) for t in sorted(found)]


def normalized_set(triples: Iterable[BigTriple]) -> set:
    return {normalize_signs(t).coords for t in triples}


def orbit_size(t: BigTriple) -> int:
    """Number of distinct ordered triples in the S3 x sign-change orbit."""
    images = set()
    for perm in permutations(t.coords):
        a, b, c = perm
        images.update({(a, b, c), (a, -b, -c), (-a, b, -c), (-a, -b, c)})
    return len(images)


@dataclass
class OrbitStats:
    radii: List[int]
    counts: List[int]
    fit_constant: Optional[float] = None

    def rows(self):
        return [{"R": r, "count": n} for r, n in zip(self.radii, self.counts)]


def fit_log_squared(radii: Sequence[int], counts: Sequence[int]) -> float:
    """Least-squares C in M(R) ~ C (log R)^2 (no intercept)."""
    L2 = np.array([math.log(r) ** 2 for r in radii])
    M = np.array(counts, dtype=float)
    return float(L2 @ M / (L2 @ L2))


def count(k: int, roots: Sequence, radii: Sequence[int], fit: bool = False,
          raw: bool = False, form: str = "kappa") -> OrbitStats:
    """M(R) for each R in the schedule; one enumeration at the largest R.

    ``raw`` counts ordered signed triples instead of normal forms.
    """
    radii = list(radii)
    if not radii:
        raise ValueError("empty radius schedule")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ValueError("radius schedule must be increasing")
    triples = enumerate_orbit(k, roots, radii[-1], form)
    norms = sorted((t.norm, orbit_size(t) if raw else 1) for t in triples)
    counts = []
    i, total = 0, 0
    for R in radii:
        while i < len(norms) and norms[i][0] <= R:
            total += norms[i][1]
            i += 1
        counts.append(total)
    stats = OrbitStats(radii, counts)
    if fit:
        stats.fit_constant = fit_log_squared(radii, counts)
    return stats


def markoff_correspondence(t: BigTriple, direction: str = "to_markoff") -> BigTriple:
    """Divide a kappa-form level-0 triple by 3 (or multiply back)."""
    if direction == "to_markoff":
        if t.form != "kappa" or t.k != 0:
            raise ValueError("to_markoff needs a kappa-form triple on level 0")
        if any(x % 3 for x in t.coords):
            raise NotDivisible(f"{t.coords} is not divisible by 3")
        return BigTriple(*(x // 3 for x in t.coords), k=0, form="markoff")
    if direction == "from_markoff":
        if t.form != "markoff" or t.k != 0:
            raise ValueError("from_markoff needs a Markoff-form triple on level 0")
        return BigTriple(*(3 * x for x in t.coords), k=0, form="kappa")
    raise ValueError(f"unknown direction {direction!r}")


MARKOFF_ROOT = BigTriple(3, 3, 3, k=0)


def clebsch_roots() -> List[BigTriple]:
    """The three Markoff-tree roots on level 20."""
    return [BigTriple(2, 0, -4, k=20), BigTriple(2, 1, -3, k=20), BigTriple(2, 2, -2, k=20)]


def parabolic_line_points(R: int) -> List[BigTriple]:
    """Normal forms of the points (2, t, t + 4) and (2, t, t - 4) with sup-norm <= R."""
    seen = set()
    for t in range(-R - 4, R + 5):
        for c in (t + 4, t - 4):
            if max(2, abs(t), abs(c)) <= R:
                seen.add(normalize_signs(BigTriple(2, t, c, k=20)).coords)
    return [BigTriple(*p, k=20) for p in sorted(seen)]

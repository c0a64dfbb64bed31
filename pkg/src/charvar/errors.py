"""Exception hierarchy.

Every error carries the process exit code the CLI maps it to, so the
command layer never needs its own lookup table.
"""


class CharVarError(Exception):
    exit_code = 2


# -- surface / triples (exit 2)
class OffSurface(CharVarError):
    """A triple does not satisfy its level equation."""


class RootOffSurface(OffSurface):
    pass


# -- zero input (exit 3)
class ZeroClass(CharVarError):
    exit_code = 3


class ZeroVector(CharVarError):
    exit_code = 3


# -- combinatorial preconditions (exit 4)
class BadInput(CharVarError, ValueError):
    exit_code = 4


class NotFareyNeighbors(BadInput):
    pass


class BaseSlope(BadInput):
    pass


class NotInCone(BadInput):
    pass


class DegenerateCone(BadInput):
    pass


class BadSector(BadInput):
    pass


# -- geometric preconditions (exit 5)
class EllipticProduct(CharVarError):
    exit_code = 5


class NoFiniteOrderCone(CharVarError):
    exit_code = 5


class UnclassifiableCharacter(CharVarError):
    """More than one elliptic boundary trace; outside the four-case theorem."""

    exit_code = 5


# -- arithmetic / resource guards (exit 6)
class NotDivisible(CharVarError):
    exit_code = 6


class BoxTooLarge(CharVarError):
    exit_code = 6


EXIT_CODES = {
    2: "triple or root off its level surface",
    3: "zero homology class or zero vector",
    4: "bad combinatorial input (not coprime, not Farey neighbours, outside cone, bad sector)",
    5: "geometric precondition failed (elliptic product, no finite-order cone, >1 cone point)",
    6: "arithmetic guard (not divisible by 3, brute-force box too large)",
}

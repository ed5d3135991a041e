"""Exceptions and resource caps shared across the package.

Every potentially unbounded enumeration (coset tables, subgroup orbits,
permutation-group closures) is guarded by a cap. Hitting a cap raises
:class:`CapExceeded`, which callers surface as a report finding rather than
a crash; a non-Hecke input is *detected* through these caps.
"""

import os

DEFAULT_COSET_CAP = 10**6
DEFAULT_ORBIT_CAP = 10**5
DEFAULT_CLOSURE_CAP = 10**5


def coset_cap() -> int:
    return int(os.environ.get("HECKEKIT_COSET_CAP", DEFAULT_COSET_CAP))


def orbit_cap() -> int:
    return int(os.environ.get("HECKEKIT_ORBIT_CAP", DEFAULT_ORBIT_CAP))


def closure_cap() -> int:
    return int(os.environ.get("HECKEKIT_CLOSURE_CAP", DEFAULT_CLOSURE_CAP))


class HeckekitError(Exception):
    """Base class for all package-specific errors."""


class CapExceeded(HeckekitError):
    """A resource cap was hit during an enumeration.

    Attributes:
        kind: which cap ("coset", "orbit", "closure").
        limit: the numeric cap in force.
        detail: human-readable context (the element or point involved).
    """

    def __init__(self, kind: str, limit: int, detail: str = ""):
        self.kind = kind
        self.limit = limit
        self.detail = detail
        msg = "%s cap of %d exceeded" % (kind, limit)
        if detail:
            msg += ": " + detail
        super().__init__(msg)


class DepthInsufficient(HeckekitError):
    """The recorded depth of a coset chain cannot certify the requested level."""

    def __init__(self, requested: int, reached: int, detail: str = ""):
        self.requested = requested
        self.reached = reached
        self.detail = detail
        msg = "depth insufficient: requested level %d, certified up to %d" % (
            requested,
            reached,
        )
        if detail:
            msg += " (" + detail + ")"
        super().__init__(msg)


class UndecidableInclusion(HeckekitError):
    """A filter-comparison query with no decision procedure for this host."""


class MissingWitness(HeckekitError):
    """A construction needs structural data the input pair does not carry."""

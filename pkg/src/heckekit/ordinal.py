"""Exact Cantor-normal-form arithmetic for ordinals below w^w.

An ordinal is a strictly-decreasing list of (exponent, coefficient) terms
denoting sum of w^e * c. That is all the rank calculus ever needs: the
tower bounds live below w^2, and the best derivable local-product bound is
w^2 + 1. Printing uses plain ASCII ("w^2*3 + w + 2") so report text can be
pasted back into the parser.
"""

from __future__ import annotations

import functools
import re
from typing import List, Sequence, Tuple

Term = Tuple[int, int]

_TERM_RE = re.compile(r"^(?:(\d+)|w(?:\^(\d+))?(?:\*(\d+))?)$")


@functools.total_ordering
class Ordinal:
    """An ordinal below w^w in Cantor normal form. Immutable."""

    __slots__ = ("terms",)

    def __init__(self, terms: Sequence[Term] = ()):
        cleaned: List[Term] = []
        for exp, coeff in terms:
            if exp < 0 or coeff < 0:
                raise ValueError("negative entries in CNF: (%r, %r)" % (exp, coeff))
            if coeff == 0:
                continue
            if cleaned and cleaned[-1][0] <= exp:
                raise ValueError("CNF exponents must strictly decrease: %r" % (terms,))
            cleaned.append((int(exp), int(coeff)))
        object.__setattr__(self, "terms", tuple(cleaned))

    def __setattr__(self, *_):
        raise AttributeError("Ordinal is immutable")

    # -- constructors -------------------------------------------------------

    @classmethod
    def from_int(cls, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("ordinals are non-negative")
        return cls(((0, n),) if n else ())

    @classmethod
    def omega(cls, exponent: int = 1, coefficient: int = 1) -> "Ordinal":
        return cls(((exponent, coefficient),))

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_transfinite(self) -> bool:
        return bool(self.terms) and self.terms[0][0] >= 1

    def natural_part(self) -> int:
        """The coefficient of w^0."""
        if self.terms and self.terms[-1][0] == 0:
            return self.terms[-1][1]
        return 0

    # -- arithmetic ----------------------------------------------------------

    def __add__(self, other: "Ordinal") -> "Ordinal":
        if not isinstance(other, Ordinal):
            return NotImplemented
        if other.is_zero():
            return self
        lead = other.terms[0][0]
        kept = [t for t in self.terms if t[0] > lead]
        merged = list(other.terms)
        for exp, coeff in self.terms:
            if exp == lead:
                merged[0] = (lead, coeff + merged[0][1])
        return Ordinal(tuple(kept) + tuple(merged))

    def times_nat(self, n: int) -> "Ordinal":
        if n < 0:
            raise ValueError("right factor must be a natural number")
        if n == 0 or self.is_zero():
            return Ordinal()
        head, rest = self.terms[0], self.terms[1:]
        return Ordinal(((head[0], head[1] * n),) + rest)

    def __mul__(self, n: int) -> "Ordinal":
        if not isinstance(n, int):
            return NotImplemented
        return self.times_nat(n)

    # -- order ----------------------------------------------------------------

    def __eq__(self, other) -> bool:
        return isinstance(other, Ordinal) and self.terms == other.terms

    def __lt__(self, other: "Ordinal") -> bool:
        if not isinstance(other, Ordinal):
            return NotImplemented
        return self.terms < other.terms

    def __hash__(self) -> int:
        return hash(("Ordinal", self.terms))

    # -- text -------------------------------------------------------------------

    def format(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms:
            if exp == 0:
                parts.append(str(coeff))
            elif exp == 1:
                parts.append("w" if coeff == 1 else "w*%d" % coeff)
            else:
                parts.append("w^%d" % exp if coeff == 1 else "w^%d*%d" % (exp, coeff))
        return " + ".join(parts)

    def __str__(self) -> str:
        return self.format()

    def __repr__(self) -> str:
        return "Ordinal(%r)" % (self.format(),)

    @classmethod
    def parse(cls, text: str) -> "Ordinal":
        """Inverse of :meth:`format`; accepts e.g. "w^2*3 + w + 5" and "0"."""
        stripped = text.strip()
        if stripped == "0":
            return cls()
        terms: List[Term] = []
        for chunk in stripped.split("+"):
            token = chunk.strip().replace(" ", "")
            m = _TERM_RE.match(token)
            if not m:
                raise ValueError("bad ordinal term: %r" % (chunk.strip(),))
            if m.group(1) is not None:
                terms.append((0, int(m.group(1))))
            else:
                exp = int(m.group(2)) if m.group(2) is not None else 1
                coeff = int(m.group(3)) if m.group(3) is not None else 1
                terms.append((exp, coeff))
        return cls(terms)


ZERO = Ordinal()
ONE = Ordinal.from_int(1)
OMEGA = Ordinal.omega()


def ord_add(a: Ordinal, b: Ordinal) -> Ordinal:
    return a + b


def ord_mul_nat(a: Ordinal, n: int) -> Ordinal:
    return a.times_nat(n)


def ord_cmp(a: Ordinal, b: Ordinal) -> int:
    """-1, 0 or 1; total order on CNF."""
    if a == b:
        return 0
    return -1 if a < b else 1

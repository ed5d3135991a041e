"""Filter bases of finite-index subgroups of the integers.

A base here is a family of subgroups ``mZ`` described by its set of
moduli.  Three shapes cover everything the comparison predicates need:

* ``fin``: an explicit finite, lcm-closed set of moduli,
* ``geo``: the geometric family ``{c * b**k : k >= 0}``,
* ``all``: every nonzero modulus.

All comparison questions about such families reduce to elementary
divisibility facts, so the predicates below are exact decision
procedures rather than sampled tests.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Optional, Tuple

__all__ = [
    "ZFilterBase",
    "fin_filter",
    "geo_filter",
    "all_filter",
    "close_under_lcm",
    "prime_factors",
    "valuation",
    "sup_valuation",
    "covers",
    "holds_factorization",
    "holds_injective_extra",
    "holds_discrete_extra",
    "holds_subset",
    "parse_zfilter",
]

INFINITE = math.inf

_KINDS = ("fin", "geo", "all")


def prime_factors(n: int) -> Dict[int, int]:
    """Factor a positive integer by trial division.

    Moduli in filter files are desk-scale (well under 2**40), so trial
    division is plenty.
    """
    if n < 1:
        raise ValueError("expected a positive integer, got %r" % (n,))
    out: Dict[int, int] = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def valuation(n: int, p: int) -> int:
    """Exponent of the prime p in n (n positive)."""
    if n < 1:
        raise ValueError("expected a positive integer, got %r" % (n,))
    e = 0
    while n % p == 0:
        n //= p
        e += 1
    return e


def radical(n: int) -> int:
    """Product of the distinct primes dividing n."""
    r = 1
    for p in prime_factors(n):
        r *= p
    return r


def close_under_lcm(moduli: Iterable[int]) -> Tuple[int, ...]:
    """Smallest lcm-closed superset of the given moduli, sorted."""
    seen = set()
    for m in moduli:
        if m < 1:
            raise ValueError("moduli must be positive, got %r" % (m,))
        seen.add(m)
    frontier = set(seen)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in seen:
                c = math.lcm(a, b)
                if c not in seen:
                    fresh.add(c)
        seen |= fresh
        frontier = fresh
    return tuple(sorted(seen))


@dataclass(frozen=True)
class ZFilterBase:
    """One of the three base shapes over the integer host.

    ``fin`` uses ``moduli``; ``geo`` uses ``coeff`` and ``ratio``;
    ``all`` uses nothing.  Construct through the factory helpers, which
    validate and normalize.
    """

    kind: str
    moduli: Tuple[int, ...] = ()
    coeff: int = 1
    ratio: int = 2

    def __post_init__(self) -> None:
        if self.kind not in _KINDS:
            raise ValueError("unknown filter kind %r" % (self.kind,))
        if self.kind == "fin":
            if not self.moduli:
                raise ValueError("a finite filter base needs at least one modulus")
            if tuple(sorted(set(self.moduli))) != self.moduli:
                raise ValueError("moduli must be sorted and duplicate-free")
            for a in self.moduli:
                for b in self.moduli:
                    if math.lcm(a, b) not in set(self.moduli):
                        raise ValueError(
                            "moduli are not lcm-closed: lcm(%d, %d) = %d is missing"
                            % (a, b, math.lcm(a, b))
                        )
        elif self.kind == "geo":
            if self.coeff < 1:
                raise ValueError("coefficient must be positive")
            if self.ratio < 2:
                raise ValueError("ratio must be at least 2 (use a finite base otherwise)")

    def describe(self) -> str:
        if self.kind == "fin":
            return "{" + ", ".join("%dZ" % m for m in self.moduli) + "}"
        if self.kind == "geo":
            if self.coeff == 1:
                return "{%d^k Z}" % self.ratio
            return "{%d*%d^k Z}" % (self.coeff, self.ratio)
        return "{nZ : n >= 1}"

    def sample_moduli(self, count: int) -> List[int]:
        """First few moduli, smallest first, for sampling-style tests."""
        if self.kind == "fin":
            return list(self.moduli[:count])
        if self.kind == "geo":
            return [self.coeff * self.ratio**k for k in range(count)]
        out = []
        acc = 1
        for n in range(1, count + 1):
            acc = math.lcm(acc, n)
            out.append(acc)
        return out

    def to_dict(self) -> Dict[str, object]:
        out: Dict[str, object] = {"host": "z", "kind": self.kind}
        if self.kind == "fin":
            out["moduli"] = list(self.moduli)
        elif self.kind == "geo":
            out["coeff"] = self.coeff
            out["ratio"] = self.ratio
        return out


def fin_filter(moduli: Iterable[int]) -> ZFilterBase:
    """Finite base from any modulus set (closed under lcm for you)."""
    return ZFilterBase(kind="fin", moduli=close_under_lcm(moduli))


def geo_filter(coeff: int, ratio: int) -> ZFilterBase:
    """Geometric base ``{coeff * ratio**k Z}``.

    A ratio of 1 degenerates to the single subgroup ``coeff Z`` and is
    returned as a finite base.
    """
    if ratio == 1:
        return fin_filter([coeff])
    return ZFilterBase(kind="geo", coeff=coeff, ratio=ratio)


def all_filter() -> ZFilterBase:
    """The base of every finite-index subgroup of Z."""
    return ZFilterBase(kind="all")


def sup_valuation(b: ZFilterBase, p: int):
    """Supremum of the p-adic valuation over the base's moduli.

    Returns an int or ``math.inf``.
    """
    if b.kind == "all":
        return INFINITE
    if b.kind == "geo":
        if b.ratio % p == 0:
            return INFINITE
        return valuation(b.coeff, p)
    return max(valuation(m, p) for m in b.moduli)


def covers(b: ZFilterBase, m: int) -> bool:
    """Whether some member of the base is contained in mZ.

    Containment of subgroups reverses divisibility: ``m1 Z <= m Z``
    means ``m | m1``, so this asks for a member modulus divisible by m.
    """
    if m < 1:
        raise ValueError("modulus must be positive")
    if b.kind == "all":
        return True
    if b.kind == "fin":
        return math.lcm(*b.moduli) % m == 0
    for p, e in prime_factors(m).items():
        if b.ratio % p != 0 and valuation(b.coeff, p) < e:
            return False
    return True


def _fresh_uncovered_modulus(b: ZFilterBase) -> int:
    """A modulus no member of a non-``all`` base can reach."""
    if b.kind == "fin":
        return math.lcm(*b.moduli) * 2 if math.lcm(*b.moduli) % 2 else math.lcm(*b.moduli) * 3
    # A prime outside coeff and ratio works; scan small candidates.
    used = set(prime_factors(b.coeff)) | set(prime_factors(b.ratio))
    q = 2
    while q in used or prime_factors(q) != {q: 1}:
        q += 1
    return q


def _uncovered_member(src: ZFilterBase, tgt: ZFilterBase) -> Optional[int]:
    """A member modulus of src that tgt does not cover, if one exists."""
    for m in src.sample_moduli(80):
        if not covers(tgt, m):
            return m
    return None


def holds_factorization(b1: ZFilterBase, b2: ZFilterBase) -> Tuple[bool, str]:
    """Whether every member of b2 contains the image of some member of b1.

    For the integer host the inclusion question collapses to: every
    modulus of b2 is covered by b1.
    """
    if b2.kind == "all":
        ok = b1.kind == "all"
        if ok:
            return True, "both bases are the full finite-index family"
        return False, "target base contains %dZ, which the source never refines" % (
            _fresh_uncovered_modulus(b1),
        )
    if b2.kind == "fin":
        worst = math.lcm(*b2.moduli)
        if covers(b1, worst):
            return True, "source covers the target's deepest modulus %d" % worst
        return False, "no source member is contained in %dZ" % worst
    # b2 geometric.
    if b1.kind == "all":
        return True, "source is the full finite-index family"
    if b1.kind == "fin":
        k = 0
        worst = math.lcm(*b1.moduli)
        while covers(b1, b2.coeff * b2.ratio**k):
            k += 1
            if b2.coeff * b2.ratio**k > worst * b2.ratio:
                raise AssertionError("finite base cannot cover a geometric tail")
        return False, "no source member is contained in %dZ" % (b2.coeff * b2.ratio**k,)
    bad = _uncovered_member(b2, b1)
    if bad is None:
        return True, "every target modulus %s is covered" % b2.describe()
    return False, "no source member is contained in %dZ" % bad


def holds_injective_extra(b1: ZFilterBase, b2: ZFilterBase) -> Tuple[bool, str]:
    """The intersection condition that upgrades a factorization to injective.

    Every member of b1 must be reachable as an intersection with members
    of b2, which over Z says: for each member m1 and each prime power
    ``p**e`` dividing m1 exactly, the target base admits p-valuation at
    least e.
    """
    if b1.kind == "all":
        ok = b2.kind == "all"
        note = "target also carries every modulus" if ok else "target misses some prime depth"
        return ok, note
    if b1.kind == "fin":
        worst = math.lcm(*b1.moduli)
        for p, e in prime_factors(worst).items():
            if sup_valuation(b2, p) < e:
                return False, "target cannot match %d**%d inside %d" % (p, e, worst)
        return True, "target matches every prime power in the source moduli"
    # b1 geometric: needs unbounded depth at primes of the ratio and
    # enough depth at primes of the coefficient.
    for p in prime_factors(b1.ratio):
        if sup_valuation(b2, p) is not INFINITE:
            return False, "target has bounded %d-valuation but source grows in %d" % (p, p)
    for p, e in prime_factors(b1.coeff).items():
        if sup_valuation(b2, p) < e:
            return False, "target cannot match %d**%d from the source coefficient" % (p, e)
    return True, "target matches every prime power in the source moduli"


def holds_discrete_extra(b1: ZFilterBase, b2: ZFilterBase) -> Tuple[bool, str]:
    """The trivial-kernel condition for a discrete-kernel factorization.

    The kernel is the intersection of all b2-members inside a fixed
    b1-member; it is trivial exactly when b2 reaches unbounded depth at
    every prime the source insists on growing.  A finite source base
    always has finite members, so its condition is vacuous.
    """
    if b1.kind == "fin":
        return True, "source base is finite, kernel condition is vacuous"
    if b1.kind == "geo":
        for p in prime_factors(b1.ratio):
            if sup_valuation(b2, p) is not INFINITE:
                return False, "target %d-valuation is bounded, kernel stays open" % p
        return True, "target depth is unbounded at every growing prime"
    ok = b2.kind == "all"
    note = "target carries every modulus" if ok else "target misses some prime entirely"
    return ok, note


def holds_subset(b1: ZFilterBase, b2: ZFilterBase) -> Tuple[bool, str]:
    """Whether the filter generated by b1 sits inside the one from b2.

    As filters of subgroups this asks that every member of b1 contain a
    member of b2, i.e. b2 covers each b1-modulus.
    """
    if b1.kind == "all":
        ok = b2.kind == "all"
        note = "bases agree" if ok else "a fresh prime modulus of the source is unreachable"
        return ok, note
    if b1.kind == "fin":
        worst = math.lcm(*b1.moduli)
        if covers(b2, worst):
            return True, "every source modulus is covered up to %d" % worst
        return False, "no target member refines %dZ" % worst
    if b2.kind == "fin":
        bad = _uncovered_member(b1, b2)
        return False, "no target member refines %dZ" % bad
    bad = _uncovered_member(b1, b2)
    if bad is None:
        return True, "every source modulus %s is covered" % b1.describe()
    return False, "no target member refines %dZ" % bad


_LINE_RE = re.compile(r"^\s*([a-z_]+)\s*=\s*(.+?)\s*$")


def parse_zfilter(text: str) -> ZFilterBase:
    """Read a Z-host filter description in ``key = value`` form.

    Recognized keys: ``host`` (must be ``z``), ``kind`` (fin, geo, all),
    ``moduli`` (comma list, fin), ``coeff`` and ``ratio`` (geo).
    Blank lines and ``#`` comments are skipped.
    """
    fields: Dict[str, str] = {}
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        m = _LINE_RE.match(line)
        if m is None:
            raise ValueError("unreadable filter line: %r" % raw)
        fields[m.group(1)] = m.group(2)
    host = fields.get("host", "z")
    if host != "z":
        raise ValueError("parse_zfilter handles host = z only, got %r" % host)
    kind = fields.get("kind")
    if kind == "fin":
        if "moduli" not in fields:
            raise ValueError("finite filter base needs a moduli list")
        moduli = [int(tok) for tok in fields["moduli"].replace(",", " ").split()]
        return fin_filter(moduli)
    if kind == "geo":
        coeff = int(fields.get("coeff", "1"))
        ratio = int(fields.get("ratio", fields.get("base", "2")))
        return geo_filter(coeff, ratio)
    if kind == "all":
        return all_filter()
    raise ValueError("filter kind must be fin, geo or all, got %r" % kind)

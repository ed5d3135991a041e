"""Finite-depth pictures of the coset-space completion of a pair.

Everything here works with the descending family ``W_n`` of pointwise
stabilizers of the radius-n Schreier ball.  An element of the completion
is only ever held as a coherent chain of cosets ``W_n g_n``; operations
on chains certify each output level by an explicit conjugation test
before trusting it, and report how deep the certificate reaches.

The same chain machinery runs over the integer host, where the level
subgroups are moduli from a filter base and every certificate is free
because the host is abelian.  That gives an exact reference lane for the
chain laws next to the sampled pair lane.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple, Union

from .actions import CosetBall, CosetId, act, orbit
from .errors import CapExceeded, DepthInsufficient, MissingWitness, UndecidableInclusion, closure_cap
from .pairs import PermutationHeckePair
from .words import GroupWord
from .zfilters import (
    ZFilterBase,
    holds_discrete_extra,
    holds_factorization,
    holds_injective_extra,
    holds_subset,
    parse_zfilter,
)

__all__ = [
    "LevelSubgroup",
    "schlichting_level_subgroup",
    "BallApproximant",
    "approximate",
    "approximant_coherent",
    "SchlichtingChainBasis",
    "ZChainBasis",
    "CosetChain",
    "make_chain",
    "chain_of",
    "chain_multiply",
    "chain_invert",
    "left_right_exchange",
    "LocalQuotient",
    "local_quotients",
    "SchlichtingSpec",
    "BelyaevSpec",
    "ZFilterSpec",
    "load_filter_spec",
    "exists_factorization",
    "exists_injective_factorization",
    "exists_discrete_kernel_factorization",
    "subset_factorization",
]


class LevelSubgroup:
    """The subgroup of U fixing every coset in the radius-n ball.

    Membership is decidable one word at a time; the group itself is only
    described, never enumerated.
    """

    def __init__(self, pair: PermutationHeckePair, level: int):
        if level < 0:
            raise ValueError("level must be nonnegative")
        self.pair = pair
        self.level = level
        pair.table.ensure_radius(level)
        self._ball = pair.ball(level)

    @property
    def ball(self) -> CosetBall:
        return self._ball

    def contains(self, word: GroupWord) -> bool:
        return all(self.pair.act(word, c) == c for c in self._ball.members)

    def conjugate_description(self) -> List[GroupWord]:
        """One representative word per ball coset.

        The subgroup equals the intersection of the coset stabilizers
        ``r U r^-1 cap U`` over these representatives r.
        """
        return [self._ball.rep_words[c] for c in self._ball.members]

    def describe(self) -> str:
        return "W_%d(%s), pointwise stabilizer of %d cosets" % (
            self.level,
            self.pair.name,
            len(self._ball.members),
        )

    def __repr__(self) -> str:
        return "<LevelSubgroup %s>" % self.describe()


def schlichting_level_subgroup(pair: PermutationHeckePair, n: int) -> LevelSubgroup:
    """The n-th member of the standard descending family for the pair."""
    return LevelSubgroup(pair, n)


@dataclass(frozen=True)
class BallApproximant:
    """What a group element does to the radius-n ball, and nothing more.

    ``mapping`` holds the pairs (source id, image id) whose image stays
    inside the ball; ``undefined`` lists the ball ids pushed outside.
    The partial map is always injective because it restricts a bijection.
    """

    level: int
    mapping: Tuple[Tuple[CosetId, CosetId], ...]
    undefined: Tuple[CosetId, ...]
    word_text: str = ""

    @property
    def defined_ids(self) -> Tuple[CosetId, ...]:
        return tuple(src for src, _ in self.mapping)

    def image_of(self, cid: CosetId) -> Optional[CosetId]:
        for src, dst in self.mapping:
            if src == cid:
                return dst
        return None

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "word": self.word_text,
            "mapping": [[int(a), int(b)] for a, b in self.mapping],
            "undefined": [int(c) for c in self.undefined],
        }


def approximate(pair: PermutationHeckePair, word: GroupWord, n: int) -> BallApproximant:
    """Restrict the action of a word to the radius-n ball.

    Ball cosets whose image leaves the ball land in ``undefined``; the
    rest form an injective partial bijection of ball ids.
    """
    ball = pair.ball(n)
    inside = ball.member_set
    mapping: List[Tuple[CosetId, CosetId]] = []
    undefined: List[CosetId] = []
    for c in ball.members:
        img = pair.act(word, c)
        if img in inside:
            mapping.append((c, img))
        else:
            undefined.append(c)
    images = [dst for _, dst in mapping]
    if len(set(images)) != len(images):
        raise AssertionError("a restricted bijection collided; the action is broken")
    return BallApproximant(
        level=n,
        mapping=tuple(mapping),
        undefined=tuple(undefined),
        word_text=word.format(),
    )


def approximant_coherent(deeper: BallApproximant, shallower: BallApproximant) -> bool:
    """Whether the deeper approximant extends the shallower one.

    Every pair the shallower map defines must appear, unchanged, in the
    deeper map.
    """
    if deeper.level < shallower.level:
        raise ValueError("first argument must be the deeper approximant")
    have = dict(deeper.mapping)
    return all(have.get(src) == dst for src, dst in shallower.mapping)


class SchlichtingChainBasis:
    """Chain host backed by a pair's ball-stabilizer family.

    Representatives are words; nothing is canonicalized, so equality of
    cosets is the membership test ``a b^-1 in W_n``.  Conjugation
    certificates check ball containment pointwise.
    """

    host_kind = "pair"

    def __init__(self, pair: PermutationHeckePair):
        self.pair = pair
        self._levels: Dict[int, LevelSubgroup] = {}

    def label(self) -> str:
        return "levels(%s)" % self.pair.name

    def level_subgroup(self, n: int) -> LevelSubgroup:
        if n not in self._levels:
            self._levels[n] = LevelSubgroup(self.pair, n)
        return self._levels[n]

    def same_basis(self, other) -> bool:
        return isinstance(other, SchlichtingChainBasis) and other.pair is self.pair

    def parse_rep(self, value) -> GroupWord:
        if isinstance(value, GroupWord):
            return value
        if isinstance(value, str):
            return self.pair.parse_word(value)
        raise TypeError("expected a word for a pair-hosted chain, got %r" % (value,))

    def identity_rep(self) -> GroupWord:
        return GroupWord.identity()

    def mul(self, a: GroupWord, b: GroupWord) -> GroupWord:
        return a * b

    def inv(self, a: GroupWord) -> GroupWord:
        return a.inverse()

    def normalize(self, level: int, rep: GroupWord) -> GroupWord:
        return rep

    def in_level(self, level: int, rep: GroupWord) -> bool:
        return self.level_subgroup(level).contains(rep)

    def coset_eq(self, level: int, a: GroupWord, b: GroupWord) -> bool:
        return self.in_level(level, a * b.inverse())

    def conj_ok(self, outer: int, inner: int, rep: GroupWord) -> bool:
        """Certify ``rep W_inner rep^-1 <= W_outer``.

        Equivalent, elementwise on the action, to: the inverse of rep
        maps the radius-outer ball into the radius-inner ball.
        """
        if inner < outer:
            return False
        back = rep.inverse()
        inner_ball = self.level_subgroup(inner).ball.member_set
        return all(
            self.pair.act(back, c) in inner_ball
            for c in self.level_subgroup(outer).ball.members
        )

    def format_rep(self, level: int, rep: GroupWord) -> str:
        return "W_%d %s" % (level, rep.format())


class ZChainBasis:
    """Chain host over the integers with moduli drawn from a filter base.

    Every level is an actual congruence, so representatives normalize to
    canonical residues and all certificates are exact.
    """

    host_kind = "z"

    def __init__(self, zbase: ZFilterBase):
        self.zbase = zbase
        self._moduli: List[int] = []

    def label(self) -> str:
        return "z %s" % self.zbase.describe()

    def modulus(self, n: int) -> int:
        while len(self._moduli) <= n:
            k = len(self._moduli)
            if self.zbase.kind == "geo":
                self._moduli.append(self.zbase.coeff * self.zbase.ratio**k)
            elif self.zbase.kind == "fin":
                self._moduli.append(math.lcm(*self.zbase.moduli))
            else:
                self._moduli.append(math.lcm(self._moduli[-1], k) if k else 1)
        return self._moduli[n]

    def same_basis(self, other) -> bool:
        return isinstance(other, ZChainBasis) and other.zbase == self.zbase

    def parse_rep(self, value) -> int:
        if isinstance(value, bool):
            raise TypeError("expected an integer, got a bool")
        if isinstance(value, int):
            return value
        if isinstance(value, str):
            return int(value)
        raise TypeError("expected an integer for an integer-hosted chain, got %r" % (value,))

    def identity_rep(self) -> int:
        return 0

    def mul(self, a: int, b: int) -> int:
        return a + b

    def inv(self, a: int) -> int:
        return -a

    def normalize(self, level: int, rep: int) -> int:
        return rep % self.modulus(level)

    def in_level(self, level: int, rep: int) -> bool:
        return rep % self.modulus(level) == 0

    def coset_eq(self, level: int, a: int, b: int) -> bool:
        return (a - b) % self.modulus(level) == 0

    def conj_ok(self, outer: int, inner: int, rep: int) -> bool:
        # Conjugation is trivial in an abelian host; the only demand is
        # that the inner level really refines the outer one.
        return inner >= outer and self.modulus(inner) % self.modulus(outer) == 0

    def format_rep(self, level: int, rep: int) -> str:
        return "%dZ + %d" % (self.modulus(level), rep % self.modulus(level))


ChainBasis = Union[SchlichtingChainBasis, ZChainBasis]


@dataclass(frozen=True)
class CosetChain:
    """A coherent chain of cosets, one per level from 0 up.

    ``side`` records whether the reps cut right cosets ``W_n g_n`` (the
    default) or left cosets ``g_n W_n``.  Coherence of a right chain
    means each deeper coset sits inside the previous one.
    """

    basis: ChainBasis
    reps: Tuple[object, ...]
    side: str = "right"
    label: str = ""

    @property
    def depth(self) -> int:
        return len(self.reps) - 1

    def rep_at(self, n: int):
        return self.reps[n]

    def describe_level(self, n: int) -> str:
        text = self.basis.format_rep(n, self.reps[n])
        if self.side == "left":
            return text + " (left)"
        return text

    def is_identity_to(self, n: int) -> bool:
        """Whether every recorded coset up to level n contains 1."""
        return all(self.basis.in_level(k, self.reps[k]) for k in range(min(n, self.depth) + 1))

    def to_dict(self) -> dict:
        return {
            "host": self.basis.label(),
            "side": self.side,
            "label": self.label,
            "depth": self.depth,
            "levels": [self.describe_level(n) for n in range(self.depth + 1)],
        }


def make_chain(basis: ChainBasis, reps: Sequence[object], side: str = "right", label: str = "") -> CosetChain:
    """Build a chain after checking levelwise coherence.

    Right chains need ``W_{n+1} g_{n+1} <= W_n g_n``, which is the coset
    equality of consecutive reps at the shallower level.  Left chains
    need the mirrored condition.
    """
    if side not in ("right", "left"):
        raise ValueError("side must be 'right' or 'left'")
    if not reps:
        raise ValueError("a chain needs at least the level-0 coset")
    reps = tuple(reps)
    for n in range(len(reps) - 1):
        if side == "right":
            ok = basis.coset_eq(n, reps[n + 1], reps[n])
        else:
            ok = basis.in_level(n, basis.mul(basis.inv(reps[n]), reps[n + 1]))
        if not ok:
            raise ValueError(
                "chain is incoherent between levels %d and %d (%s vs %s)"
                % (n, n + 1, basis.format_rep(n, reps[n]), basis.format_rep(n + 1, reps[n + 1]))
            )
    return CosetChain(basis=basis, reps=reps, side=side, label=label)


def _basis_for(host, cache_attr: str = "_chain_basis") -> ChainBasis:
    if isinstance(host, (SchlichtingChainBasis, ZChainBasis)):
        return host
    if isinstance(host, ZFilterBase):
        return ZChainBasis(host)
    if isinstance(host, ZFilterSpec):
        return ZChainBasis(host.zbase)
    if isinstance(host, SchlichtingSpec):
        host = host.pair
    if isinstance(host, PermutationHeckePair):
        basis = getattr(host, cache_attr, None)
        if basis is None:
            basis = SchlichtingChainBasis(host)
            setattr(host, cache_attr, basis)
        return basis
    raise MissingWitness(
        "no chain model for %r; chains need a coset table or an integer filter base" % (host,)
    )


def chain_of(host, value, depth: int) -> CosetChain:
    """The principal chain of a single element, exact at every level.

    ``host`` is a pair (value: word) or a filter base over the integers
    (value: int).  The element's own coset is recorded at each level, so
    coherence holds by construction and no certificates are needed.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    basis = _basis_for(host)
    rep = basis.parse_rep(value)
    reps = [basis.normalize(n, rep) for n in range(depth + 1)]
    label = basis.format_rep(0, rep) if basis.host_kind == "z" else rep.format()
    return CosetChain(basis=basis, reps=tuple(reps), side="right", label=label)


def _certified_levels(
    chain_depth: int,
    try_level,
) -> List[object]:
    """Collect reps level by level, stopping at the first uncertifiable one."""
    out: List[object] = []
    for n in range(chain_depth + 1):
        rep = try_level(n)
        if rep is None:
            if n == 0:
                raise DepthInsufficient(
                    requested=chain_depth,
                    reached=-1,
                    detail="not even the level-0 coset could be certified; deepen the inputs",
                )
            break
        out.append(rep)
    return out


def chain_multiply(f: CosetChain, g: CosetChain) -> CosetChain:
    """Product chain, certified level by level.

    The level-n coset of the product is computed from some recorded
    level m >= n at which the first factor conjugates ``W_m`` into
    ``W_n``; without such a certificate the level is not emitted.  The
    result's depth is the certified prefix, and a chain that cannot even
    produce level 0 raises instead.
    """
    basis = f.basis
    if not basis.same_basis(g.basis):
        raise ValueError("chains live over different hosts: %s vs %s" % (basis.label(), g.basis.label()))
    if f.side != "right" or g.side != "right":
        raise ValueError("chain multiplication is defined for right-coset chains")
    top = min(f.depth, g.depth)

    def try_level(n: int):
        for m in range(n, top + 1):
            if basis.conj_ok(n, m, f.reps[m]):
                return basis.normalize(n, basis.mul(f.reps[m], g.reps[m]))
        return None

    reps = _certified_levels(top, try_level)
    label = "(%s)*(%s)" % (f.label, g.label) if f.label or g.label else ""
    return make_chain(basis, reps, side="right", label=label)


def chain_invert(f: CosetChain) -> CosetChain:
    """Inverse chain, certified level by level.

    The level-n coset of the inverse needs a recorded level m >= n whose
    representative, inverted, conjugates ``W_m`` into ``W_n``.
    """
    basis = f.basis
    if f.side != "right":
        raise ValueError("chain inversion is defined for right-coset chains")

    def try_level(n: int):
        for m in range(n, f.depth + 1):
            inv_rep = basis.inv(f.reps[m])
            if basis.conj_ok(n, m, inv_rep):
                return basis.normalize(n, inv_rep)
        return None

    reps = _certified_levels(f.depth, try_level)
    label = "(%s)^-1" % f.label if f.label else ""
    return make_chain(basis, reps, side="right", label=label)


def left_right_exchange(chain: CosetChain) -> CosetChain:
    """Trade a right-coset chain for a left-coset chain meeting it.

    The deepest recorded representative lies in every coset of the
    chain, so the constant left chain through it meets each right coset.
    Over the integers this is the identity transformation because the
    canonical residues already agree.
    """
    if chain.side != "right":
        raise ValueError("input must be a right-coset chain")
    basis = chain.basis
    deep = chain.reps[-1]
    for n in range(chain.depth + 1):
        if not basis.coset_eq(n, deep, chain.reps[n]):
            raise AssertionError("incoherent input chain; deepest rep left a shallower coset")
    reps = tuple(basis.normalize(n, deep) for n in range(chain.depth + 1))
    return CosetChain(basis=basis, reps=reps, side="left", label=chain.label)


@dataclass(frozen=True)
class LocalQuotient:
    """The finite permutation group U induces on a ball's orbit closure."""

    level: int
    degree: int
    order: int
    generator_perms: Tuple[Tuple[int, ...], ...]
    point_ids: Tuple[CosetId, ...]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "degree": self.degree,
            "order": self.order,
            "generators": [list(p) for p in self.generator_perms],
        }


def _mulclose(perms: Sequence[Tuple[int, ...]], degree: int, cap: int) -> int:
    identity = tuple(range(degree))
    seen = {identity}
    frontier = [identity]
    gens = [p for p in perms if p != identity]
    while frontier:
        fresh = []
        for a in frontier:
            for g in gens:
                c = tuple(a[g[i]] for i in range(degree))
                if c not in seen:
                    seen.add(c)
                    if len(seen) > cap:
                        raise CapExceeded(
                            kind="closure",
                            limit=cap,
                            detail="local quotient group did not close",
                        )
                    fresh.append(c)
        frontier = fresh
    return len(seen)


def local_quotients(pair: PermutationHeckePair, n: int) -> LocalQuotient:
    """The finite group U acts as on the closure of the radius-n ball.

    The closure joins the U-orbits of every ball coset; the returned
    order is the size of the permutation group the stabilized generators
    induce there.
    """
    ball = pair.ball(n)
    points = [pair.table.point(c) for c in ball.members]
    u_words = pair.u_generator_words(depth=max(4, n), points=points)
    closed: List[CosetId] = []
    seen = set()
    for c in ball.members:
        if c in seen:
            continue
        for d in orbit(pair, u_words, c):
            if d not in seen:
                seen.add(d)
                closed.append(d)
    closed.sort()
    index_of = {c: i for i, c in enumerate(closed)}
    degree = len(closed)
    perms = []
    for w in u_words:
        images = []
        for c in closed:
            img = pair.act(w, c)
            if img not in index_of:
                raise AssertionError("orbit closure was not closed under a stabilized generator")
            images.append(index_of[img])
        perms.append(tuple(images))
    uniq = sorted(set(perms))
    order = _mulclose(uniq, degree, closure_cap())
    return LocalQuotient(
        level=n,
        degree=degree,
        order=order,
        generator_perms=tuple(uniq),
        point_ids=tuple(closed),
    )


@dataclass(eq=False)
class SchlichtingSpec:
    """The descending family of ball stabilizers of a pair, as a filter."""

    pair: PermutationHeckePair

    def label(self) -> str:
        return "levels(%s)" % self.pair.name


@dataclass(eq=False)
class BelyaevSpec:
    """The filter of all compact open subgroups commensurate with U.

    Intensional only: membership questions about it are answered by
    theory or not at all, never by enumeration.
    """

    pair: PermutationHeckePair

    def label(self) -> str:
        return "commensurates(%s)" % self.pair.name


@dataclass(frozen=True)
class ZFilterSpec:
    """A filter base over the integer host."""

    zbase: ZFilterBase

    def label(self) -> str:
        return "z %s" % self.zbase.describe()


FilterSpec = Union[SchlichtingSpec, BelyaevSpec, ZFilterSpec]


_CALL_RE = re.compile(r"^([a-z_]+)\(([^()]*)\)$")


def _parse_builtin_pair(text: str) -> PermutationHeckePair:
    from .catalog import CATALOG

    m = _CALL_RE.match(text.strip())
    if m is None or m.group(1) not in CATALOG:
        raise ValueError("unknown pair expression %r in filter file" % text)
    args = [int(tok) for tok in m.group(2).split(",") if tok.strip()]
    return CATALOG[m.group(1)](*args)


def load_filter_spec(text: str) -> FilterSpec:
    """Read a filter description in ``key = value`` form.

    ``host = z`` descriptions defer to the integer-base parser.  Pair
    hosts take ``pair = <builtin call>`` plus ``kind = levels`` for the
    ball-stabilizer family or ``kind = commensurates`` for the full
    commensurate filter.
    """
    stripped = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    fields = {}
    for line in stripped:
        if not line:
            continue
        if "=" not in line:
            raise ValueError("unreadable filter line: %r" % line)
        key, _, val = line.partition("=")
        fields[key.strip()] = val.strip()
    host = fields.get("host", "z")
    if host == "z":
        return ZFilterSpec(zbase=parse_zfilter(text))
    if host == "pair":
        if "pair" not in fields:
            raise ValueError("pair-hosted filter file needs a 'pair =' line")
        pair = _parse_builtin_pair(fields["pair"])
        kind = fields.get("kind", "levels")
        if kind in ("levels", "schlichting"):
            return SchlichtingSpec(pair=pair)
        if kind in ("commensurates", "belyaev"):
            return BelyaevSpec(pair=pair)
        raise ValueError("pair-hosted filter kind must be levels or commensurates")
    raise ValueError("filter host must be z or pair, got %r" % host)


def _as_spec(value) -> FilterSpec:
    if isinstance(value, (SchlichtingSpec, BelyaevSpec, ZFilterSpec)):
        return value
    if isinstance(value, ZFilterBase):
        return ZFilterSpec(zbase=value)
    if isinstance(value, PermutationHeckePair):
        return SchlichtingSpec(pair=value)
    raise TypeError("expected a filter spec, filter base, or pair, got %r" % (value,))


def _report(predicate: str, lhs: FilterSpec, rhs: FilterSpec, result: bool, note: str, conditions: Optional[dict] = None) -> dict:
    out = {
        "predicate": predicate,
        "lhs": lhs.label(),
        "rhs": rhs.label(),
        "result": result,
    }
    out["witness" if result else "counterexample"] = note
    if conditions:
        out["conditions"] = conditions
    return out


def _same_pair(a: FilterSpec, b: FilterSpec) -> bool:
    return getattr(a, "pair", None) is getattr(b, "pair", None) is not None and a.pair is b.pair


def _undecidable(predicate: str, lhs: FilterSpec, rhs: FilterSpec) -> UndecidableInclusion:
    return UndecidableInclusion(
        "%s(%s, %s) has no decision procedure on these hosts" % (predicate, lhs.label(), rhs.label())
    )


def exists_factorization(lhs, rhs) -> dict:
    """Whether every member of rhs contains some member of lhs.

    Exact over the integer host.  On pair hosts the only decided cases
    are a filter against itself and the commensurate filter against the
    level family it contains.
    """
    lhs, rhs = _as_spec(lhs), _as_spec(rhs)
    name = "exists_factorization"
    if isinstance(lhs, ZFilterSpec) and isinstance(rhs, ZFilterSpec):
        ok, note = holds_factorization(lhs.zbase, rhs.zbase)
        return _report(name, lhs, rhs, ok, note)
    if type(lhs) is type(rhs) and _same_pair(lhs, rhs):
        return _report(name, lhs, rhs, True, "a filter factors through itself")
    if isinstance(lhs, BelyaevSpec) and isinstance(rhs, SchlichtingSpec) and _same_pair(lhs, rhs):
        return _report(
            name, lhs, rhs, True,
            "each level subgroup is itself commensurate with U, so it refines itself",
        )
    raise _undecidable(name, lhs, rhs)


def exists_injective_factorization(lhs, rhs) -> dict:
    """Factorization whose connecting maps can be chosen injective.

    Over the integers this augments the factorization requirement with
    an exact intersection condition on prime depths.
    """
    lhs, rhs = _as_spec(lhs), _as_spec(rhs)
    name = "exists_injective_factorization"
    if isinstance(lhs, ZFilterSpec) and isinstance(rhs, ZFilterSpec):
        fact_ok, fact_note = holds_factorization(lhs.zbase, rhs.zbase)
        extra_ok, extra_note = holds_injective_extra(lhs.zbase, rhs.zbase)
        ok = fact_ok and extra_ok
        note = fact_note if not fact_ok else extra_note
        return _report(
            name, lhs, rhs, ok, note,
            conditions={"factorization": fact_ok, "intersection": extra_ok},
        )
    if type(lhs) is type(rhs) and _same_pair(lhs, rhs):
        return _report(name, lhs, rhs, True, "the identity maps are injective")
    raise _undecidable(name, lhs, rhs)


def exists_discrete_kernel_factorization(lhs, rhs) -> dict:
    """Factorization killing no open subgroup.

    Over the integers the kernel condition asks the target base for
    unbounded depth at every prime the source grows in.
    """
    lhs, rhs = _as_spec(lhs), _as_spec(rhs)
    name = "exists_discrete_kernel_factorization"
    if isinstance(lhs, ZFilterSpec) and isinstance(rhs, ZFilterSpec):
        fact_ok, fact_note = holds_factorization(lhs.zbase, rhs.zbase)
        extra_ok, extra_note = holds_discrete_extra(lhs.zbase, rhs.zbase)
        ok = fact_ok and extra_ok
        note = fact_note if not fact_ok else extra_note
        return _report(
            name, lhs, rhs, ok, note,
            conditions={"factorization": fact_ok, "discrete_kernel": extra_ok},
        )
    if type(lhs) is type(rhs) and _same_pair(lhs, rhs):
        return _report(name, lhs, rhs, True, "the identity maps have trivial kernel")
    raise _undecidable(name, lhs, rhs)


def subset_factorization(lhs, rhs) -> dict:
    """Whether the filter generated by lhs lies inside the one from rhs.

    The one decided pair-host inclusion is the level family inside the
    commensurate filter of the same pair, which holds by construction.
    """
    lhs, rhs = _as_spec(lhs), _as_spec(rhs)
    name = "subset_factorization"
    if isinstance(lhs, ZFilterSpec) and isinstance(rhs, ZFilterSpec):
        ok, note = holds_subset(lhs.zbase, rhs.zbase)
        return _report(name, lhs, rhs, ok, note)
    if type(lhs) is type(rhs) and _same_pair(lhs, rhs):
        return _report(name, lhs, rhs, True, "a filter is a subset of itself")
    if isinstance(lhs, SchlichtingSpec) and isinstance(rhs, BelyaevSpec) and _same_pair(lhs, rhs):
        return _report(
            name, lhs, rhs, True,
            "every level subgroup is compact open and commensurate with U by construction",
        )
    raise _undecidable(name, lhs, rhs)

"""Hecke pairs presented by generators, an action oracle and metadata.

A :class:`PermutationHeckePair` is the tuple (G, U, X) in working clothes:
G given by named generators, X by the oracle's coset encodings with the
base coset representing U, and U itself by generator words that fix the
base. Whether the pair genuinely is a Hecke pair (every commensuration
index finite) is never assumed; it is checked, within caps, by
:func:`check_hecke_axioms`.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Dict, Hashable, List, Optional, Sequence, Tuple

from . import actions
from .actions import ActionOracle, CosetBall, CosetId, CosetTable
from .errors import CapExceeded, coset_cap, orbit_cap, closure_cap
from .words import Generator, GroupWord


@dataclass
class PairMetadata:
    """Structural flags with provenance.

    Three-valued: True/False when known, None when not. ``provenance`` maps
    flag names to a short origin note ("by-construction", "declared",
    "propagated: ..."). Nothing here is ever verified from first principles
    for infinite groups; the flags feed the rank rules, which re-check their
    presence, not their truth.
    """

    transitive: Optional[bool] = None
    proper: Optional[bool] = None
    finitely_generated: Optional[bool] = None
    elementary: Optional[bool] = None
    residually_discrete: Optional[bool] = None
    perfect: Optional[bool] = None
    u_infinite: Optional[bool] = None
    fg_witness: Tuple[str, ...] = ()
    construction: str = ""
    provenance: Dict[str, str] = field(default_factory=dict)
    notes: Tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "transitive": self.transitive,
            "proper": self.proper,
            "finitely_generated": self.finitely_generated,
            "elementary": self.elementary,
            "residually_discrete": self.residually_discrete,
            "perfect": self.perfect,
            "u_infinite": self.u_infinite,
            "fg_witness": list(self.fg_witness),
            "construction": self.construction,
            "provenance": dict(sorted(self.provenance.items())),
            "notes": list(self.notes),
        }


class PermutationHeckePair:
    """A group-with-commensurated-subgroup acting on its coset space."""

    def __init__(
        self,
        name: str,
        generators: Sequence[Generator],
        u_generators: Sequence[GroupWord],
        oracle: ActionOracle,
        metadata: Optional[PairMetadata] = None,
        element_key: Optional[Callable[[GroupWord], Hashable]] = None,
        u_family: Optional[Callable[..., List[GroupWord]]] = None,
        stabilizer_family: Optional[Callable[..., List[GroupWord]]] = None,
    ):
        self.name = name
        self.generators = list(generators)
        self.u_generators = list(u_generators)
        self.oracle = oracle
        self.metadata = metadata if metadata is not None else PairMetadata()
        self._element_key = element_key
        self._u_family = u_family
        self._stabilizer_family = stabilizer_family
        self.caps = {"coset": coset_cap(), "orbit": orbit_cap(), "closure": closure_cap()}
        self._table: Optional[CosetTable] = None

    # -- table plumbing ----------------------------------------------------

    @property
    def gen_names(self) -> Tuple[str, ...]:
        return tuple(g.name for g in self.generators)

    @property
    def table(self) -> CosetTable:
        if self._table is None:
            self._table = CosetTable(self.oracle, self.gen_names, self.caps["coset"])
        return self._table

    @property
    def base(self) -> CosetId:
        return 0

    def act(self, word: GroupWord, cid: CosetId = 0) -> CosetId:
        return actions.act(self, word, cid)

    def ball(self, radius: int) -> CosetBall:
        return actions.enumerate_ball(self, radius)

    def parse_word(self, text: str) -> GroupWord:
        return GroupWord.parse(text, alphabet=self.gen_names)

    # -- U and element capabilities ---------------------------------------

    def u_generator_words(self, depth: int, points: Optional[Sequence[Hashable]] = None) -> List[GroupWord]:
        """Words generating (a truncation of) U adequate for the given points.

        For pairs whose U is finitely generated this is just the stored
        list. Pairs with infinitely generated U (lamplighter, wreath) supply
        a family callable whose truncation is exact for orbits seeded at the
        given point encodings; see the catalog and constructor modules.
        """
        if self._u_family is not None:
            return self._u_family(depth, points)
        return list(self.u_generators)

    def stabilizer_words(self, point: Hashable, depth: int) -> Optional[List[GroupWord]]:
        """Generators of Stab_U(point), truncated at depth; None if unknown."""
        if self._stabilizer_family is None:
            return None
        return self._stabilizer_family(point, depth)

    def element_key(self, word: GroupWord) -> Hashable:
        """Exact word-problem key: equal keys iff equal group elements.

        Falls back to the free word itself when the pair has no key solver,
        which is sound for the free catalog pair and conservative elsewhere.
        """
        if self._element_key is not None:
            return self._element_key(word)
        return word.letters

    def elements_equal(self, v: GroupWord, w: GroupWord) -> bool:
        return self.element_key(v) == self.element_key(w)

    def in_u(self, word: GroupWord) -> bool:
        """Membership in U, decided as "fixes the base coset".

        Exact for every pair in this package: U is by construction the full
        stabilizer of the base coset in the modelled action.
        """
        return self.act(word, self.base) == self.base

    def __repr__(self) -> str:
        return "<PermutationHeckePair %s>" % self.name


@dataclass
class CommReport:
    """Both commensuration indices of one element, or the cap that stopped us."""

    element: str
    idx_left: Optional[int]
    idx_right: Optional[int]
    status: str  # "ok" | "cap-exceeded"
    depth: int
    note: str = ""

    @property
    def finite(self) -> bool:
        return self.status == "ok"

    def as_pair(self) -> Tuple[Optional[int], Optional[int]]:
        return (self.idx_left, self.idx_right)

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "idx_left": self.idx_left,
            "idx_right": self.idx_right,
            "status": self.status,
            "depth": self.depth,
            "note": self.note,
        }


def commensuration_index(pair: PermutationHeckePair, g: GroupWord, depth: int = 4) -> CommReport:
    """The pair (|U : U cap gUg^-1|, |gUg^-1 : U cap gUg^-1|).

    Left index: size of the U-orbit of the coset gU (its stabilizer in U is
    exactly U cap gUg^-1). Right index: size of the gUg^-1-orbit of the base
    coset, computed with syntactically conjugated U-generator words. Both are
    exact orbit counts; an orbit cap turns into status "cap-exceeded".
    """
    try:
        target = pair.act(g, pair.base)
        target_point = pair.table.point(target)
        u_words = pair.u_generator_words(depth, points=[target_point])
        left = len(actions.orbit(pair, u_words, target))

        base_point = pair.table.point(pair.base)
        conj_words = [u.conjugate_by(g) for u in pair.u_generator_words(depth, points=[base_point])]
        right = len(actions.orbit(pair, conj_words, pair.base))
        return CommReport(
            element=g.format(), idx_left=left, idx_right=right, status="ok", depth=depth
        )
    except CapExceeded as exc:
        return CommReport(
            element=g.format(),
            idx_left=None,
            idx_right=None,
            status="cap-exceeded",
            depth=depth,
            note=str(exc),
        )


@dataclass
class AxiomCheck:
    name: str
    status: str  # "pass" | "fail" | "unknown"
    detail: str = ""

    def to_dict(self) -> dict:
        return {"name": self.name, "status": self.status, "detail": self.detail}


@dataclass
class AxiomReport:
    pair_name: str
    depth: int
    checks: List[AxiomCheck] = field(default_factory=list)
    comm_reports: List[CommReport] = field(default_factory=list)

    @property
    def status(self) -> str:
        if any(c.status == "fail" for c in self.checks):
            return "fail"
        if any(c.status == "unknown" for c in self.checks):
            return "unknown"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    def failures(self) -> List[AxiomCheck]:
        return [c for c in self.checks if c.status == "fail"]

    def to_dict(self) -> dict:
        return {
            "pair": self.pair_name,
            "depth": self.depth,
            "status": self.status,
            "checks": [c.to_dict() for c in self.checks],
            "commensuration": [r.to_dict() for r in self.comm_reports],
        }


def check_hecke_axioms(
    pair: PermutationHeckePair,
    depth: int = 4,
    samples: int = 12,
    seed: int = 0,
) -> AxiomReport:
    """Sampled verification that (G, U, X) is a proper permutation Hecke pair.

    Checks, each within caps:
      * every G-generator and inverse has both commensuration indices finite;
      * U-orbits of sampled ball cosets are finite;
      * U-generator words fix the base coset;
      * properness witnesses: each sampled nontrivial U-word moves some coset
        inside a ball (the trivial-core condition, existentially sampled).

    A cap hit is a *fail* entry naming the offending element; that is the
    designed behaviour on non-Hecke inputs such as (F2, <a>).
    """
    report = AxiomReport(pair_name=pair.name, depth=depth)
    rng = random.Random(seed)

    for gen in pair.generators:
        for sign in (1, -1):
            g = GroupWord.gen(gen.name, sign)
            comm = commensuration_index(pair, g, depth)
            report.comm_reports.append(comm)
            if comm.finite:
                report.checks.append(
                    AxiomCheck(
                        "commensuration(%s)" % g.format(),
                        "pass",
                        "indices (%d, %d)" % (comm.idx_left, comm.idx_right),
                    )
                )
            else:
                report.checks.append(
                    AxiomCheck("commensuration(%s)" % g.format(), "fail", comm.note)
                )

    try:
        ball = pair.ball(depth)
        members = list(ball.members)
        chosen = members if len(members) <= samples else rng.sample(members, samples)
        worst = 0
        for cid in sorted(chosen):
            point = pair.table.point(cid)
            u_words = pair.u_generator_words(depth, points=[point])
            size = len(actions.orbit(pair, u_words, cid))
            worst = max(worst, size)
        report.checks.append(
            AxiomCheck(
                "finite-u-orbits",
                "pass",
                "%d sampled cosets, largest U-orbit %d" % (len(chosen), worst),
            )
        )
    except CapExceeded as exc:
        report.checks.append(AxiomCheck("finite-u-orbits", "fail", str(exc)))

    u_words = pair.u_generator_words(depth)
    bad = [u for u in u_words if pair.act(u, pair.base) != pair.base]
    if bad:
        report.checks.append(
            AxiomCheck(
                "u-fixes-base",
                "fail",
                "words not fixing the base coset: %s" % ", ".join(w.format() for w in bad),
            )
        )
    else:
        report.checks.append(
            AxiomCheck("u-fixes-base", "pass", "%d U-generator words" % len(u_words))
        )

    if not u_words:
        report.checks.append(
            AxiomCheck("proper-core", "pass", "U is trivial, the core is trivially trivial")
        )
    else:
        search = pair.ball(depth + 1)
        witnesses = []
        missing = []
        for u in u_words:
            if u.is_identity():
                continue
            moved = None
            for cid in search.members:
                if pair.act(u, cid) != cid:
                    moved = cid
                    break
            if moved is None:
                missing.append(u.format())
            else:
                witnesses.append((u.format(), moved))
        if missing:
            report.checks.append(
                AxiomCheck(
                    "proper-core",
                    "unknown",
                    "no moved coset found in ball %d for: %s"
                    % (depth + 1, ", ".join(missing)),
                )
            )
        else:
            sample = ", ".join("%s moves coset %d" % (w, c) for w, c in witnesses[:3])
            report.checks.append(AxiomCheck("proper-core", "pass", sample))

    return report


@dataclass
class Verdict:
    """A tri-state answer with its reason."""

    value: Optional[bool]
    reason: str

    def to_dict(self) -> dict:
        return {"value": self.value, "reason": self.reason}


def is_sigma_compact(pair: PermutationHeckePair) -> Verdict:
    """Countable pairs give sigma-compact completions; all our pairs qualify.

    G is generated by finitely many named generators, hence countable, and
    the completion is covered by countably many cosets of the compact open
    image of U.
    """
    return Verdict(
        True,
        "finitely many generators, so G is countable and the completion is a "
        "countable union of compact open cosets",
    )


def is_compactly_generated(pair: PermutationHeckePair) -> Verdict:
    md = pair.metadata
    if md.finitely_generated is None:
        return Verdict(None, "no finite-generation flag recorded for (G, U)")
    if md.finitely_generated:
        witness = ", ".join(md.fg_witness) if md.fg_witness else "recorded generators"
        return Verdict(
            True,
            "image of U is compact open and G = <U, %s>, so the completion is "
            "compactly generated" % witness,
        )
    return Verdict(False, "pair recorded as not finitely generated over U")

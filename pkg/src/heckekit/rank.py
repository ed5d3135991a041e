"""A small proof calculus for decomposition-rank bounds.

Rank values are only ever tracked as bounds.  A ``RankFact`` asserts one
property of one subject; derived facts carry the rule that produced them
and the premise facts it consumed, so a finished certificate is a
well-founded derivation tree the checker can replay from its leaves.

Subjects are plain construction expressions ("hnn(infwreath(p0))"), not
live pair objects: the calculus reasons about what was built, and the
constructors can realize the small instances on demand.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field, replace
from typing import Callable, Dict, List, Optional, Sequence, Tuple

from .errors import HeckekitError
from .ordinal import OMEGA, ONE, Ordinal, ord_add

__all__ = [
    "FACT_KINDS",
    "RankFact",
    "HypothesisMissing",
    "assume",
    "apply_rule",
    "apply_rule_all",
    "rule_names",
    "RankCertificate",
    "build_gn_tower",
    "best_known_bound",
]

FACT_KINDS = (
    "lower_bound",
    "upper_bound",
    "elementary",
    "perfect",
    "transitive",
    "finitely_generated",
    "infinite_U",
    "residually_discrete",
    # Bookkeeping kinds consumed by specific rules.
    "centerless",
    "proper",
    "infinite",
    "finite_nontrivial_u",
    "free_transitive_action",
    "lz_decomposition",
)

ASSUMPTION = "assume"


class HypothesisMissing(HeckekitError):
    """A rule was applied without one of its hypothesis facts."""


@dataclass(frozen=True)
class RankFact:
    """One recorded property of one subject, with its justification.

    Facts with rule ``assume`` are leaves (declared with provenance in
    the note); every other fact cites a rule and the premise facts it
    consumed.
    """

    subject: str
    kind: str
    value: Optional[Ordinal] = None
    rule: str = ASSUMPTION
    premises: Tuple["RankFact", ...] = ()
    note: str = ""

    def __post_init__(self) -> None:
        if self.kind not in FACT_KINDS:
            raise ValueError("unknown fact kind %r" % (self.kind,))
        if self.kind in ("lower_bound", "upper_bound") and self.value is None:
            raise ValueError("a bound fact needs an ordinal value")

    def statement(self) -> str:
        if self.kind == "lower_bound":
            return "xi(%s) >= %s" % (self.subject, self.value.format())
        if self.kind == "upper_bound":
            return "xi(%s) <= %s" % (self.subject, self.value.format())
        return "%s(%s)" % (self.kind, self.subject)

    def to_dict(self) -> dict:
        out: dict = {"fact": self.statement(), "rule": self.rule}
        if self.note:
            out["note"] = self.note
        out["premises"] = [p.to_dict() for p in self.premises]
        return out

    def __repr__(self) -> str:
        return "<RankFact %s by %s>" % (self.statement(), self.rule)


def assume(subject: str, kind: str, value: Optional[Ordinal] = None, note: str = "") -> RankFact:
    """Declare a leaf fact with its provenance in the note."""
    return RankFact(subject=subject, kind=kind, value=value, rule=ASSUMPTION, note=note)


def _need(premises: Sequence[RankFact], kind: str, rule: str, subject: Optional[str] = None) -> RankFact:
    """Find the premise of the given kind (and subject), or complain.

    The error message names the absent fact, which is the whole point of
    guarded rules.
    """
    for f in premises:
        if f.kind == kind and (subject is None or f.subject == subject):
            return f
    where = " for %s" % subject if subject else ""
    raise HypothesisMissing("hypothesis-missing: %s needs a %s fact%s" % (rule, kind, where))


def _rule_extension(premises: Sequence[RankFact]) -> List[RankFact]:
    """An extension is bounded by the sum of the bounds of its layers.

    Premises: upper bounds for the closed normal layer and the quotient,
    in that order.
    """
    uppers = [f for f in premises if f.kind == "upper_bound"]
    if len(uppers) < 2:
        raise HypothesisMissing(
            "hypothesis-missing: rule_extension needs upper_bound facts for both layers"
        )
    bottom, quotient = uppers[0], uppers[1]
    subject = "extension(%s, %s)" % (bottom.subject, quotient.subject)
    return [
        RankFact(
            subject=subject,
            kind="upper_bound",
            value=ord_add(bottom.value, quotient.value),
            rule="rule_extension",
            premises=tuple(premises),
        )
    ]


def _rule_wreath_increase(premises: Sequence[RankFact]) -> List[RankFact]:
    """One wreath layer on a perfect bottom raises the bound by one.

    Premises: lower_bound, perfect, finitely_generated for the bottom
    pair; transitive and infinite_U for the top pair.
    """
    rule = "rule_wreath_increase"
    low = _need(premises, "lower_bound", rule)
    bottom = low.subject
    _need(premises, "perfect", rule, bottom)
    _need(premises, "finitely_generated", rule, bottom)
    top_fact = _need(premises, "infinite_U", rule)
    _need(premises, "transitive", rule, top_fact.subject)
    subject = "wreath(%s, %s)" % (bottom, top_fact.subject)
    return [
        RankFact(
            subject=subject,
            kind="lower_bound",
            value=ord_add(low.value, ONE),
            rule=rule,
            premises=tuple(premises),
        )
    ]


def _rule_infinite_wreath(premises: Sequence[RankFact]) -> List[RankFact]:
    """The infinitely iterated wreath adds omega + 1 to the bound.

    Premises, all about the same pair: lower_bound, finitely_generated,
    transitive, centerless, perfect.
    """
    rule = "rule_infinite_wreath"
    low = _need(premises, "lower_bound", rule)
    s = low.subject
    for kind in ("finitely_generated", "transitive", "centerless", "perfect"):
        _need(premises, kind, rule, s)
    value = ord_add(ord_add(low.value, OMEGA), ONE)
    return [
        RankFact(
            subject="infwreath(%s)" % s,
            kind="lower_bound",
            value=value,
            rule=rule,
            premises=tuple(premises),
        )
    ]


def _rule_wreath_hnn(premises: Sequence[RankFact]) -> List[RankFact]:
    """Iterated wreath followed by the shift extension adds omega + 2.

    Premises, all about the same pair: lower_bound, finitely_generated,
    transitive, elementary, perfect.
    """
    rule = "rule_wreath_hnn"
    low = _need(premises, "lower_bound", rule)
    s = low.subject
    for kind in ("finitely_generated", "transitive", "elementary", "perfect"):
        _need(premises, kind, rule, s)
    value = ord_add(ord_add(low.value, OMEGA), Ordinal.from_int(2))
    return [
        RankFact(
            subject="hnn(infwreath(%s))" % s,
            kind="lower_bound",
            value=value,
            rule=rule,
            premises=tuple(premises),
        )
    ]


def _rule_completion_upper(premises: Sequence[RankFact]) -> List[RankFact]:
    """The completed group is bounded by 2 plus the pair's bound."""
    rule = "rule_completion_upper"
    up = _need(premises, "upper_bound", rule)
    return [
        RankFact(
            subject="completion(%s)" % up.subject,
            kind="upper_bound",
            value=ord_add(Ordinal.from_int(2), up.value),
            rule=rule,
            premises=tuple(premises),
        )
    ]


def _rule_residually_discrete(premises: Sequence[RankFact]) -> List[RankFact]:
    """Residually discrete pairs are bounded by 2."""
    rule = "rule_residually_discrete"
    rd = _need(premises, "residually_discrete", rule)
    return [
        RankFact(
            subject=rd.subject,
            kind="upper_bound",
            value=Ordinal.from_int(2),
            rule=rule,
            premises=tuple(premises),
        )
    ]


def _rule_sup_exhaustion(premises: Sequence[RankFact]) -> List[RankFact]:
    """Exhausting sections give sup of their bounds, plus one.

    An axiom schema for finite families: the conclusion takes the
    largest premise bound and adds one.  Used only to justify suprema
    inside certificates.
    """
    rule = "rule_sup_exhaustion"
    lows = [f for f in premises if f.kind == "lower_bound"]
    if not lows:
        raise HypothesisMissing(
            "hypothesis-missing: rule_sup_exhaustion needs lower_bound facts for the sections"
        )
    best = max(lows, key=lambda f: f.value)
    subject = "exhaustion(%s)" % "; ".join(f.subject for f in lows)
    return [
        RankFact(
            subject=subject,
            kind="lower_bound",
            value=ord_add(best.value, ONE),
            rule=rule,
            premises=tuple(premises),
        )
    ]


def _rule_perfectize(premises: Sequence[RankFact]) -> List[RankFact]:
    """Perfectization transfers a lower bound and cleans up the pair.

    Premises: a lower_bound and an lz_decomposition fact for the same
    subject.  The bound transfers because the input embeds in the
    output; the construction also delivers perfect, finitely generated,
    proper and elementary, recorded as companion facts.
    """
    rule = "rule_perfectize"
    low = _need(premises, "lower_bound", rule)
    s = low.subject
    _need(premises, "lz_decomposition", rule, s)
    subject = "perfectize(%s)" % s
    prem = tuple(premises)
    primary = RankFact(
        subject=subject, kind="lower_bound", value=low.value, rule=rule, premises=prem
    )
    companions = [
        RankFact(subject=subject, kind=kind, rule=rule, premises=prem)
        for kind in ("perfect", "finitely_generated", "proper", "elementary")
    ]
    return [primary] + companions


def _leading_exponent(v: Ordinal) -> int:
    return v.terms[0][0] if v.terms else 0


def _rule_local_product_sup(premises: Sequence[RankFact]) -> List[RankFact]:
    """A local product over an unbounded uniform family jumps a level.

    Premises: at least three lower_bound facts, strictly increasing,
    sharing their leading exponent e, produced by one uniform
    construction pattern.  Their supremum over the full family is then
    omega^(e+1), and the product's residual layering adds one more.
    """
    rule = "rule_local_product_sup"
    lows = [f for f in premises if f.kind == "lower_bound"]
    if len(lows) < 3:
        raise HypothesisMissing(
            "hypothesis-missing: rule_local_product_sup needs at least three lower_bound facts"
        )
    values = [f.value for f in lows]
    for a, b in zip(values, values[1:]):
        if not a < b:
            raise HypothesisMissing(
                "hypothesis-missing: rule_local_product_sup needs strictly increasing bounds"
            )
    exps = {_leading_exponent(v) for v in values}
    if len(exps) != 1 or values[0].is_zero():
        raise HypothesisMissing(
            "hypothesis-missing: rule_local_product_sup needs a uniform family "
            "(one leading exponent across the bounds)"
        )
    rules_used = {f.rule for f in lows}
    if len(rules_used) != 1:
        raise HypothesisMissing(
            "hypothesis-missing: rule_local_product_sup needs bounds from one "
            "uniform construction pattern"
        )
    e = exps.pop()
    value = ord_add(Ordinal.omega(exponent=e + 1), ONE)
    subject = "local_product(%s)" % "; ".join(f.subject for f in lows)
    return [
        RankFact(
            subject=subject,
            kind="lower_bound",
            value=value,
            rule=rule,
            premises=tuple(premises),
        )
    ]


_RULES: Dict[str, Callable[[Sequence[RankFact]], List[RankFact]]] = {
    "rule_extension": _rule_extension,
    "rule_wreath_increase": _rule_wreath_increase,
    "rule_infinite_wreath": _rule_infinite_wreath,
    "rule_wreath_hnn": _rule_wreath_hnn,
    "rule_completion_upper": _rule_completion_upper,
    "rule_residually_discrete": _rule_residually_discrete,
    "rule_sup_exhaustion": _rule_sup_exhaustion,
    "rule_perfectize": _rule_perfectize,
    "rule_local_product_sup": _rule_local_product_sup,
}


def rule_names() -> Tuple[str, ...]:
    return tuple(sorted(_RULES))


def apply_rule_all(rule_name: str, premises: Sequence[RankFact]) -> List[RankFact]:
    """Run a rule and return every fact it emits, the main one first."""
    if rule_name not in _RULES:
        raise ValueError("unknown rule %r (have: %s)" % (rule_name, ", ".join(rule_names())))
    for f in premises:
        if not isinstance(f, RankFact):
            raise TypeError("premises must be RankFacts, got %r" % (f,))
    return _RULES[rule_name](list(premises))


def apply_rule(rule_name: str, premises: Sequence[RankFact]) -> RankFact:
    """Run a rule on recorded facts and return the fact it concludes."""
    return apply_rule_all(rule_name, premises)[0]


@dataclass(frozen=True)
class RankCertificate:
    """A derivation tree ending in a bound for the target subject."""

    conclusion: RankFact

    @property
    def subject(self) -> str:
        return self.conclusion.subject

    @property
    def value(self) -> Optional[Ordinal]:
        return self.conclusion.value

    def rule_applications(self) -> Counter:
        """How many times each rule fires (assumptions excluded).

        An application is one rule on one premise list; companion facts
        emitted together count as a single firing, and shared subtrees
        are not double-counted.
        """
        counts: Counter = Counter()
        seen = set()

        def walk(fact: RankFact) -> None:
            if fact.rule != ASSUMPTION:
                key = (fact.rule, fact.premises)
                if key not in seen:
                    seen.add(key)
                    counts[fact.rule] += 1
            for p in fact.premises:
                walk(p)

        walk(self.conclusion)
        return counts

    def check(self) -> bool:
        """Replay every rule application from its premises.

        Each derived node must be reproducible, bit for bit, by its own
        rule on its own premises; assumption leaves must carry no
        premises.  Raises on the first discrepancy.
        """
        done = set()

        def walk(fact: RankFact) -> None:
            if id(fact) in done:
                return
            done.add(id(fact))
            if fact.rule == ASSUMPTION:
                if fact.premises:
                    raise HeckekitError(
                        "certificate corrupt: assumption %s carries premises" % fact.statement()
                    )
                return
            for p in fact.premises:
                walk(p)
            replayed = apply_rule_all(fact.rule, fact.premises)
            for r in replayed:
                if (r.subject, r.kind, r.value) == (fact.subject, fact.kind, fact.value):
                    return
            raise HeckekitError(
                "certificate corrupt: %s is not a conclusion of %s on its premises"
                % (fact.statement(), fact.rule)
            )

        walk(self.conclusion)
        return True

    def render(self, dedupe: bool = False) -> str:
        """Indented proof tree, conclusion first.

        With ``dedupe`` a subtree already printed in full shows up as a
        single line marked "shown above" on later visits.
        """
        lines: List[str] = []
        shown = set()

        def walk(fact: RankFact, depth: int) -> None:
            tag = fact.rule if fact.rule != ASSUMPTION else "assumed"
            note = "  (%s)" % fact.note if fact.rule == ASSUMPTION and fact.note else ""
            repeat = dedupe and fact.premises and id(fact) in shown
            marker = "  [shown above]" if repeat else ""
            lines.append("%s%s  [%s]%s%s" % ("  " * depth, fact.statement(), tag, note, marker))
            if repeat:
                return
            shown.add(id(fact))
            for p in fact.premises:
                walk(p, depth + 1)

        walk(self.conclusion, 0)
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return self.conclusion.to_dict()


def _seed_facts(seed_name: str) -> Dict[str, RankFact]:
    """The declared facts of an abstract tower seed, plus bridges.

    The seed is any countable discrete group that is infinite, finitely
    generated, perfect, has a nontrivial finite subgroup, and acts
    freely and transitively on a countable set.  Bridging facts that
    follow from those properties are recorded as assumptions with their
    provenance spelled out.
    """
    declared = {
        "infinite": assume(seed_name, "infinite", note="seed requirement"),
        "finitely_generated": assume(seed_name, "finitely_generated", note="seed requirement"),
        "perfect": assume(seed_name, "perfect", note="seed requirement"),
        "finite_nontrivial_u": assume(
            seed_name, "finite_nontrivial_u", note="seed requirement: nontrivial finite subgroup"
        ),
        "free_transitive_action": assume(
            seed_name, "free_transitive_action", note="seed requirement"
        ),
    }
    declared["transitive"] = assume(
        seed_name, "transitive", note="the declared free action is transitive"
    )
    declared["elementary"] = assume(
        seed_name, "elementary", note="countable discrete groups are elementary"
    )
    declared["lower_bound"] = assume(
        seed_name,
        "lower_bound",
        value=ONE,
        note="a pair with a nontrivial finite subgroup has positive rank",
    )
    return declared


def build_gn_tower(n: int, seed_name: str = "p0") -> RankCertificate:
    """Certificate that the n-th tower pair has rank at least omega*n + 2.

    The derivation alternates the wreath-plus-shift lower bound with
    perfectization, exactly one round per tower level; level n ends on
    the shift step, so certificates for n and n+1 differ by one
    perfectize and one wreath_hnn application.
    """
    if n < 1:
        raise ValueError("the tower starts at n = 1")
    facts = _seed_facts(seed_name)
    current = {
        "lower_bound": facts["lower_bound"],
        "finitely_generated": facts["finitely_generated"],
        "transitive": facts["transitive"],
        "elementary": facts["elementary"],
        "perfect": facts["perfect"],
    }
    conclusion: Optional[RankFact] = None
    for level in range(1, n + 1):
        premises = [
            current["lower_bound"],
            current["finitely_generated"],
            current["transitive"],
            current["elementary"],
            current["perfect"],
        ]
        conclusion = apply_rule("rule_wreath_hnn", premises)
        if level == n:
            break
        h_subject = conclusion.subject
        lz = assume(
            h_subject,
            "lz_decomposition",
            note="an ascending shift extension splits as stable letter over its base union",
        )
        outputs = apply_rule_all("rule_perfectize", [conclusion, lz])
        by_kind = {f.kind: f for f in outputs}
        current = {
            "lower_bound": by_kind["lower_bound"],
            "finitely_generated": by_kind["finitely_generated"],
            "transitive": assume(
                by_kind["lower_bound"].subject,
                "transitive",
                note="the perfectized pair permutes its coordinate space transitively",
            ),
            "elementary": by_kind["elementary"],
            "perfect": by_kind["perfect"],
        }
    return RankCertificate(conclusion=conclusion)


def best_known_bound(levels: int = 5) -> RankCertificate:
    """The strongest bound these rules derive: omega^2 + 1.

    Takes the first few tower certificates, whose bounds grow without
    bound below omega^2, and feeds them to the local-product rule.
    """
    if levels < 3:
        raise ValueError("need at least three tower levels for the jump")
    tower_bounds = [build_gn_tower(k).conclusion for k in range(1, levels + 1)]
    conclusion = apply_rule("rule_local_product_sup", tower_bounds)
    return RankCertificate(conclusion=conclusion)

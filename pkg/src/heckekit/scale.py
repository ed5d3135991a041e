"""Empirical scale readings from commensuration-index growth.

The scale of an element is read off the left commensuration indices of
its powers: once the ratio of consecutive indices settles on a constant
integer, that integer is the reading.  All statuses are honest; a run
that never settles, or that hits an orbit cap, says so instead of
guessing.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .pairs import PermutationHeckePair, commensuration_index
from .words import GroupWord, all_words

__all__ = [
    "IndexGrowth",
    "index_growth",
    "ScaleEstimate",
    "scale_estimate",
    "UniscalarReport",
    "uniscalar_sample",
]

STABLE = "stable"
INCONCLUSIVE = "inconclusive"
CAP_EXCEEDED = "cap-exceeded"


@dataclass(frozen=True)
class IndexGrowth:
    """Left commensuration indices of g, g^2, ..., g^N and their trend."""

    element: str
    steps: int
    indices: Tuple[Optional[int], ...]
    ratios: Tuple[Fraction, ...]
    stabilized_ratio: Optional[Fraction]
    status: str

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "steps": self.steps,
            "indices": list(self.indices),
            "ratios": [str(r) for r in self.ratios],
            "stabilized_ratio": None if self.stabilized_ratio is None else str(self.stabilized_ratio),
            "status": self.status,
        }


def index_growth(pair: PermutationHeckePair, g: GroupWord, steps: int) -> IndexGrowth:
    """Indices of the first ``steps`` powers, with stabilization analysis.

    The ratio window is the last half of the run (rounded up); the trend
    is ``stable`` only when every ratio in the window equals the same
    value.  Depth for each power scales with its word length so the
    orbit computations see enough of the space.
    """
    if steps < 1:
        raise ValueError("steps must be at least 1")
    indices: List[Optional[int]] = []
    power = GroupWord.identity()
    for n in range(1, steps + 1):
        power = power * g
        depth = max(4, len(power))
        report = commensuration_index(pair, power, depth=depth)
        if report.idx_left is None:
            indices.append(None)
            return IndexGrowth(
                element=g.format(),
                steps=steps,
                indices=tuple(indices),
                ratios=(),
                stabilized_ratio=None,
                status=CAP_EXCEEDED,
            )
        indices.append(report.idx_left)
    ratios = tuple(
        Fraction(indices[i + 1], indices[i]) for i in range(len(indices) - 1)
    )
    window = -((-steps) // 2)
    tail = ratios[-window:] if ratios else ()
    if tail and all(r == tail[0] for r in tail):
        ratio = tail[0]
        status = STABLE
    else:
        ratio = None
        status = INCONCLUSIVE
    return IndexGrowth(
        element=g.format(),
        steps=steps,
        indices=tuple(indices),
        ratios=ratios,
        stabilized_ratio=ratio,
        status=status,
    )


@dataclass(frozen=True)
class ScaleEstimate:
    """A scale reading: an integer when the growth settled, else a status."""

    element: str
    value: Optional[int]
    status: str
    growth: IndexGrowth

    def to_dict(self) -> dict:
        return {
            "element": self.element,
            "value": self.value,
            "status": self.status,
            "growth": self.growth.to_dict(),
        }


def scale_estimate(pair: PermutationHeckePair, g: GroupWord, steps: int = 8) -> ScaleEstimate:
    """Read the scale of g from ``steps`` powers (at least 3).

    A reading is only issued when the stabilized ratio is a positive
    integer; a fractional plateau is reported as inconclusive because a
    genuine scale is always integral.
    """
    if steps < 3:
        raise ValueError("a scale reading needs at least 3 steps")
    growth = index_growth(pair, g, steps)
    if growth.status == STABLE and growth.stabilized_ratio.denominator == 1:
        return ScaleEstimate(
            element=g.format(),
            value=int(growth.stabilized_ratio),
            status=STABLE,
            growth=growth,
        )
    status = growth.status if growth.status != STABLE else INCONCLUSIVE
    return ScaleEstimate(element=g.format(), value=None, status=status, growth=growth)


@dataclass(frozen=True)
class UniscalarReport:
    """Outcome of a bounded search for an element of scale above 1."""

    status: str  # "uniscalar-so-far" | "witness"
    checked: int
    inconclusive: int
    witness_word: Optional[str] = None
    witness_value: Optional[int] = None

    def to_dict(self) -> dict:
        return {
            "status": self.status,
            "checked": self.checked,
            "inconclusive": self.inconclusive,
            "witness_word": self.witness_word,
            "witness_value": self.witness_value,
        }


def uniscalar_sample(
    pair: PermutationHeckePair, word_length_bound: int, steps: int = 6
) -> UniscalarReport:
    """Scan all words up to a length bound for a scale reading above 1.

    Finding one settles the question negatively (the pair is not
    uniscalar); exhausting the bound only earns "uniscalar-so-far",
    since deeper words stay unexamined.
    """
    checked = 0
    inconclusive = 0
    for w in all_words(pair.gen_names, word_length_bound):
        if w.is_identity():
            continue
        checked += 1
        est = scale_estimate(pair, w, steps=steps)
        if est.status == STABLE and est.value is not None and est.value > 1:
            return UniscalarReport(
                status="witness",
                checked=checked,
                inconclusive=inconclusive,
                witness_word=w.format(),
                witness_value=est.value,
            )
        if est.status != STABLE:
            inconclusive += 1
    return UniscalarReport(
        status="uniscalar-so-far", checked=checked, inconclusive=inconclusive
    )

"""Deterministic Schreier machinery: coset tables, balls, orbits, DOT export.

Coset spaces are presented by an :class:`ActionOracle`: an opaque hashable
encoding per coset plus a single-letter step function. Integer ids are
assigned strictly in breadth-first order (generator order, the positive
letter before its inverse), so ids, ball listings, reports and graphs are
reproducible for a fixed pair definition. Nothing outside this module ever
invents an id.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Dict, FrozenSet, Hashable, List, Optional, Protocol, Sequence, Tuple

from .errors import CapExceeded
from .words import GroupWord

CosetId = int

# Orbit closures carry two budgets besides the plain size cap. The step
# budget bounds letter applications; the encoding budget bounds the total
# repr size of newly discovered points. The latter is what stops runaway
# orbits whose encodings grow without bound (the free pair): since BFS
# dequeues each point once, total step cost is at most the generator count
# times the encoding budget, so both time and memory stay bounded.
STEP_BUDGET_FACTOR = 8
ENCODING_BUDGET = 4_000_000


class ActionOracle(Protocol):
    """Single-letter left action on coset encodings."""

    base_point: Hashable

    def step(self, point: Hashable, gen_name: str, sign: int) -> Hashable:
        ...


@dataclass
class CosetBall:
    """The radius-r Schreier ball around the base coset.

    ``members`` lists CosetIds in id order (which is BFS order, so the list
    is always the contiguous range 0..len-1). ``rep_words`` holds one BFS
    representative word per member: the conjugate description of the
    pointwise stabilizer of the ball.
    """

    radius: int
    members: List[CosetId]
    rep_words: Dict[CosetId, GroupWord]
    edges: List[Tuple[CosetId, str, CosetId]] = field(default_factory=list)

    def __contains__(self, cid: CosetId) -> bool:
        return 0 <= cid < len(self.members)

    @property
    def member_set(self) -> FrozenSet[CosetId]:
        return frozenset(self.members)


class CosetTable:
    """Growable point<->id registry with BFS discipline.

    The table remembers, per id, the point encoding, the BFS distance from
    the base coset and a shortest representative word. Balls only ever grow;
    nothing is recomputed or reordered, which is what makes the cache
    shareable between operations.
    """

    def __init__(self, oracle: ActionOracle, gen_names: Sequence[str], coset_cap: int):
        self.oracle = oracle
        self.gen_names = tuple(gen_names)
        self.coset_cap = coset_cap
        base = oracle.base_point
        self._points: List[Hashable] = [base]
        self._ids: Dict[Hashable, CosetId] = {base: 0}
        self._dist: List[int] = [0]
        self._rep: List[GroupWord] = [GroupWord.identity()]
        self._frontier: List[CosetId] = [0]
        self._size_at_radius: List[int] = [1]
        self.radius_complete = 0

    def __len__(self) -> int:
        return len(self._points)

    def point(self, cid: CosetId) -> Hashable:
        return self._points[cid]

    def distance(self, cid: CosetId) -> int:
        return self._dist[cid]

    def rep_word(self, cid: CosetId) -> GroupWord:
        return self._rep[cid]

    def known_id(self, point: Hashable) -> Optional[CosetId]:
        return self._ids.get(point)

    def _grow_one_radius(self) -> int:
        """Expand the completed ball by one radius; returns new-point count."""
        new_frontier: List[CosetId] = []
        for cid in self._frontier:
            point = self._points[cid]
            for name in self.gen_names:
                for sign in (1, -1):
                    image = self.oracle.step(point, name, sign)
                    if image in self._ids:
                        continue
                    if len(self._points) >= self.coset_cap:
                        raise CapExceeded(
                            "coset",
                            self.coset_cap,
                            "growing ball to radius %d" % (self.radius_complete + 1),
                        )
                    new_id = len(self._points)
                    self._points.append(image)
                    self._ids[image] = new_id
                    self._dist.append(self.radius_complete + 1)
                    self._rep.append(GroupWord.gen(name, sign) * self._rep[cid])
                    new_frontier.append(new_id)
        self._frontier = new_frontier
        self.radius_complete += 1
        self._size_at_radius.append(len(self._points))
        return len(new_frontier)

    def ensure_radius(self, r: int) -> None:
        while self.radius_complete < r:
            self._grow_one_radius()

    def ensure_point(self, point: Hashable, context: str = "") -> CosetId:
        """Id of a point, growing the ball until BFS assigns one."""
        cid = self._ids.get(point)
        while cid is None:
            if not self._grow_one_radius():
                raise ValueError(
                    "point %r is not reachable from the base coset%s"
                    % (point, " (" + context + ")" if context else "")
                )
            cid = self._ids.get(point)
        return cid

    def apply_word(self, word: GroupWord, cid: CosetId) -> CosetId:
        point = self._points[cid]
        for name, sign in reversed(word.letters):
            point = self.oracle.step(point, name, sign)
        return self.ensure_point(point, context="acting by %s" % word.format())

    def ball(self, r: int) -> CosetBall:
        self.ensure_radius(r)
        size = self._size_at_radius[r]
        members = list(range(size))
        reps = {cid: self._rep[cid] for cid in members}
        edges: List[Tuple[CosetId, str, CosetId]] = []
        for cid in members:
            for name in self.gen_names:
                image = self.oracle.step(self._points[cid], name, 1)
                dst = self._ids.get(image)
                if dst is not None and dst < size:
                    edges.append((cid, name, dst))
        return CosetBall(radius=r, members=members, rep_words=reps, edges=edges)


def act(pair, word: GroupWord, cid: CosetId = 0) -> CosetId:
    """Left action of a word on a coset, by id.

    Words act letterwise right-to-left. The result id is assigned through
    ball growth if the image has not been seen yet.
    """
    return pair.table.apply_word(word, cid)


def enumerate_ball(pair, radius: int) -> CosetBall:
    return pair.table.ball(radius)


def orbit(
    pair,
    subgroup_words: Sequence[GroupWord],
    cid: CosetId = 0,
    cap: Optional[int] = None,
) -> List[CosetId]:
    """Orbit of a coset under the subgroup generated by the given words.

    Plain breadth-first closure; generator inverses are included
    automatically. Returns ids sorted ascending. Raises CapExceeded when the
    orbit exceeds the cap (the standard way an infinite orbit is detected).

    The closure runs on point encodings and converts to ids only once the
    orbit is known to be finite, so a runaway orbit costs the cap, not a
    full coset-table enumeration out to the runaway's radius.
    """
    if cap is None:
        cap = pair.caps["orbit"]
    table = pair.table
    oracle = table.oracle
    gens: List[GroupWord] = []
    for w in subgroup_words:
        gens.append(w)
        inv = w.inverse()
        if inv != w:
            gens.append(inv)
    start = table.point(cid)
    seen = {start}
    queue = deque([start])
    steps_left = cap * STEP_BUDGET_FACTOR
    encoding_left = ENCODING_BUDGET
    while queue:
        current = queue.popleft()
        for w in gens:
            image = current
            for name, sign in reversed(w.letters):
                image = oracle.step(image, name, sign)
            steps_left -= max(len(w), 1)
            if steps_left < 0:
                raise CapExceeded(
                    "orbit",
                    cap,
                    "step budget spent closing the orbit of coset %d (size >= %d)"
                    % (cid, len(seen)),
                )
            if image not in seen:
                encoding_left -= len(repr(image))
                if len(seen) >= cap or encoding_left < 0:
                    raise CapExceeded(
                        "orbit",
                        cap,
                        "orbit of coset %d under %d words (size >= %d)"
                        % (cid, len(gens), len(seen)),
                    )
                seen.add(image)
                queue.append(image)
    return sorted(table.ensure_point(point) for point in seen)


def export_schreier_dot(pair, radius: int, name: str = "schreier") -> str:
    """Render the radius-r Schreier graph as deterministic DOT text.

    One node per ball member (the base coset is doubly circled), one edge
    per positive generator letter whose image stays inside the ball.
    """
    ball = enumerate_ball(pair, radius)
    label = getattr(pair, "name", "pair")
    lines = [
        'digraph "%s" {' % name,
        '  graph [label="%s, radius %d", rankdir=LR];' % (label, radius),
        "  node [shape=circle];",
        "  0 [shape=doublecircle];",
    ]
    for cid in ball.members:
        rep = ball.rep_words[cid].format()
        lines.append('  %d [tooltip="%s"];' % (cid, rep))
    for src, gen_name, dst in sorted(ball.edges):
        lines.append('  %d -> %d [label="%s"];' % (src, dst, gen_name))
    lines.append("}")
    return "\n".join(lines) + "\n"

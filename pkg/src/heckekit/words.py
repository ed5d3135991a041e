"""Freely reduced words over named generators.

A :class:`GroupWord` is the syntactic currency of the whole package: group
elements handed to actions, commensuration indices, chains and the CLI are
all words in the generators of some pair. Words reduce freely on
construction (``a * a^-1`` cancels); any further relations live in the
action oracles, never in the words themselves.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Tuple

Letter = Tuple[str, int]

_NAME_RE = re.compile(r"^[A-Za-z_][A-Za-z0-9_@]*$")
_TOKEN_RE = re.compile(r"^([A-Za-z_][A-Za-z0-9_@]*)(?:\^(-?\d+))?$")


@dataclass(frozen=True)
class Generator:
    """A named generator of a pair's ambient group."""

    name: str

    def __post_init__(self):
        if not _NAME_RE.match(self.name):
            raise ValueError("bad generator name: %r" % (self.name,))

    def word(self, power: int = 1) -> "GroupWord":
        return GroupWord.gen(self.name) ** power


def _reduce(letters: Iterable[Letter]) -> Tuple[Letter, ...]:
    out: list[Letter] = []
    for name, sign in letters:
        if sign not in (1, -1):
            raise ValueError("letter sign must be +1 or -1, got %r" % (sign,))
        if out and out[-1][0] == name and out[-1][1] == -sign:
            out.pop()
        else:
            out.append((name, sign))
    return tuple(out)


class GroupWord:
    """An immutable freely reduced word."""

    __slots__ = ("letters",)

    def __init__(self, letters: Iterable[Letter] = ()):
        object.__setattr__(self, "letters", _reduce(letters))

    def __setattr__(self, *_):
        raise AttributeError("GroupWord is immutable")

    @classmethod
    def identity(cls) -> "GroupWord":
        return cls()

    @classmethod
    def gen(cls, name: str, sign: int = 1) -> "GroupWord":
        return cls(((name, sign),))

    @classmethod
    def from_names(cls, names: Sequence[str]) -> "GroupWord":
        """Build a word from names like ("t", "a", "t^-1") convenience form."""
        return cls.parse("*".join(names))

    def __mul__(self, other: "GroupWord") -> "GroupWord":
        if not isinstance(other, GroupWord):
            return NotImplemented
        return GroupWord(self.letters + other.letters)

    def inverse(self) -> "GroupWord":
        return GroupWord(tuple((n, -s) for n, s in reversed(self.letters)))

    def __pow__(self, n: int) -> "GroupWord":
        if n == 0:
            return GroupWord()
        base = self if n > 0 else self.inverse()
        return GroupWord(base.letters * abs(n))

    def conjugate_by(self, g: "GroupWord") -> "GroupWord":
        """g * self * g^-1."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return not self.letters

    def generator_names(self) -> Tuple[str, ...]:
        seen = []
        for n, _ in self.letters:
            if n not in seen:
                seen.append(n)
        return tuple(seen)

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __eq__(self, other) -> bool:
        return isinstance(other, GroupWord) and self.letters == other.letters

    def __hash__(self) -> int:
        return hash(("GroupWord", self.letters))

    def __repr__(self) -> str:
        return "GroupWord(%r)" % (self.format(),)

    def format(self) -> str:
        """Render as ``a^3*t^-1``; the identity renders as ``1``."""
        if not self.letters:
            return "1"
        parts = []
        i = 0
        letters = self.letters
        while i < len(letters):
            name, sign = letters[i]
            j = i
            while j < len(letters) and letters[j] == (name, sign):
                j += 1
            power = (j - i) * sign
            parts.append(name if power == 1 else "%s^%d" % (name, power))
            i = j
        return "*".join(parts)

    @classmethod
    def parse(cls, text: str, alphabet: Optional[Sequence[str]] = None) -> "GroupWord":
        """Parse the :meth:`format` syntax.

        Tokens are separated by ``*`` or whitespace; each token is a
        generator name with an optional integer exponent (``t^-2``). The
        bare token ``1`` is the identity. When ``alphabet`` is given, any
        name outside it is rejected.
        """
        letters: list[Letter] = []
        stripped = text.strip()
        if stripped in ("", "1"):
            return cls()
        for token in re.split(r"[\s*]+", stripped):
            if not token or token == "1":
                continue
            m = _TOKEN_RE.match(token)
            if not m:
                raise ValueError("bad word token: %r" % (token,))
            name, exp_text = m.group(1), m.group(2)
            exp = 1 if exp_text is None else int(exp_text)
            if alphabet is not None and name not in alphabet:
                raise ValueError(
                    "unknown generator %r (alphabet: %s)" % (name, ", ".join(alphabet))
                )
            sign = 1 if exp >= 0 else -1
            letters.extend((name, sign) for _ in range(abs(exp)))
        return cls(letters)


def all_words(gen_names: Sequence[str], max_length: int) -> list[GroupWord]:
    """All freely reduced words of length <= max_length, in deterministic order.

    Enumeration is breadth-first over the word tree with letters ordered by
    (generator order, positive before negative), matching CosetId order.
    """
    alphabet = [(n, s) for n in gen_names for s in (1, -1)]
    out = [GroupWord()]
    frontier = [GroupWord()]
    for _ in range(max_length):
        nxt = []
        for w in frontier:
            for name, sign in alphabet:
                w2 = w * GroupWord.gen(name, sign)
                if len(w2) == len(w) + 1:
                    nxt.append(w2)
        out.extend(nxt)
        frontier = nxt
    return out

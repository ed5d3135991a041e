"""The worked-example pairs.

Each constructor wires an exact model behind the action oracle: affine maps
over dyadic-style fractions for the Baumslag-Solitar pairs, finitely
supported lamp configurations for the lamplighter, signed integers for the
infinite dihedral group, reduced words for the free pair. The models give
every pair an exact element-key solver (the word problem) alongside the
coset action, which downstream constructions lean on heavily.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .pairs import PairMetadata, PermutationHeckePair
from .words import Generator, GroupWord, _reduce

MAX_LAMP_WINDOW = 64


# ---------------------------------------------------------------------------
# Baumslag-Solitar BS(1, p) = Z[1/p] x| Z


class _BsOracle:
    """Cosets of <a> in BS(1, p), acting by affine maps z -> p^k z + x.

    A coset is (k, x mod p^k) with the representative reduced into
    [0, p^k); both entries are exact Fractions. The base coset is (0, 0).
    """

    def __init__(self, p: int):
        self.p = p
        self.base_point = (0, Fraction(0))

    def step(self, point, gen_name: str, sign: int):
        k, r = point
        p = self.p
        if gen_name == "a":
            modulus = Fraction(p) ** k
            return (k, (r + sign) % modulus)
        if gen_name == "t":
            if sign == 1:
                return (k + 1, (p * r) % (Fraction(p) ** (k + 1)))
            return (k - 1, (r / p) % (Fraction(p) ** (k - 1)))
        raise KeyError(gen_name)


def _bs_element_key(p: int):
    def key(word: GroupWord) -> Hashable:
        scale, offset = Fraction(1), Fraction(0)
        for name, sign in word.letters:
            if name == "a":
                ls, lo = Fraction(1), Fraction(sign)
            else:
                ls, lo = (Fraction(p), Fraction(0)) if sign == 1 else (Fraction(1, p), Fraction(0))
            # compose on the right: current followed-by letter means current(letter(z))
            scale, offset = (scale * ls, scale * lo + offset)
        return (scale, offset)

    return key


def _bs_stabilizer_family(p: int):
    def stab(point, depth: int) -> List[GroupWord]:
        k, _ = point
        if k <= 0:
            return [GroupWord.gen("a")]
        return [GroupWord.gen("a") ** (p**k)]

    return stab


def bs_pair(p: int) -> PermutationHeckePair:
    """BS(1, p) with U = <a>, acting on the coset space of U."""
    if p < 2:
        raise ValueError("bs_pair needs p >= 2")
    name = "bs(%d)" % p
    md = PairMetadata(
        transitive=True,
        proper=True,
        finitely_generated=True,
        elementary=True,
        perfect=False,
        u_infinite=True,
        fg_witness=("t",),
        construction=name,
        provenance={
            "transitive": "by-construction: every coset reachable from U",
            "proper": "by-construction: faithful affine action",
            "finitely_generated": "by-construction: G = <U, t>",
            "elementary": "declared: completion is (p-adics) x| Z, a two-step build",
            "perfect": "declared: abelianization is infinite",
        },
    )
    return PermutationHeckePair(
        name=name,
        generators=[Generator("a"), Generator("t")],
        u_generators=[GroupWord.gen("a")],
        oracle=_BsOracle(p),
        metadata=md,
        element_key=_bs_element_key(p),
        stabilizer_family=_bs_stabilizer_family(p),
    )


# ---------------------------------------------------------------------------
# Lamplighter Z/q wr Z


class _LamplighterOracle:
    """Cosets of U = (lamps at positions >= 0) in Z/q wr Z.

    A coset of (f, m)U is determined by the shift m together with the lamp
    pattern strictly left of m; the pattern is stored as a sorted tuple of
    (position, value) with values in 1..q-1.
    """

    def __init__(self, q: int):
        self.q = q
        self.base_point = (0, ())

    def step(self, point, gen_name: str, sign: int):
        k, pat = point
        if gen_name == "t":
            return (k + sign, tuple((pos + sign, val) for pos, val in pat))
        if gen_name == "s":
            if k < 1:
                return point
            d = dict(pat)
            d[0] = (d.get(0, 0) + sign) % self.q
            if d[0] == 0:
                del d[0]
            return (k, tuple(sorted(d.items())))
        raise KeyError(gen_name)


def _lamp_element_key(q: int):
    def key(word: GroupWord) -> Hashable:
        lamps: Dict[int, int] = {}
        shift = 0
        for name, sign in word.letters:
            if name == "t":
                shift += sign
            else:
                pos = shift
                lamps[pos] = (lamps.get(pos, 0) + sign) % q
                if lamps[pos] == 0:
                    del lamps[pos]
        return (shift, tuple(sorted(lamps.items())))

    return key


def _lamp_word(n: int) -> GroupWord:
    t = GroupWord.gen("t")
    return t**n * GroupWord.gen("s") * t**-n


def _lamp_u_family(depth: int, points: Optional[Sequence[Hashable]]) -> List[GroupWord]:
    window = depth
    for point in points or ():
        k, _ = point
        window = max(window, k)
    window = min(max(window, 1), MAX_LAMP_WINDOW)
    return [_lamp_word(n) for n in range(window)]


def _lamp_stabilizer_family(point, depth: int) -> List[GroupWord]:
    k, _ = point
    start = max(k, 0)
    return [_lamp_word(n) for n in range(start, start + depth)]


def lamplighter_pair(q: int) -> PermutationHeckePair:
    """Z/q wr Z with U the lamps on the non-negative positions."""
    if q < 2:
        raise ValueError("lamplighter_pair needs q >= 2")
    name = "lamplighter(%d)" % q
    md = PairMetadata(
        transitive=True,
        proper=True,
        finitely_generated=True,
        elementary=True,
        perfect=False,
        u_infinite=True,
        fg_witness=("t",),
        construction=name,
        provenance={
            "transitive": "by-construction",
            "proper": "by-construction: faithful wreath action on lamp configurations",
            "finitely_generated": "by-construction: G = <U, t>, s lies in U",
            "elementary": "declared: completion is (compact lamp group) x| Z",
            "perfect": "declared: abelianization is infinite",
        },
    )
    return PermutationHeckePair(
        name=name,
        generators=[Generator("s"), Generator("t")],
        u_generators=[GroupWord.gen("s")],
        oracle=_LamplighterOracle(q),
        metadata=md,
        element_key=_lamp_element_key(q),
        u_family=_lamp_u_family,
        stabilizer_family=_lamp_stabilizer_family,
    )


# ---------------------------------------------------------------------------
# Infinite dihedral


class _DihedralOracle:
    """D_inf = <r, t | r^2, r t r = t^-1> acting on Z; U = Stab(0) = {1, r}."""

    base_point = 0

    def step(self, point, gen_name: str, sign: int):
        if gen_name == "r":
            return -point
        if gen_name == "t":
            return point + sign
        raise KeyError(gen_name)


def _dihedral_element_key(word: GroupWord) -> Hashable:
    s, o = 1, 0
    for name, sign in word.letters:
        ls, lo = (-1, 0) if name == "r" else (1, sign)
        s, o = (s * ls, s * lo + o)
    return (s, o)


def _dihedral_stabilizer_family(point, depth: int) -> List[GroupWord]:
    return [GroupWord.gen("r")] if point == 0 else []


def dihedral_pair() -> PermutationHeckePair:
    name = "dihedral"
    md = PairMetadata(
        transitive=True,
        proper=True,
        finitely_generated=True,
        elementary=True,
        residually_discrete=True,
        perfect=False,
        u_infinite=False,
        fg_witness=("t",),
        construction="dihedral()",
        provenance={
            "transitive": "by-construction",
            "proper": "by-construction: the reflection fixes only 0",
            "finitely_generated": "by-construction: G = <U, t>",
            "residually_discrete": "by-construction: the level-1 ball stabilizer is trivial",
            "elementary": "by-construction: finite U gives a discrete completion",
            "perfect": "declared: abelianization has order 4",
        },
    )
    return PermutationHeckePair(
        name=name,
        generators=[Generator("r"), Generator("t")],
        u_generators=[GroupWord.gen("r")],
        oracle=_DihedralOracle(),
        metadata=md,
        element_key=_dihedral_element_key,
        stabilizer_family=_dihedral_stabilizer_family,
    )


# ---------------------------------------------------------------------------
# Translation pair (Z, {1}, Z)


class _TranslationOracle:
    base_point = 0

    def step(self, point, gen_name: str, sign: int):
        if gen_name == "t":
            return point + sign
        raise KeyError(gen_name)


def _translation_element_key(word: GroupWord) -> Hashable:
    return sum(sign for _, sign in word.letters)


def translation_pair() -> PermutationHeckePair:
    name = "translation"
    md = PairMetadata(
        transitive=True,
        proper=True,
        finitely_generated=True,
        elementary=True,
        residually_discrete=True,
        perfect=False,
        u_infinite=False,
        fg_witness=("t",),
        construction="translation()",
        provenance={
            "transitive": "by-construction",
            "proper": "by-construction: U is trivial",
            "finitely_generated": "by-construction",
            "residually_discrete": "by-construction: all ball stabilizers are trivial",
            "elementary": "by-construction: the completion is discrete",
            "perfect": "declared: Z is abelian",
        },
    )
    return PermutationHeckePair(
        name=name,
        generators=[Generator("t")],
        u_generators=[],
        oracle=_TranslationOracle(),
        metadata=md,
        element_key=_translation_element_key,
        stabilizer_family=lambda point, depth: [],
    )


# ---------------------------------------------------------------------------
# The free pair (F2, <a>): the designated non-Hecke exemplar


class _FreeOracle:
    """Cosets w<a> in F2, encoded as reduced words with trailing a-letters cut."""

    base_point = ()

    def step(self, point, gen_name: str, sign: int):
        word = _reduce(((gen_name, sign),) + point)
        while word and word[-1][0] == "a":
            word = word[:-1]
        return word


def _free_stabilizer_family(point, depth: int) -> List[GroupWord]:
    return [GroupWord.gen("a")] if point == () else []


def free_pair() -> PermutationHeckePair:
    """(F2, <a>): proper and transitive but not Hecke; orbit caps fire on b."""
    name = "free"
    md = PairMetadata(
        transitive=True,
        proper=True,
        finitely_generated=True,
        elementary=None,
        perfect=False,
        u_infinite=True,
        fg_witness=("b",),
        construction="free()",
        provenance={
            "transitive": "by-construction",
            "proper": "by-construction: <a> has trivial normal core in F2",
            "finitely_generated": "by-construction: G = <U, b>",
            "perfect": "declared: free groups abelianize onto Z^2",
        },
        notes=("not a Hecke pair: the <a>-orbit of b<a> is infinite",),
    )
    return PermutationHeckePair(
        name=name,
        generators=[Generator("a"), Generator("b")],
        u_generators=[GroupWord.gen("a")],
        oracle=_FreeOracle(),
        metadata=md,
        stabilizer_family=_free_stabilizer_family,
    )


# ---------------------------------------------------------------------------
# Trivial-U regular models


class _RegularZOracle:
    base_point = 0

    def step(self, point, gen_name: str, sign: int):
        if gen_name == "t":
            return point + sign
        raise KeyError(gen_name)


class _RegularZ2Oracle:
    base_point = (0, 0)

    def step(self, point, gen_name: str, sign: int):
        x, y = point
        if gen_name == "x":
            return (x + sign, y)
        if gen_name == "y":
            return (x, y + sign)
        raise KeyError(gen_name)


class _RegularFreeOracle:
    base_point = ()

    def step(self, point, gen_name: str, sign: int):
        return _reduce(((gen_name, sign),) + point)


class _RegularDihedralOracle:
    base_point = (1, 0)

    def step(self, point, gen_name: str, sign: int):
        s, o = point
        ls, lo = (-1, 0) if gen_name == "r" else (1, sign)
        return (ls * s, ls * o + lo)


_TRIVIAL_MODELS = {
    "z": (_RegularZOracle, ("t",)),
    "z2": (_RegularZ2Oracle, ("x", "y")),
    "free2": (_RegularFreeOracle, ("a", "b")),
    "dihedral": (_RegularDihedralOracle, ("r", "t")),
}


def trivial_u_pair(model: str = "z") -> PermutationHeckePair:
    """A named group acting on itself with U = {1}.

    Models: "z", "z2", "free2", "dihedral". Regular actions make the element
    key trivial to read off: it is the point reached from the base.
    """
    if model not in _TRIVIAL_MODELS:
        raise ValueError(
            "unknown trivial-U model %r (have: %s)" % (model, ", ".join(sorted(_TRIVIAL_MODELS)))
        )
    oracle_cls, gen_names = _TRIVIAL_MODELS[model]
    oracle = oracle_cls()

    def element_key(word: GroupWord, _oracle=oracle) -> Hashable:
        point = _oracle.base_point
        for name, sign in reversed(word.letters):
            point = _oracle.step(point, name, sign)
        return point

    name = "trivial(%s)" % model
    md = PairMetadata(
        transitive=True,
        proper=True,
        finitely_generated=True,
        elementary=True,
        residually_discrete=True,
        perfect=False,
        u_infinite=False,
        fg_witness=gen_names,
        construction=name,
        provenance={
            "transitive": "by-construction: regular action",
            "proper": "by-construction: U is trivial",
            "finitely_generated": "by-construction",
            "residually_discrete": "by-construction: the pair is discrete",
            "elementary": "by-construction: discrete completion",
            "perfect": "declared: each model has nontrivial abelianization",
        },
    )
    return PermutationHeckePair(
        name=name,
        generators=[Generator(n) for n in gen_names],
        u_generators=[],
        oracle=oracle,
        metadata=md,
        element_key=element_key,
        stabilizer_family=lambda point, depth: [],
    )


CATALOG = {
    "bs": bs_pair,
    "lamplighter": lamplighter_pair,
    "dihedral": dihedral_pair,
    "translation": translation_pair,
    "free": free_pair,
    "trivial": trivial_u_pair,
}

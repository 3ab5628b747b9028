"""The index-2 subgroup of F(x, y) cut out by a parity homomorphism.

Word-level model of the orientation double cover of the once-punctured Klein
bottle: ambient generators ``x``, ``y`` are both orientation reversing, and the
kernel is free of rank 3 with Schreier generators over the transversal {1, x}.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources

from .morphisms import GenMap
from .words import Alphabet, AlphabetMismatch, Word, exponent_sums, format_word, parse_word

FIXTURE = "klein_cover.json"


class NotInSubgroup(ValueError):
    pass


class FixtureError(ValueError):
    """A fixture file violates one of its invariants."""

    def __init__(self, invariant: str, detail: str):
        super().__init__(f"{invariant}: {detail}")
        self.invariant = invariant


@dataclass(frozen=True)
class CoverData:
    ambient: Alphabet
    parity: tuple[int, ...]
    transversal: tuple[Word, Word]
    subgroup: Alphabet
    gen_table: tuple[Word, ...]
    version: int = 1

    def __post_init__(self):
        self._check()

    def _check(self):
        if len(self.parity) != self.ambient.rank or not any(self.parity):
            raise FixtureError("parity", "need a nontrivial bit per ambient generator")
        if [coset(t, self) for t in self.transversal] != [0, 1]:
            raise FixtureError("transversal", "representatives must hit cosets 0 and 1")
        if len(self.gen_table) != self.subgroup.rank:
            raise FixtureError("gen_table", "one ambient word per subgroup generator")
        for name, g in zip(self.subgroup.names, self.gen_table):
            if coset(g, self):
                raise FixtureError("gen_table", f"{name} = {g} is not in the kernel")
        expected = schreier_generators(self.ambient, self.parity, self.transversal)
        if tuple(expected) != self.gen_table:
            raise FixtureError(
                "gen_table",
                "table differs from the Schreier generators "
                f"[{', '.join(map(str, expected))}]",
            )

    @property
    def embedding(self) -> GenMap:
        return GenMap(self.subgroup, self.ambient, self.gen_table)

    def to_json(self) -> dict:
        return {
            "schema": 1,
            "version": self.version,
            "ambient": list(self.ambient.names),
            "parity": dict(zip(self.ambient.names, self.parity)),
            "transversal": [format_word(t) for t in self.transversal],
            "subgroup": list(self.subgroup.names),
            "gen_table": [format_word(g) for g in self.gen_table],
        }

    @classmethod
    def from_json(cls, data: dict) -> "CoverData":
        try:
            ambient = Alphabet(tuple(data["ambient"]))
            subgroup = Alphabet(tuple(data["subgroup"]))
            parity = tuple(int(data["parity"][n]) % 2 for n in ambient.names)
            transversal = tuple(parse_word(t, ambient) for t in data["transversal"])
            table = tuple(parse_word(g, ambient) for g in data["gen_table"])
        except (KeyError, ValueError, TypeError) as exc:
            raise FixtureError("schema", str(exc)) from exc
        return cls(ambient, parity, transversal, subgroup, table, data.get("version", 1))


def coset(u: Word, cover: CoverData) -> int:
    return sum(p * s for p, s in zip(cover.parity, exponent_sums(u))) % 2


def schreier_generators(
    ambient: Alphabet, parity: tuple[int, ...], transversal: tuple[Word, Word]
) -> list[Word]:
    """Nontrivial t g (rep of t g)^-1, cosets in transversal order, then generators."""
    out = []
    for c, t in enumerate(transversal):
        for i in range(ambient.rank):
            s = t * Word.generator(ambient, i) * ~transversal[(c + parity[i]) % 2]
            if s:
                out.append(s)
    return out


def klein_cover() -> CoverData:
    ambient = Alphabet(("x", "y"))
    parity = (1, 1)
    transversal = (Word.identity(ambient), Word.generator(ambient, 0))
    table = tuple(schreier_generators(ambient, parity, transversal))
    return CoverData(ambient, parity, transversal, Alphabet(("a", "b", "c")), table)


def load_cover(path=None) -> CoverData:
    if path is None:
        text = resources.files("freewh.data").joinpath(FIXTURE).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return CoverData.from_json(json.loads(text))


def _check_ambient(u: Word, cover: CoverData) -> None:
    if u.alphabet != cover.ambient:
        raise AlphabetMismatch(f"word over {u.alphabet}, cover ambient {cover.ambient}")


def in_subgroup(u: Word, cover: CoverData) -> bool:
    _check_ambient(u, cover)
    return coset(u, cover) == 0


def _schreier_letters(cover: CoverData) -> dict[tuple[int, int], int]:
    """(coset, generator index) -> signed subgroup letter, or 0 when trivial."""
    table = {}
    k = 0
    for c, t in enumerate(cover.transversal):
        for i in range(cover.ambient.rank):
            s = t * Word.generator(cover.ambient, i) * ~cover.transversal[(c + cover.parity[i]) % 2]
            if s:
                table[c, i] = k + 1
                k += 1
            else:
                table[c, i] = 0
    return table


def rewrite(u: Word, cover: CoverData) -> Word:
    """Reidemeister-Schreier rewrite of a kernel element in the subgroup basis."""
    _check_ambient(u, cover)
    if coset(u, cover):
        raise NotInSubgroup(f"{u} is not in the index-2 subgroup")
    table = _schreier_letters(cover)
    out = []
    c = 0
    for x in u.letters:
        i = abs(x) - 1
        if x > 0:
            s = table[c, i]
            c = (c + cover.parity[i]) % 2
        else:
            c = (c - cover.parity[i]) % 2
            s = -table[c, i]
        if s:
            out.append(s)
    return Word(cover.subgroup, out)


def embed(s: Word, cover: CoverData) -> Word:
    if s.alphabet != cover.subgroup:
        raise AlphabetMismatch("word not over the subgroup alphabet")
    return cover.embedding(s)

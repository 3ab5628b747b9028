"""Homomorphisms between free groups given by generator images."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

from .words import (
    Alphabet,
    AlphabetMismatch,
    Word,
    conjugator,
    format_word,
    invert_letters,
    parse_word,
)


@dataclass(frozen=True)
class GenMap:
    source: Alphabet
    target: Alphabet
    images: tuple[Word, ...]
    # known inverse, carried along construction; not part of equality
    inverse: "GenMap | None" = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        images = tuple(self.images)
        object.__setattr__(self, "images", images)
        if len(images) != self.source.rank:
            raise ValueError(
                f"need {self.source.rank} images, got {len(images)}"
            )
        for img in images:
            if img.alphabet != self.target:
                raise AlphabetMismatch("image word not over the target alphabet")

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "GenMap":
        gens = tuple(Word.generator(alphabet, i) for i in range(alphabet.rank))
        m = cls(alphabet, alphabet, gens)
        object.__setattr__(m, "inverse", m)
        return m

    @classmethod
    def from_strings(
        cls, images: Sequence[str], source: Alphabet, target: Alphabet | None = None
    ) -> "GenMap":
        target = source if target is None else target
        return cls(source, target, tuple(parse_word(s, target) for s in images))

    def with_inverse(self, inverse: "GenMap") -> "GenMap":
        m = GenMap(self.source, self.target, self.images)
        inv = GenMap(inverse.source, inverse.target, inverse.images)
        object.__setattr__(m, "inverse", inv)
        object.__setattr__(inv, "inverse", m)
        return m

    def __call__(self, u: Word) -> Word:
        return apply(self, u)

    def is_identity(self) -> bool:
        return self.source == self.target and all(
            img.letters == (i + 1,) for i, img in enumerate(self.images)
        )

    def to_json(self) -> dict:
        return {
            "source": list(self.source.names),
            "target": list(self.target.names),
            "images": [format_word(w) for w in self.images],
        }

    @classmethod
    def from_json(cls, data: dict) -> "GenMap":
        source = Alphabet(tuple(data["source"]))
        target = Alphabet(tuple(data["target"]))
        return cls.from_strings(data["images"], source, target)

    def __str__(self) -> str:
        pairs = (
            f"{name}->{format_word(img)}"
            for name, img in zip(self.source.names, self.images)
        )
        return ", ".join(pairs)


@dataclass(frozen=True)
class AutWitness:
    forward: GenMap
    backward: GenMap


def apply_letters(m: GenMap, letters: Sequence[int]) -> tuple[int, ...]:
    images = m.images
    out: list[int] = []
    for x in letters:
        img = images[x - 1].letters if x > 0 else invert_letters(images[-x - 1].letters)
        for y in img:
            if out and out[-1] == -y:
                out.pop()
            else:
                out.append(y)
    return tuple(out)


def apply(m: GenMap, u: Word) -> Word:
    if u.alphabet != m.source:
        raise AlphabetMismatch(f"word over {u.alphabet}, map source {m.source}")
    return Word(m.target, apply_letters(m, u.letters))


def compose(outer: GenMap, inner: GenMap) -> GenMap:
    """``outer o inner``: apply ``inner`` first."""
    if inner.target != outer.source:
        raise AlphabetMismatch("inner target must equal outer source")
    images = tuple(
        Word(outer.target, apply_letters(outer, img.letters)) for img in inner.images
    )
    result = GenMap(inner.source, outer.target, images)
    if outer.inverse is not None and inner.inverse is not None:
        back = tuple(
            Word(inner.source, apply_letters(inner.inverse, img.letters))
            for img in outer.inverse.images
        )
        inv = GenMap(outer.target, inner.source, back)
        object.__setattr__(result, "inverse", inv)
        object.__setattr__(inv, "inverse", result)
    return result


def compose_all(maps: Sequence[GenMap], alphabet: Alphabet) -> GenMap:
    """Composite of ``maps`` applied left to right (first element first)."""
    result = GenMap.identity(alphabet)
    for m in maps:
        result = compose(m, result)
    return result


def inner(g: Word) -> GenMap:
    """The inner automorphism ``x -> g x g^-1``."""
    A = g.alphabet
    ginv = ~g

    def table(h: Word, hinv: Word) -> tuple[Word, ...]:
        return tuple(h * Word.generator(A, i) * hinv for i in range(A.rank))

    fwd = GenMap(A, A, table(g, ginv))
    return fwd.with_inverse(GenMap(A, A, table(ginv, g)))


def _signed_permutation_inverse(m: GenMap) -> GenMap | None:
    n = m.source.rank
    back: list[Word | None] = [None] * n
    for i, img in enumerate(m.images):
        if len(img) != 1:
            return None
        x = img.letters[0]
        j = abs(x) - 1
        if back[j] is not None:
            return None
        back[j] = Word(m.source, ((i + 1) if x > 0 else -(i + 1),))
    return GenMap(m.source, m.source, tuple(back))


def _type_ii_inverse(m: GenMap) -> GenMap | None:
    """Inverse of a map of the form x -> x, xa, a^-1 x or a^-1 x a."""
    A = m.source
    for k, img in enumerate(m.images):
        if img.letters != (k + 1,):
            continue
        for a in (k + 1, -(k + 1)):
            back = []
            for i, im in enumerate(m.images):
                x = i + 1
                if i == k:
                    back.append(im)
                    continue
                body = im.letters
                left = len(body) >= 2 and body[0] == -a and body[1] == x
                if left:
                    body = body[1:]
                right = len(body) >= 2 and body[-1] == a
                if right:
                    body = body[:-1]
                if body != (x,):
                    break
                new = (x,)
                if left:
                    new = (a,) + new
                if right:
                    new = new + (-a,)
                back.append(Word(A, new))
            else:
                return GenMap(A, A, tuple(back))
    return None


def is_automorphism(m: GenMap) -> AutWitness | None:
    """Certificate for the classes built here; not a general decision procedure.

    Recognised: maps carrying a known inverse (Whitehead automorphisms and their
    composites), signed permutations, and single Type II (multiplier) shapes.
    """
    if m.source != m.target:
        return None
    candidates = [m.inverse, _signed_permutation_inverse(m), _type_ii_inverse(m)]
    for inv in candidates:
        if inv is None:
            continue
        if compose(inv, m).is_identity() and compose(m, inv).is_identity():
            return AutWitness(m, inv)
    return None


def inner_conjugator(m: GenMap) -> Word | None:
    """Return g with ``m == inner(g)`` or None if m is not inner."""
    A = m.source
    if m.target != A:
        return None
    x1 = Word.generator(A, 0)
    h = conjugator(m.images[0], x1)
    if h is None:
        return None
    g = h
    if A.rank > 1:
        y = (~h * m.images[1] * h).letters
        k = 0
        while k < len(y) and y[k] == y[0] and abs(y[0]) == 1:
            k += 1
        power = k if y and y[0] == 1 else -k
        g = h * (x1**power)
    if inner(g).images == m.images:
        return g
    return None


def equal_up_to_inner(m1: GenMap, m2: GenMap) -> bool:
    """Whether ``m1 = inner(g) o m2`` for some g; m2 must carry its inverse."""
    if m2.inverse is None:
        raise ValueError("second map needs a known inverse")
    return inner_conjugator(compose(m1, m2.inverse)) is not None

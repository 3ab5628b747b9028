"""Reduced and cyclic words in a free group of finite rank.

Letters are stored as nonzero integers: generator ``i`` (0-based) is ``i + 1``
and its inverse is ``-(i + 1)``.  Every public value is immutable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

_NAME_RE = re.compile(r"[^\W\d_A-Z][^\W_A-Z]*\Z")


class AlphabetMismatch(ValueError):
    """Raised when words over different alphabets are combined."""


class WordSyntaxError(ValueError):
    def __init__(self, message: str, text: str, position: int):
        super().__init__(f"{message} at position {position}: {text!r}")
        self.text = text
        self.position = position


class UnknownGenerator(WordSyntaxError):
    pass


@dataclass(frozen=True)
class Alphabet:
    names: tuple[str, ...]

    def __post_init__(self):
        names = tuple(self.names)
        object.__setattr__(self, "names", names)
        if not names:
            raise ValueError("alphabet rank must be at least 1")
        if len(set(names)) != len(names):
            raise ValueError(f"generator names must be distinct: {names}")
        for name in names:
            if not (isinstance(name, str) and name.islower() and _NAME_RE.match(name)):
                raise ValueError(f"bad generator name {name!r}")

    @classmethod
    def standard(cls, rank: int) -> "Alphabet":
        if not 1 <= rank <= 26:
            raise ValueError("standard alphabets have rank 1..26")
        return cls(tuple("abcdefghijklmnopqrstuvwxyz"[:rank]))

    @classmethod
    def parse(cls, text: str) -> "Alphabet":
        return cls(tuple(part.strip() for part in text.split(",") if part.strip()))

    @property
    def rank(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def letter(self, name: str, sign: int = 1) -> int:
        return sign * (self.index(name) + 1)

    def letter_name(self, letter: int) -> str:
        name = self.names[abs(letter) - 1]
        return name if letter > 0 else name + "^-1"

    def __str__(self) -> str:
        return ",".join(self.names)


# -- raw tuple arithmetic -------------------------------------------------


def reduce_letters(letters: Iterable[int]) -> tuple[int, ...]:
    out: list[int] = []
    for x in letters:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def invert_letters(letters: Sequence[int]) -> tuple[int, ...]:
    return tuple(-x for x in reversed(letters))


def letter_key(x: int) -> int:
    # generator index first, then +1 before -1
    return 2 * (abs(x) - 1) + (x < 0)


def cyclic_core(letters: tuple[int, ...]) -> tuple[tuple[int, ...], int]:
    """Split a reduced word as h . core . h^-1; returns (core, len(h))."""
    i, j = 0, len(letters) - 1
    while i < j and letters[i] == -letters[j]:
        i += 1
        j -= 1
    return letters[i : j + 1], i


def least_rotation(letters: tuple[int, ...]) -> int:
    """Index of the lexicographically least rotation (Booth's algorithm)."""
    s = [letter_key(x) for x in letters]
    n = len(s)
    if n == 0:
        return 0
    s = s + s
    f = [-1] * len(s)
    k = 0
    for j in range(1, len(s)):
        sj = s[j]
        i = f[j - k - 1]
        while i != -1 and sj != s[k + i + 1]:
            if sj < s[k + i + 1]:
                k = j - i - 1
            i = f[i]
        if sj != s[k + i + 1]:
            if sj < s[k]:
                k = j
            f[j - k] = -1
        else:
            f[j - k] = i + 1
    return k % n


def canonical_cyclic(letters: tuple[int, ...]) -> tuple[int, ...]:
    """Canonical cyclic representative of a reduced word's conjugacy class."""
    core, _ = cyclic_core(letters)
    i = least_rotation(core)
    return core[i:] + core[:i]


# -- public value types ---------------------------------------------------


@dataclass(frozen=True)
class Word:
    alphabet: Alphabet
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = tuple(self.letters)
        rank = self.alphabet.rank
        for x in letters:
            if x == 0 or abs(x) > rank:
                raise ValueError(f"letter {x} outside alphabet of rank {rank}")
        object.__setattr__(self, "letters", reduce_letters(letters))

    @classmethod
    def identity(cls, alphabet: Alphabet) -> "Word":
        return cls(alphabet, ())

    @classmethod
    def generator(cls, alphabet: Alphabet, index: int, sign: int = 1) -> "Word":
        return cls(alphabet, (sign * (index + 1),))

    def __len__(self) -> int:
        return len(self.letters)

    def __bool__(self) -> bool:
        return bool(self.letters)

    def __mul__(self, other: "Word") -> "Word":
        return multiply(self, other)

    def __invert__(self) -> "Word":
        return invert(self)

    def __pow__(self, n: int) -> "Word":
        base = self if n >= 0 else invert(self)
        return Word(self.alphabet, base.letters * abs(n))

    def __str__(self) -> str:
        return format_word(self)

    @property
    def cyclic_length(self) -> int:
        return len(cyclic_core(self.letters)[0])


@dataclass(frozen=True)
class CyclicWord:
    """A cyclically reduced word in canonical (least) rotation."""

    alphabet: Alphabet
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        letters = canonical_cyclic(reduce_letters(self.letters))
        object.__setattr__(self, "letters", letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_letters(self.letters, self.alphabet)

    def word(self) -> Word:
        return Word(self.alphabet, self.letters)


def _check(u: Word, v: Word) -> None:
    if u.alphabet != v.alphabet:
        raise AlphabetMismatch(f"alphabets differ: {u.alphabet} vs {v.alphabet}")


def multiply(u: Word, v: Word) -> Word:
    _check(u, v)
    return Word(u.alphabet, u.letters + v.letters)


def invert(u: Word) -> Word:
    return Word(u.alphabet, invert_letters(u.letters))


def cyclic_reduce(u: Word) -> tuple[CyclicWord, Word]:
    """Return ``(c, g)`` with ``u == g * c.word() * ~g`` exactly."""
    core, k = cyclic_core(u.letters)
    i = least_rotation(core)
    conj = Word(u.alphabet, u.letters[:k] + core[:i])
    return CyclicWord(u.alphabet, core[i:] + core[:i]), conj


def conjugate_equal(u: Word, v: Word) -> bool:
    _check(u, v)
    return canonical_cyclic(u.letters) == canonical_cyclic(v.letters)


def conjugator(u: Word, v: Word) -> Word | None:
    """An element g with ``u == g v g^-1``, or None when u, v are not conjugate."""
    _check(u, v)
    cu, gu = cyclic_reduce(u)
    cv, gv = cyclic_reduce(v)
    if cu != cv:
        return None
    return gu * ~gv


def exponent_sums(u: Word) -> tuple[int, ...]:
    sums = [0] * u.alphabet.rank
    for x in u.letters:
        sums[abs(x) - 1] += 1 if x > 0 else -1
    return tuple(sums)


# -- text grammar ---------------------------------------------------------


def format_letters(letters: Sequence[int], alphabet: Alphabet) -> str:
    if not letters:
        return "1"
    terms = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        name = alphabet.names[abs(letters[i]) - 1]
        power = (j - i) * (1 if letters[i] > 0 else -1)
        terms.append(name if power == 1 else f"{name}^{power}")
        i = j
    return " ".join(terms)


def format_word(u: Word) -> str:
    return format_letters(u.letters, u.alphabet)


def parse_word(text: str, alphabet: Alphabet) -> Word:
    """Parse ``term*`` where ``term := NAME ("^" "-"? DIGITS)?``.

    An uppercase single letter ``X`` stands for ``x^-1``; ``1`` alone is the
    identity.
    """
    names = sorted(alphabet.names, key=len, reverse=True)
    letters: list[int] = []
    pos, n = 0, len(text)
    if text.strip() == "1":
        return Word.identity(alphabet)
    while pos < n:
        ch = text[pos]
        if ch.isspace():
            pos += 1
            continue
        start = pos
        sign = 1
        gen = None
        for name in names:
            if text.startswith(name, pos):
                gen = alphabet.index(name)
                pos += len(name)
                break
        if gen is None:
            if ch.isupper() and ch.lower() in alphabet.names:
                gen = alphabet.index(ch.lower())
                sign = -1
                pos += 1
            elif ch.isalpha():
                raise UnknownGenerator(f"unknown generator {ch!r}", text, start)
            else:
                raise WordSyntaxError(f"unexpected character {ch!r}", text, start)
        power = 1
        if pos < n and text[pos] == "^":
            m = re.compile(r"\^(-?)(\d+)").match(text, pos)
            if m is None:
                raise WordSyntaxError("malformed exponent", text, pos)
            power = int(m.group(2)) * (-1 if m.group(1) else 1)
            pos = m.end()
        x = sign * (gen + 1)
        if power < 0:
            x, power = -x, -power
        letters.extend([x] * power)
    return Word(alphabet, letters)

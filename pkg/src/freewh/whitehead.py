"""Whitehead automorphisms, minimisation and the automorphism-equivalence test.

Everything works on cyclic words: two elements are equivalent under Aut(F)
exactly when their conjugacy classes are, since inner automorphisms are
automorphisms.
"""

from __future__ import annotations

import itertools
import logging
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Iterable, Sequence, Union

from .morphisms import GenMap, apply_letters, compose, inner
from .words import (
    Alphabet,
    AlphabetMismatch,
    CyclicWord,
    Word,
    canonical_cyclic,
    conjugator,
    cyclic_core,
    format_letters,
    invert,
    letter_key,
)

log = logging.getLogger(__name__)

DEFAULT_BUDGET = 5_000_000


class OrbitBudgetExceeded(RuntimeError):
    def __init__(self, partial_size: int, budget: int):
        super().__init__(
            f"orbit exceeded budget {budget} (at least {partial_size} members); "
            "raise the budget"
        )
        self.partial_size = partial_size
        self.budget = budget


def _letters(rank: int) -> list[int]:
    return sorted(
        [x for i in range(1, rank + 1) for x in (i, -i)], key=letter_key
    )


@dataclass(frozen=True)
class TypeIAuto:
    """Signed permutation: generator i goes to letter ``perm[i]``."""

    alphabet: Alphabet
    perm: tuple[int, ...]
    genmap: GenMap = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        if sorted(abs(x) for x in self.perm) != list(range(1, self.alphabet.rank + 1)):
            raise ValueError(f"not a signed permutation: {self.perm}")
        if self.genmap is None:
            A = self.alphabet
            fwd = GenMap(A, A, tuple(Word(A, (x,)) for x in self.perm))
            back = [0] * A.rank
            for i, x in enumerate(self.perm):
                back[abs(x) - 1] = (i + 1) if x > 0 else -(i + 1)
            bwd = GenMap(A, A, tuple(Word(A, (x,)) for x in back))
            object.__setattr__(self, "genmap", fwd.with_inverse(bwd))

    kind = "I"

    @property
    def is_identity(self) -> bool:
        return self.perm == tuple(range(1, len(self.perm) + 1))

    def inverse(self) -> "TypeIAuto":
        return TypeIAuto(self.alphabet, tuple(w.letters[0] for w in self.genmap.inverse.images))

    def to_json(self) -> dict:
        return {"type": "I", "perm": [self.alphabet.letter_name(x) for x in self.perm]}

    def __str__(self) -> str:
        return "I[" + ", ".join(
            f"{n}->{self.alphabet.letter_name(x)}"
            for n, x in zip(self.alphabet.names, self.perm)
        ) + "]"


@dataclass(frozen=True)
class TypeIIAuto:
    """The (A, a) automorphism: x -> x, xa, a^-1 x or a^-1 x a."""

    alphabet: Alphabet
    multiplier: int
    cut_set: frozenset[int]
    genmap: GenMap = field(compare=False, repr=False, default=None)

    def __post_init__(self):
        a, A = self.multiplier, frozenset(self.cut_set)
        object.__setattr__(self, "cut_set", A)
        if a not in A or -a in A:
            raise ValueError("cut set must contain the multiplier but not its inverse")
        if self.genmap is None:
            fwd = _type_ii_genmap(self.alphabet, a, A)
            bwd = _type_ii_genmap(self.alphabet, -a, (A - {a}) | {-a})
            object.__setattr__(self, "genmap", fwd.with_inverse(bwd))

    kind = "II"

    @property
    def is_identity(self) -> bool:
        return self.cut_set == {self.multiplier}

    def inverse(self) -> "TypeIIAuto":
        a = self.multiplier
        return TypeIIAuto(self.alphabet, -a, (self.cut_set - {a}) | {-a})

    def to_json(self) -> dict:
        name = self.alphabet.letter_name
        return {
            "type": "II",
            "multiplier": name(self.multiplier),
            "cut_set": [name(x) for x in sorted(self.cut_set, key=letter_key)],
        }

    def __str__(self) -> str:
        name = self.alphabet.letter_name
        cut = ", ".join(name(x) for x in sorted(self.cut_set, key=letter_key))
        return f"II[{name(self.multiplier)}; {{{cut}}}]"


WhiteheadAuto = Union[TypeIAuto, TypeIIAuto]


def _type_ii_genmap(alphabet: Alphabet, a: int, A: frozenset[int]) -> GenMap:
    images = []
    for i in range(alphabet.rank):
        x = i + 1
        if x == abs(a):
            images.append(Word(alphabet, (x,)))
            continue
        img = (x,)
        if -x in A:
            img = (-a,) + img
        if x in A:
            img = img + (a,)
        images.append(Word(alphabet, img))
    return GenMap(alphabet, alphabet, tuple(images))


def enumerate_type_ii(alphabet: Alphabet) -> list[TypeIIAuto]:
    """All (A, a) pairs, 2n * 2^(2n-2) of them; ``is_identity`` flags A = {a}."""
    letters = _letters(alphabet.rank)
    out = []
    for a in letters:
        others = [x for x in letters if x not in (a, -a)]
        for bits in range(2 ** len(others)):
            A = {a} | {x for k, x in enumerate(others) if bits >> k & 1}
            out.append(TypeIIAuto(alphabet, a, frozenset(A)))
    return out


def enumerate_type_i(alphabet: Alphabet) -> list[TypeIAuto]:
    n = alphabet.rank
    out = []
    for p in itertools.permutations(range(1, n + 1)):
        for signs in itertools.product((1, -1), repeat=n):
            out.append(TypeIAuto(alphabet, tuple(s * x for s, x in zip(signs, p))))
    return out


def distinct_type_ii(alphabet: Alphabet) -> list[TypeIIAuto]:
    """Type II automorphisms with pairwise distinct, non-identity tables."""
    seen = set()
    out = []
    for t in enumerate_type_ii(alphabet):
        key = t.genmap.images
        if t.genmap.is_identity() or key in seen:
            continue
        seen.add(key)
        out.append(t)
    return out


def replay(autos: Iterable[WhiteheadAuto], u: Word) -> Word:
    """Apply the automorphisms in order (first element first)."""
    letters = u.letters
    for t in autos:
        letters = apply_letters(t.genmap, letters)
    return Word(u.alphabet, letters)


def witness_map(autos: Sequence[WhiteheadAuto], alphabet: Alphabet) -> GenMap:
    m = GenMap.identity(alphabet)
    for t in autos:
        m = compose(t.genmap, m)
    return m


# -- fast kernels ---------------------------------------------------------


class _Tables:
    """Letter substitution tables for a list of automorphisms."""

    def __init__(self, autos: Sequence[WhiteheadAuto], rank: int):
        self.rank = rank
        self.tables = []
        for t in autos:
            row: list[tuple[int, ...]] = [()] * (2 * rank + 1)
            for i, img in enumerate(t.genmap.images):
                row[rank + i + 1] = img.letters
                row[rank - i - 1] = tuple(-y for y in reversed(img.letters))
            self.tables.append(row)

    def image(self, k: int, letters: tuple[int, ...]) -> tuple[int, ...]:
        row = self.tables[k]
        n = self.rank
        out: list[int] = []
        for x in letters:
            for y in row[x + n]:
                if out and out[-1] == -y:
                    out.pop()
                else:
                    out.append(y)
        return tuple(out)

    def cyclic_image(self, k: int, letters: tuple[int, ...]) -> tuple[int, ...]:
        return cyclic_core(self.image(k, letters))[0]


_worker_tables: _Tables | None = None


def _init_worker(tables: _Tables) -> None:
    global _worker_tables
    _worker_tables = tables


def _expand_chunk(chunk: list[tuple[int, ...]], length: int):
    tables = _worker_tables
    found = []
    for w in chunk:
        for k in range(len(tables.tables)):
            img = tables.cyclic_image(k, w)
            if len(img) == length:
                found.append((canonical_cyclic(img), w, k))
    return found


# -- minimisation ---------------------------------------------------------


def minimize(u: Word) -> tuple[CyclicWord, list[TypeIIAuto]]:
    """Greedy Whitehead descent on cyclic length.

    Each step applies the first Type II automorphism (in enumeration order)
    achieving the largest decrease; stops when none strictly decreases.
    """
    autos = distinct_type_ii(u.alphabet)
    tables = _Tables(autos, u.alphabet.rank)
    current = canonical_cyclic(u.letters)
    witness: list[TypeIIAuto] = []
    while current:
        best_len, best_k, best_img = len(current), None, None
        for k in range(len(autos)):
            img = tables.cyclic_image(k, current)
            if len(img) < best_len:
                best_len, best_k, best_img = len(img), k, img
        if best_k is None:
            break
        witness.append(autos[best_k])
        current = canonical_cyclic(best_img)
    return CyclicWord(u.alphabet, current), witness


# -- orbits ---------------------------------------------------------------


@dataclass
class Orbit:
    seed: CyclicWord
    min_form: CyclicWord
    min_length: int
    min_witness: list[TypeIIAuto]
    _members: dict[tuple[int, ...], tuple[tuple[int, ...] | None, WhiteheadAuto | None]]

    @property
    def alphabet(self) -> Alphabet:
        return self.seed.alphabet

    def __len__(self) -> int:
        return len(self._members)

    def __contains__(self, w: Word | CyclicWord) -> bool:
        if w.alphabet != self.alphabet:
            raise AlphabetMismatch("query word over a different alphabet")
        return canonical_cyclic(w.letters) in self._members

    @property
    def members(self) -> frozenset[CyclicWord]:
        A = self.alphabet
        return frozenset(CyclicWord(A, m) for m in self._members)

    @property
    def member_keys(self) -> frozenset[tuple[int, ...]]:
        return frozenset(self._members)

    def path_from_min(self, w: Word | CyclicWord) -> list[WhiteheadAuto]:
        """Automorphisms taking the minimised seed to the class of ``w``."""
        key = canonical_cyclic(w.letters)
        if key not in self._members:
            raise KeyError(f"{format_letters(key, self.alphabet)} not in orbit")
        path = []
        while True:
            parent, auto = self._members[key]
            if parent is None:
                break
            path.append(auto)
            key = parent
        path.reverse()
        return path

    def witness(self, w: Word | CyclicWord) -> list[WhiteheadAuto]:
        """Automorphisms taking the seed itself to the class of ``w``."""
        return list(self.min_witness) + self.path_from_min(w)

    def report(self, queries: Sequence[Word] = ()) -> dict:
        return {
            "schema": 1,
            "seed": str(self.seed),
            "min_length": self.min_length,
            "orbit_size": len(self),
            "contains": [{"word": str(q), "member": q in self} for q in queries],
        }


def orbit(
    u: Word,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
    type_i: bool = True,
) -> Orbit:
    """Minimal-length automorphism orbit of the cyclic class of ``u``.

    Phase one closes the minimised form under Type II moves that keep cyclic
    length; phase two applies every signed permutation once.
    """
    if budget <= 0:
        raise ValueError("budget must be positive")
    A = u.alphabet
    min_form, min_witness = minimize(u)
    length = len(min_form)
    root = min_form.letters
    members: dict = {root: (None, None)}
    autos = distinct_type_ii(A)
    tables = _Tables(autos, A.rank)

    def add(img, parent, auto):
        if img not in members:
            members[img] = (parent, auto)
            if len(members) > budget:
                raise OrbitBudgetExceeded(len(members), budget)
            return True
        return False

    frontier = [root]
    pool = None
    if threads > 1 and length > 0:
        pool = ProcessPoolExecutor(threads, initializer=_init_worker, initargs=(tables,))
    try:
        while frontier and length > 0:
            new = []
            if pool is None:
                for w in frontier:
                    for k in range(len(autos)):
                        img = tables.cyclic_image(k, w)
                        if len(img) == length:
                            img = canonical_cyclic(img)
                            if add(img, w, autos[k]):
                                new.append(img)
            else:
                size = max(1, len(frontier) // (4 * threads))
                chunks = [frontier[i : i + size] for i in range(0, len(frontier), size)]
                for found in pool.map(_expand_chunk, chunks, itertools.repeat(length)):
                    for img, w, k in found:
                        if add(img, w, autos[k]):
                            new.append(img)
            frontier = new
    finally:
        if pool is not None:
            pool.shutdown()
    if type_i:
        perms = [t for t in enumerate_type_i(A) if not t.is_identity]
        ptables = _Tables(perms, A.rank)
        for w in list(members):
            for k in range(len(perms)):
                add(canonical_cyclic(ptables.image(k, w)), w, perms[k])
    log.debug("orbit of %s: %d members at length %d", u, len(members), length)
    return Orbit(CyclicWord(A, u.letters), min_form, length, min_witness, members)


def orbit_interleaved(u: Word, budget: int = DEFAULT_BUDGET) -> frozenset[tuple[int, ...]]:
    """Closure of the minimised form under both types at once (no phases)."""
    A = u.alphabet
    min_form, _ = minimize(u)
    length = len(min_form)
    autos = distinct_type_ii(A) + [t for t in enumerate_type_i(A) if not t.is_identity]
    tables = _Tables(autos, A.rank)
    seen = {min_form.letters}
    queue = deque(seen)
    while queue:
        w = queue.popleft()
        for k in range(len(autos)):
            img = tables.cyclic_image(k, w)
            if len(img) == length:
                img = canonical_cyclic(img)
                if img not in seen:
                    seen.add(img)
                    if len(seen) > budget:
                        raise OrbitBudgetExceeded(len(seen), budget)
                    queue.append(img)
    return frozenset(seen)


# -- decisions ------------------------------------------------------------


@dataclass
class Equivalence:
    verdict: bool
    source: Word
    target: Word
    witness: list[WhiteheadAuto] | None = None
    orbit_size: int = 0
    min_length: int = 0

    def __bool__(self) -> bool:
        return self.verdict

    def witness_map(self) -> GenMap | None:
        """An automorphism sending ``source`` exactly to ``target``."""
        if self.witness is None:
            return None
        m = witness_map(self.witness, self.source.alphabet)
        g = conjugator(m(self.source), self.target)
        if g is None:
            raise AssertionError("witness does not replay to the target class")
        return compose(inner(~g), m)

    def to_json(self) -> dict:
        out = {
            "schema": 1,
            "source": str(self.source),
            "target": str(self.target),
            "equivalent": self.verdict,
            "min_length": self.min_length,
            "orbit_size": self.orbit_size,
        }
        if self.witness is not None:
            out["witness"] = [t.to_json() for t in self.witness]
            out["map"] = self.witness_map().to_json()
        return out


def equivalent(
    u: Word, v: Word, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> Equivalence:
    if u.alphabet != v.alphabet:
        raise AlphabetMismatch("words over different alphabets")
    min_v, wit_v = minimize(v)
    min_u, _ = minimize(u)
    if len(min_u) != len(min_v):
        return Equivalence(False, u, v, min_length=len(min_u))
    orb = orbit(u, budget, threads)
    if min_v not in orb:
        return Equivalence(False, u, v, orbit_size=len(orb), min_length=orb.min_length)
    back = [t.inverse() for t in reversed(wit_v)]
    return Equivalence(
        True, u, v, orb.witness(min_v) + back, len(orb), orb.min_length
    )


def inverse_equivalent(u: Word, budget: int = DEFAULT_BUDGET, threads: int = 1) -> Equivalence:
    return equivalent(u, invert(u), budget, threads)


def is_primitive(u: Word, budget: int = DEFAULT_BUDGET) -> bool:
    return len(minimize(u)[0]) == 1


def primitive_witness(u: Word) -> GenMap | None:
    """An automorphism sending the first generator to ``u``, if u is primitive."""
    if len(minimize(u)[0]) != 1:
        return None
    return equivalent(Word.generator(u.alphabet, 0), u).witness_map()

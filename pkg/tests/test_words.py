import pytest
from hypothesis import given, strategies as st

import oracles as O
from freewh.words import (
    Alphabet,
    AlphabetMismatch,
    CyclicWord,
    UnknownGenerator,
    Word,
    WordSyntaxError,
    canonical_cyclic,
    conjugate_equal,
    conjugator,
    cyclic_reduce,
    exponent_sums,
    format_word,
    parse_word,
)

F3 = Alphabet(("a", "b", "c"))
GENS = "abc"


def raw_words(rank=3, max_size=14):
    return st.lists(
        st.sampled_from([s * i for i in range(1, rank + 1) for s in (1, -1)]),
        max_size=max_size,
    )


def test_alphabet_validation():
    assert Alphabet.parse("a, b ,c") == F3
    assert Alphabet.standard(2).names == ("a", "b")
    for bad in (("a", "a"), ("A",), ("1x",), ("x_y",), ()):
        with pytest.raises(ValueError):
            Alphabet(bad)
    Alphabet(("p1", "q2", "x"))


def test_parse_and_format():
    w = parse_word("a^2c^2ac^-1", F3)
    assert w.letters == (1, 1, 3, 3, 1, -3)
    assert format_word(w) == "a^2 c^2 a c^-1"
    assert parse_word("aaccaC", F3) == w
    assert parse_word("c a^-1 c^-2 a^-2", F3) == ~w
    assert str(parse_word("aA", F3)) == "1"
    assert parse_word("1", F3) == Word.identity(F3)
    assert parse_word("a^0 b", F3) == parse_word("b", F3)


def test_parse_multichar_names():
    A = Alphabet(("x", "y", "p1", "p2", "q1"))
    w = parse_word("p1 x p1^-1 q1^2", A)
    assert w.letters == (3, 1, -3, 5, 5)
    assert str(w) == "p1 x p1^-1 q1^2"


def test_parse_errors_carry_position():
    with pytest.raises(UnknownGenerator) as e:
        parse_word("ab d", F3)
    assert e.value.position == 3
    with pytest.raises(WordSyntaxError) as e:
        parse_word("a^", F3)
    assert e.value.position == 1
    with pytest.raises(WordSyntaxError):
        parse_word("a+b", F3)


def test_alphabet_mismatch():
    with pytest.raises(AlphabetMismatch):
        Word(F3, (1,)) * Word(Alphabet(("a", "b")), (1,))


@given(raw_words())
def test_reduction_matches_oracle(letters):
    s = O.from_letters(GENS, tuple(letters))
    assert O.from_letters(GENS, Word(F3, letters).letters) == O.reduce(s)


@given(raw_words())
def test_canonical_cyclic_matches_brute_force(letters):
    u = Word(F3, letters)
    got = O.from_letters(GENS, canonical_cyclic(u.letters))
    assert got == O.canonical(GENS, O.from_letters(GENS, u.letters))


@given(raw_words())
def test_cyclic_reduce_decomposition_exact(letters):
    u = Word(F3, letters)
    c, g = cyclic_reduce(u)
    assert g * c.word() * ~g == u


@given(raw_words(), raw_words(max_size=6))
def test_conjugator(letters, h):
    u = Word(F3, letters)
    g = Word(F3, h)
    v = g * u * ~g
    assert conjugate_equal(u, v)
    k = conjugator(v, u)
    assert k is not None and k * u * ~k == v


@given(raw_words(), raw_words())
def test_inverse_and_product_laws(x, y):
    u, v = Word(F3, x), Word(F3, y)
    assert ~(u * v) == ~v * ~u
    assert u * ~u == Word.identity(F3)
    assert parse_word(str(u), F3) == u


def test_not_conjugate():
    a = parse_word("a", F3)
    assert conjugator(a, ~a) is None
    assert not conjugate_equal(parse_word("ab", F3), parse_word("ba^-1", F3))


def test_cyclic_word_and_sums():
    c = CyclicWord(F3, parse_word("c a a c b", F3).letters)
    assert str(c) == "a^2 c b c"
    assert parse_word("a^2c^2ac^-1", F3).cyclic_length == 6
    assert exponent_sums(parse_word("a^2c^2ac^-1", F3)) == (3, 0, 1)
    assert len(CyclicWord(F3, parse_word("b a c A B", F3).letters)) == 1

import pytest
from hypothesis import given, strategies as st

from freewh.morphisms import (
    GenMap,
    compose,
    compose_all,
    equal_up_to_inner,
    inner,
    inner_conjugator,
    is_automorphism,
)
from freewh.whitehead import enumerate_type_i, enumerate_type_ii
from freewh.words import Alphabet, AlphabetMismatch, Word, parse_word

F3 = Alphabet(("a", "b", "c"))
TYPE_II = enumerate_type_ii(F3)
TYPE_I = enumerate_type_i(F3)

words = st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=12).map(lambda l: Word(F3, l))
autos = st.sampled_from([t.genmap for t in TYPE_II + TYPE_I])


def test_identity_and_json():
    m = GenMap.from_strings(["a b", "b", "c a^-1"], F3)
    assert GenMap.from_json(m.to_json()) == m
    assert GenMap.identity(F3).is_identity()
    assert str(m) == "a->a b, b->b, c->c a^-1"
    with pytest.raises(ValueError):
        GenMap.from_strings(["a"], F3)


@given(autos, autos, autos, words)
def test_composition_associative_and_applied_inner_first(f, g, h, u):
    assert compose(f, compose(g, h)) == compose(compose(f, g), h)
    assert compose(f, g)(u) == f(g(u))


@given(autos, autos, words)
def test_inverses_propagate(f, g, u):
    m = compose(f, g)
    assert m.inverse is not None
    assert m.inverse(m(u)) == u
    assert m(m.inverse(u)) == u


def test_compose_all_order():
    f = GenMap.from_strings(["a b", "b", "c"], F3)
    g = GenMap.from_strings(["a", "c", "b"], F3)
    assert compose_all([f, g], F3) == compose(g, f)


def test_mismatch():
    F2 = Alphabet(("a", "b"))
    with pytest.raises(AlphabetMismatch):
        compose(GenMap.identity(F2), GenMap.identity(F3))


@given(words, words)
def test_inner_conjugator(g, u):
    m = inner(g)
    h = inner_conjugator(m)
    assert h is not None and inner(h).images == m.images
    assert m(u) == g * u * ~g


def test_not_inner():
    assert inner_conjugator(GenMap.from_strings(["b", "a", "c"], F3)) is None
    assert inner_conjugator(GenMap.from_strings(["a b", "b", "c"], F3)) is None


def test_equal_up_to_inner():
    f = TYPE_II[5].genmap
    g = parse_word("b c^-1 a", F3)
    assert equal_up_to_inner(compose(inner(g), f), f)
    assert not equal_up_to_inner(f, GenMap.identity(F3))
    # the (a; all letters but a^-1) automorphism is conjugation by a^-1
    full = next(t for t in TYPE_II if t.multiplier == 1 and len(t.cut_set) == 5)
    assert equal_up_to_inner(full.genmap, GenMap.identity(F3))


def test_is_automorphism_certificates():
    m = GenMap.from_strings(["a b", "b", "c"], F3)  # Type II shape, no carried inverse
    w = is_automorphism(m)
    assert w is not None and compose(w.backward, m).is_identity()
    assert is_automorphism(GenMap.from_strings(["c^-1", "a", "b"], F3)) is not None
    assert is_automorphism(GenMap.from_strings(["a^2", "b", "c"], F3)) is None
    assert is_automorphism(GenMap.from_strings(["a", "a", "c"], F3)) is None

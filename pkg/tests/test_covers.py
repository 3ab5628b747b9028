import json

import pytest
from hypothesis import given, strategies as st

import oracles as O
from freewh.covers import (
    CoverData,
    FixtureError,
    NotInSubgroup,
    embed,
    in_subgroup,
    klein_cover,
    load_cover,
    rewrite,
)
from freewh.whitehead import equivalent, inverse_equivalent
from freewh.words import AlphabetMismatch, Word, exponent_sums, parse_word

COVER = load_cover()
V = parse_word("x^4 x Y x Y x^2 y X", COVER.ambient)


def test_fixture_matches_construction():
    assert COVER == klein_cover()
    assert [str(g) for g in COVER.gen_table] == ["y x^-1", "x^2", "x y"]
    assert CoverData.from_json(COVER.to_json()) == COVER


def test_source_word():
    assert str(V) == "x^5 y^-1 x y^-1 x^2 y x^-1"
    assert exponent_sums(V) == (7, -1)
    assert in_subgroup(V, COVER)
    lift = rewrite(V, COVER)
    assert str(lift) == "b^2 a^-2 b a"
    assert embed(lift, COVER) == V


def test_lift_equivalence():
    w = parse_word("a^2 c^2 a c^-1", COVER.subgroup)
    lift = rewrite(V, COVER)
    assert equivalent(lift, w)
    assert not inverse_equivalent(lift)


def test_not_in_subgroup():
    with pytest.raises(NotInSubgroup):
        rewrite(parse_word("x", COVER.ambient), COVER)
    with pytest.raises(AlphabetMismatch):
        rewrite(parse_word("a", COVER.subgroup), COVER)


kernel_words = st.lists(st.sampled_from(list("xyXY")), max_size=30).map(O.reduce).filter(
    O.in_parity_kernel
)


@given(kernel_words)
def test_rewrite_matches_oracle_embedding(s):
    u = Word(COVER.ambient, O.to_letters("xy", s))
    lift = rewrite(u, COVER)
    assert O.parity_rewrite_embed(O.from_letters("abc", lift.letters)) == s


@given(st.lists(st.sampled_from([1, -1, 2, -2, 3, -3]), max_size=10))
def test_embed_then_rewrite(letters):
    s = Word(COVER.subgroup, letters)
    assert rewrite(embed(s, COVER), COVER) == s


def _corrupt(**changes):
    data = COVER.to_json()
    data.update(changes)
    return data


@pytest.mark.parametrize(
    "changes, invariant",
    [
        ({"gen_table": ["y x^-1", "x^2", "y x"]}, "gen_table"),
        ({"gen_table": ["y", "x^2", "x y"]}, "gen_table"),
        ({"parity": {"x": 0, "y": 0}}, "parity"),
        ({"transversal": ["1", "x^2"]}, "transversal"),
        ({"ambient": ["x", "y"], "gen_table": ["y x^-1", "x^2"]}, "gen_table"),
        ({"subgroup": ["a", "B", "c"]}, "schema"),
    ],
)
def test_corrupted_fixture_names_invariant(changes, invariant, tmp_path):
    path = tmp_path / "cover.json"
    path.write_text(json.dumps(_corrupt(**changes)))
    with pytest.raises(FixtureError) as e:
        load_cover(path)
    assert e.value.invariant == invariant

import json
import random

import pytest
from hypothesis import given, settings, strategies as st

from freewh import geometry as geo
from freewh import surface
from freewh.covers import FixtureError
from freewh.morphisms import GenMap, compose
from freewh.words import AlphabetMismatch, Word, conjugate_equal, parse_word

TABLE, SYMS = surface.load_push_table()
KEEPS = surface.load_keep_maps()
A = TABLE.alphabet
LOOPS = {lab: Word(A, surface.standard_config().puncture_word(lab)) for lab in surface.LABELS}
VHAT = surface.vhat_path()


def random_word(rng, alphabet, n):
    return Word(alphabet, [rng.choice([1, -1]) * rng.randint(1, alphabet.rank) for _ in range(n)])


@pytest.mark.slow
def test_fixtures_regenerate_identically(tmp_path):
    surface.write_fixtures(tmp_path)
    for name in (surface.PUSH_FIXTURE, surface.KEEP_FIXTURE):
        assert json.loads((tmp_path / name).read_text()) == surface._read(name, None)


def test_vhat_path():
    assert str(VHAT) == "x^5 y^-1 x y^-1 x^2 y x^-1"


def test_moves_invertible_on_random_words():
    rng = random.Random(11)
    for name, m in TABLE.moves.items():
        for _ in range(100):
            u = random_word(rng, A, rng.randint(0, 12))
            assert m.inverse(m(u)) == u and m(m.inverse(u)) == u, name


def test_moves_preserve_puncture_loops():
    for name, m in TABLE.moves.items():
        swap = name in ("x", "y")
        for lab, w in LOOPS.items():
            partner = {"p1": "p2", "p2": "p1"}.get(lab, lab) if swap else lab
            assert conjugate_equal(m(w), LOOPS[partner]), (name, lab)


def test_pushed_point_loop_preserved_along_paths():
    rng = random.Random(3)
    names = [n for n in surface.MOVE_NAMES if n not in ("x", "y")]
    for _ in range(20):
        path = [rng.choice(names) + rng.choice(["", "^-1"]) for _ in range(3)]
        m = surface.push_along(path, TABLE)
        for lab, w in LOOPS.items():
            assert conjugate_equal(m(w), w)


def test_push_along_basics():
    assert surface.push_along([], TABLE).is_identity()
    assert surface.push_along("p1q1 p1q1^-1", TABLE).is_identity()
    assert surface.push_along(["x", "x^-1"], TABLE).is_identity()
    assert surface.push_along("x y", TABLE) == compose(TABLE["y"], TABLE["x"])
    with pytest.raises(surface.UnknownMove):
        surface.push_along(["p3h"], TABLE)
    with pytest.raises(Exception):
        surface.push_along("z", TABLE)


def test_vhat_is_pure_and_direct_motion_agrees():
    m = surface.push_along(VHAT, TABLE)
    for lab, w in LOOPS.items():
        assert conjugate_equal(m(w), w)
    config = surface.standard_config()
    p1 = config.position("p1")
    pts, h = [p1], geo.IDENTITY
    for x in VHAT.letters:
        g = surface.KLEIN[surface.MOVE_NAMES[abs(x) - 1]]
        h = h @ (g if x > 0 else g.inverse())
        pts.append(h(p1))
    direct = geo.motion_map(config, {"p1": pts, "p2": [surface.TAU(p) for p in pts]})
    assert direct.images == m.images


def test_equivariance_all_symmetries_all_moves():
    for name, s in SYMS.items():
        for move in surface.MOVE_NAMES:
            assert surface.equivariance_check(s.map, [move], TABLE, s.renamed()), (name, move)


def test_equivariance_deck_on_vhat():
    tau = SYMS["tau"]
    assert surface.equivariance_check(tau.map, VHAT, TABLE, tau.renamed())


@settings(max_examples=25, deadline=None)
@given(
    st.sampled_from(sorted(SYMS)),
    st.lists(st.tuples(st.sampled_from(surface.MOVE_NAMES), st.booleans()), max_size=3),
)
def test_equivariance_random_paths(sym, steps):
    s = SYMS[sym]
    path = [n + ("^-1" if inv else "") for n, inv in steps]
    assert surface.equivariance_check(s.map, path, TABLE, s.renamed())


def test_equivariance_wrong_renaming_detected():
    tau = SYMS["tau"]
    wrong = {n: n for n in surface.MOVE_NAMES}
    assert not surface.equivariance_check(tau.map, ["p1q1"], TABLE, wrong)
    with pytest.raises(surface.InconsistentRenaming):
        surface.equivariance_check(tau.map, ["p1q1"], TABLE, {"x": "x"})


def test_test_curves():
    k = KEEPS["p1", "p2"]
    curves = surface.test_curves(k.target)
    assert len(curves) == 24
    assert str(curves[0]) == "x"


def test_keep_identity():
    for k in KEEPS.values():
        assert surface.keep(GenMap.identity(A), k).is_identity()


def test_keep_forgetting_pushed_point_is_trivial():
    for name in surface.MOVE_NAMES[2:]:
        pushed = "p1" if name.startswith("p1") else "p2"
        for pair, k in KEEPS.items():
            km = surface.keep(TABLE[name], k)
            if pushed not in pair:
                assert surface.acts_trivially(km, surface.test_curves(k.target)), (name, pair)


def test_keep_rejects_maps_mixing_kept_and_forgotten():
    with pytest.raises(ValueError):
        surface.keep(TABLE["x"], KEEPS["p1", "q1"])
    with pytest.raises(AlphabetMismatch):
        surface.keep(GenMap.identity(KEEPS["p1", "p2"].target), KEEPS["p1", "p2"])


def test_keep_is_homomorphic_on_curves():
    rng = random.Random(5)
    pure = [n for n in surface.MOVE_NAMES if n not in ("x", "y")]
    for pair, k in KEEPS.items():
        curves = surface.test_curves(k.target)
        for _ in range(4):
            m1 = surface.push_along([rng.choice(pure) for _ in range(2)], TABLE)
            m2 = surface.push_along([rng.choice(pure) for _ in range(2)], TABLE)
            lhs = surface.keep(compose(m1, m2), k)
            rhs = compose(surface.keep(m1, k), surface.keep(m2, k))
            for c in curves:
                assert conjugate_equal(lhs(c), rhs(c))


def test_keep_verdicts_for_inverse_lift():
    m = surface.push_along(VHAT, TABLE).inverse
    for pair, k in KEEPS.items():
        trivial = surface.acts_trivially(surface.keep(m, k), surface.test_curves(k.target))
        assert trivial == (pair == ("q1", "q2")), pair
    assert surface.keep(m, KEEPS["q1", "q2"]).is_identity()


def test_klein_lifts_form_basis():
    info = surface.klein_lift_basis()
    assert info["basis"]
    assert info["lifts"] == {"a": "y^-2 x^-1 y", "b": "y^-1 x y", "c": "q1 y"}


def _load_corrupt(tmp_path, mutate, name=surface.PUSH_FIXTURE):
    data = surface._read(name, None)
    mutate(data)
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return path


@pytest.mark.parametrize(
    "mutate, invariant",
    [
        (lambda d: d["moves"]["p1h"]["images"].__setitem__(0, "x^2"), "automorphism"),
        (lambda d: d["moves"]["x"].__setitem__("moving", []), "conjugacy"),
        (lambda d: d["symmetries"]["tau"]["renaming"].__setitem__("p1q1", "p1q1"), "push_equivariance"),
        (lambda d: d["symmetries"]["tau"]["renaming"].pop("p1h"), "renaming"),
        (lambda d: d["moves"].pop("y"), "moves"),
        (lambda d: d.pop("alphabet"), "schema"),
    ],
)
def test_corrupted_push_fixture(tmp_path, mutate, invariant):
    path = _load_corrupt(tmp_path, mutate)
    with pytest.raises(FixtureError) as e:
        surface.load_push_table(path)
    assert e.value.invariant == invariant


def test_corrupted_keep_fixture(tmp_path):
    def mutate(d):
        entry = next(m for m in d["maps"] if m["kept"] == ["q1", "q2"])
        entry["images"][2] = "x"
    path = _load_corrupt(tmp_path, mutate, surface.KEEP_FIXTURE)
    with pytest.raises(FixtureError) as e:
        surface.load_keep_maps(path)
    assert e.value.invariant == "forgotten_trivial"


def test_push_path_parsing():
    assert TABLE.path("xxY p1q2^-1") == parse_word("x^2 y^-1 p1q2^-1", TABLE.move_alphabet)

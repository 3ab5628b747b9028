"""Point pushes and forgetful maps on the torus with four marked points.

The torus T = R^2/Z^2 carries marked points p1, p2, q1, q2, where
p2 = tau(p1) and q2 = tau(q1) for the deck involution
``tau(x, y) = (x + 1/2, -y)`` of the double cover T -> K over the Klein
bottle.  pi_1(T - {p1, p2, q1, q2}, *) is free on ``x, y, p1, p2, q1``; the
loop around q2 is the product eliminated by the surface relation.

Push generators come in two kinds:

* ``x`` and ``y``: lifts of the Klein-bottle loops, with p1 and p2 moving
  together (each move swaps them).  A word in ``x, y`` lying in the index-2
  subgroup is therefore a pure motion.
* ``p1h, p1v, p1q1, p1q2, p1p2`` (and the tau-images ``p2h, p2v, p2q2,
  p2q1, p2p1``): a single point running once around a loop of the torus or
  around another marked point.

Tables are derived geometrically by :mod:`freewh.geometry` and shipped as the
fixture ``push_tables.json``; ``keep_maps.json`` holds the forgetful maps.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction as Q
from importlib import resources
from itertools import product
from typing import Mapping, Sequence

from . import geometry as geo
from .covers import FixtureError
from .geometry import Affine, Config, Point
from .morphisms import GenMap, compose, equal_up_to_inner
from .words import (
    Alphabet,
    AlphabetMismatch,
    CyclicWord,
    Word,
    conjugate_equal,
    parse_word,
)

PUSH_FIXTURE = "push_tables.json"
KEEP_FIXTURE = "keep_maps.json"
FIXTURE_VERSION = 1

LABELS = ("p1", "p2", "q1", "q2")
X_P, X_Q = Q(3, 17), Q(7, 19)
BASE: Point = (Q(1, 23), Q(1, 29))

TAU = Affine(Q(1, 2), -1, Q(0))
SIGMA = Affine(Q(1, 2), 1, Q(1, 2))
RHO = Affine(Q(0), -1, Q(1, 2))
# Klein bottle loops at p1, as deck transformations of the plane
KLEIN = {"x": TAU, "y": TAU.inverse() @ Affine(Q(0), 1, Q(1))}

SINGLE_MOVES = ("h", "v", "q1", "q2", "p2")
MOVE_NAMES = ("x", "y") + tuple(f"p1{m}" for m in SINGLE_MOVES) + (
    "p2h", "p2v", "p2q2", "p2q1", "p2p1",
)
TAU_RENAMING = {
    "x": "x", "y": "y",
    "p1h": "p2h", "p1v": "p2v", "p1q1": "p2q2", "p1q2": "p2q1", "p1p2": "p2p1",
    "p2h": "p1h", "p2v": "p1v", "p2q2": "p1q1", "p2q1": "p1q2", "p2p1": "p1p2",
}
MOVE_ALPHABET = Alphabet(MOVE_NAMES)
KEEP_PAIRS = (
    ("p1", "p2"), ("q1", "q2"),
    ("p1", "q1"), ("p1", "q2"), ("p2", "q1"), ("p2", "q2"),
)


class UnknownMove(KeyError):
    pass


class InconsistentRenaming(ValueError):
    pass


def standard_config() -> Config:
    p1 = (X_P, Q(3, 4))
    q1 = (X_Q, Q(1, 4))
    pts = {
        "p1": p1,
        "p2": geo._mod1(TAU(p1)),
        "q1": q1,
        "q2": geo._mod1(TAU(q1)),
    }
    return Config(BASE, tuple((lab, pts[lab]) for lab in LABELS), "q2")


def _diamond(start: Point, centre: Point, r: Q = Q(1, 20)) -> list[Point]:
    cx, cy = centre
    a = (cx + r / 3, cy + r)
    return [start, a, (cx - r, cy + r / 5), (cx - r / 4, cy - r), (cx + r, cy - r / 3), a, start]


def _affine_track(phi: Affine, track: Sequence[Point]) -> list[Point]:
    return [phi(p) for p in track]


def move_tracks() -> dict[str, dict[str, list[Point]]]:
    """Plane tracks of every named move, keyed by the label each track starts at."""
    c = standard_config()
    p1 = c.position("p1")
    tau_p1 = TAU(p1)
    out: dict[str, dict[str, list[Point]]] = {}
    for name, g in KLEIN.items():
        out[name] = {"p1": [p1, g(p1)], "p2": [tau_p1, TAU(g(p1))]}
    single = {
        "h": [p1, (p1[0] + Q(5, 9), p1[1] + Q(1, 11)), (p1[0] + 1, p1[1])],
        "v": [p1, (p1[0] + Q(1, 13), p1[1] + Q(4, 7)), (p1[0], p1[1] + 1)],
        "q1": _diamond(p1, c.position("q1")),
        "q2": _diamond(p1, c.position("q2")),
        "p2": _diamond(p1, c.position("p2")),
    }
    for m, tr in single.items():
        out[f"p1{m}"] = {"p1": tr}
    for m in SINGLE_MOVES:
        out[TAU_RENAMING[f"p1{m}"]] = {"p2": _affine_track(TAU, single[m])}
    return out


def transported_tracks(phi: Affine, tracks: Mapping[str, Sequence[Point]]) -> dict:
    """Tracks of phi(motion), keyed by the label at each image start point."""
    c = standard_config()
    where = {p: lab for lab, p in c.punctures}
    out = {}
    for tr in tracks.values():
        image = _affine_track(phi, tr)
        out[where[geo._mod1(image[0])]] = image
    return out


# -- tables ---------------------------------------------------------------


@dataclass(frozen=True)
class PushTable:
    alphabet: Alphabet
    moves: Mapping[str, GenMap]
    move_alphabet: Alphabet = MOVE_ALPHABET
    moving: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    version: int = FIXTURE_VERSION

    def __getitem__(self, name: str) -> GenMap:
        try:
            return self.moves[name]
        except KeyError:
            raise UnknownMove(name) from None

    def path(self, text: str) -> Word:
        return parse_word(text, self.move_alphabet)


@dataclass(frozen=True)
class Symmetry:
    """An affine symmetry of the marked torus with its induced automorphism."""

    name: str
    affine: Affine
    map: GenMap
    # move name -> move name, when the image of every move is again a move
    renaming: Mapping[str, str] | None = None
    # move name -> automorphism induced by the transported motion
    transported: Mapping[str, GenMap] = field(default_factory=dict)

    def renamed(self) -> dict[str, str | GenMap]:
        if self.renaming is not None:
            return dict(self.renaming)
        return dict(self.transported)


@dataclass(frozen=True)
class KeepMap:
    kept: tuple[str, str]
    map: GenMap
    forgotten: tuple[str, ...]
    full: Config
    version: int = FIXTURE_VERSION

    @property
    def source(self) -> Alphabet:
        return self.map.source

    @property
    def target(self) -> Alphabet:
        return self.map.target


def push_along(path: Word | str | Sequence[str], table: PushTable) -> GenMap:
    """Composite push along ``path``, first letter first."""
    letters = _path_letters(path, table)
    result = GenMap.identity(table.alphabet)
    for name, sign in letters:
        m = table[name]
        result = compose(m if sign > 0 else m.inverse, result)
    return result


def _path_letters(path, table: PushTable) -> list[tuple[str, int]]:
    if isinstance(path, str):
        path = table.path(path)
    if isinstance(path, Word):
        if path.alphabet != table.move_alphabet:
            raise AlphabetMismatch("path is not over the move alphabet")
        return [(table.move_alphabet.names[abs(x) - 1], 1 if x > 0 else -1) for x in path.letters]
    out = []
    for item in path:
        name, sign = (item[:-3], -1) if item.endswith("^-1") else (item, 1)
        if name not in table.moves:
            raise UnknownMove(name)
        out.append((name, sign))
    return out


def _forgotten_words(k: KeepMap) -> list[Word]:
    A = k.source
    return [Word(A, k.full.puncture_word(lab)) for lab in k.forgotten]


def keep(m: GenMap, k: KeepMap) -> GenMap:
    """Induced map on pi_1 of the torus minus the two kept points."""
    if m.source != k.source or m.target != k.source:
        raise AlphabetMismatch("map is not an endomorphism of the keep source")
    for w in _forgotten_words(k):
        if k.map(m(w)):
            raise ValueError("map does not preserve the forgotten puncture loops")
    B = k.target
    section = [Word(k.source, (k.source.index(name) + 1,)) for name in B.names]
    return GenMap(B, B, tuple(k.map(m(s)) for s in section))


def test_curves(alphabet: Alphabet) -> list[Word]:
    """Nontrivial conjugacy classes of cyclic length at most 2."""
    letters = [s * (i + 1) for i in range(alphabet.rank) for s in (1, -1)]
    seen, out = set(), []
    for n in (1, 2):
        for combo in product(letters, repeat=n):
            c = CyclicWord(alphabet, combo)
            if len(c) == n and c.letters not in seen:
                seen.add(c.letters)
                out.append(c.word())
    return out


def curve_report(m: GenMap, curves: Sequence[Word]) -> list[dict]:
    rows = []
    for w in curves:
        img = m(w)
        rows.append(
            {
                "curve": str(w),
                "image": str(CyclicWord(img.alphabet, img.letters)),
                "changed": not conjugate_equal(w, img),
            }
        )
    return rows


def acts_trivially(m: GenMap, curves: Sequence[Word]) -> bool:
    return not any(r["changed"] for r in curve_report(m, curves))


def equivariance_check(
    phi: GenMap,
    path: Word | str | Sequence[str],
    table: PushTable,
    renaming: Mapping[str, str | GenMap],
) -> bool:
    """Whether phi Push(l) phi^-1 equals Push(phi(l)) up to an inner automorphism.

    ``renaming`` sends each move name to the move (or directly to the
    automorphism) that phi carries it to.
    """
    if phi.inverse is None:
        raise ValueError("phi needs a known inverse")
    lhs = compose(phi, compose(push_along(path, table), phi.inverse))
    rhs = GenMap.identity(table.alphabet)
    for name, sign in _path_letters(path, table):
        if name not in renaming:
            raise InconsistentRenaming(f"no image for move {name}")
        target = renaming[name]
        m = table[target] if isinstance(target, str) else target
        if m.inverse is None:
            raise InconsistentRenaming(f"image of {name} has no inverse")
        rhs = compose(m if sign > 0 else m.inverse, rhs)
    return equal_up_to_inner(lhs, rhs)


def vhat_path(cover=None) -> Word:
    """The source word of the lifted candidate, as a path in ``x, y`` moves."""
    from .covers import load_cover
    from . import verify

    cover = cover or load_cover()
    v = parse_word(verify.V_TEXT, cover.ambient)
    return Word(MOVE_ALPHABET, tuple(
        (1 if x > 0 else -1) * (MOVE_ALPHABET.index(cover.ambient.names[abs(x) - 1]) + 1)
        for x in v.letters
    ))


# -- derivation -----------------------------------------------------------


def build_push_table(config: Config | None = None) -> PushTable:
    config = config or standard_config()
    moves, moving = {}, {}
    for name, tracks in move_tracks().items():
        moves[name] = geo.motion_automorphism(config, tracks)
        moving[name] = tuple(sorted(tracks))
    return PushTable(config.alphabet, moves, MOVE_ALPHABET, moving)


def build_symmetries(config: Config | None = None) -> dict[str, Symmetry]:
    config = config or standard_config()
    tracks = move_tracks()
    out = {"id": Symmetry("id", geo.IDENTITY, GenMap.identity(config.alphabet),
                          {n: n for n in MOVE_NAMES})}
    for name, phi in (("tau", TAU), ("sigma", SIGMA), ("rho", RHO)):
        m = geo.symmetry_automorphism(config, phi)
        if name == "tau":
            out[name] = Symmetry(name, phi, m, dict(TAU_RENAMING))
            continue
        transported = {
            move: geo.motion_automorphism(config, transported_tracks(phi, tr))
            for move, tr in tracks.items()
        }
        out[name] = Symmetry(name, phi, m, None, transported)
    return out


def build_keep_maps(config: Config | None = None) -> dict[tuple[str, str], KeepMap]:
    config = config or standard_config()
    out = {}
    loops = geo.generator_loops(config)
    for pair in KEEP_PAIRS:
        small = config.keep(pair)
        images = tuple(Word(small.alphabet, geo.encode(loop, small)) for loop in loops)
        forgotten = tuple(lab for lab in LABELS if lab not in pair)
        m = GenMap(config.alphabet, small.alphabet, images)
        out[pair] = KeepMap(pair, m, forgotten, config)
    return out


def klein_lift_basis(config: Config | None = None) -> dict:
    """Encode the lifts at p1 of the subgroup generators over pi_1(T - Q, p1)."""
    from .covers import load_cover

    config = config or standard_config()
    cover = load_cover()
    p1 = config.position("p1")
    small = Config(p1, tuple((lab, config.position(lab)) for lab in ("q1", "q2")), "q2")
    words = {}
    for name, g in zip(cover.subgroup.names, cover.gen_table):
        pts, h = [p1], geo.IDENTITY
        for x in g.letters:
            step = KLEIN[cover.ambient.names[abs(x) - 1]]
            h = h @ (step if x > 0 else step.inverse())
            pts.append(h(p1))
        if h.sy != 1:
            raise FixtureError("klein_lift", f"{name} does not lift to a loop")
        words[name] = geo.encode(pts, small)
    return {
        "alphabet": list(small.alphabet.names),
        "lifts": {n: str(Word(small.alphabet, w)) for n, w in words.items()},
        "basis": geo.nielsen_basis(list(words.values()), small.alphabet.rank),
    }


# -- fixtures -------------------------------------------------------------


def _point_json(p: Point) -> list[str]:
    return [str(p[0]), str(p[1])]


def _affine_json(a: Affine) -> dict:
    return {"a": str(a.a), "sy": a.sy, "b": str(a.b), "sx": a.sx}


def _genmap_json(m: GenMap) -> dict:
    d = m.to_json()
    d["inverse"] = m.inverse.to_json()["images"]
    return d


def _genmap_from(d: dict) -> GenMap:
    m = GenMap.from_json(d)
    return m.with_inverse(GenMap.from_strings(d["inverse"], m.target, m.source))


def _config_json(c: Config) -> dict:
    return {
        "base": _point_json(c.base),
        "punctures": {lab: _point_json(p) for lab, p in c.punctures},
        "eliminated": c.eliminated,
    }


def push_fixture_json(table: PushTable, symmetries: Mapping[str, Symmetry]) -> dict:
    tracks = move_tracks()
    return {
        "schema": 1,
        "version": table.version,
        "config": _config_json(standard_config()),
        "alphabet": list(table.alphabet.names),
        "move_alphabet": list(table.move_alphabet.names),
        "moves": {
            name: {
                "moving": list(table.moving.get(name, ())),
                "tracks": {lab: [_point_json(p) for p in tr] for lab, tr in tracks[name].items()},
                **_genmap_json(table.moves[name]),
            }
            for name in table.move_alphabet.names
        },
        "symmetries": {
            name: {
                "affine": _affine_json(s.affine),
                **_genmap_json(s.map),
                "renaming": s.renaming,
                "transported": {k: _genmap_json(v) for k, v in s.transported.items()},
            }
            for name, s in symmetries.items()
        },
    }


def keep_fixture_json(keeps: Mapping[tuple[str, str], KeepMap]) -> dict:
    return {
        "schema": 1,
        "version": FIXTURE_VERSION,
        "maps": [
            {"kept": list(k.kept), "forgotten": list(k.forgotten), **k.map.to_json()}
            for k in keeps.values()
        ],
    }


def _read(name: str, path) -> dict:
    if path is None:
        text = resources.files("freewh.data").joinpath(name).read_text()
    else:
        with open(path) as fh:
            text = fh.read()
    return json.loads(text)


def _affine_from(d: dict) -> Affine:
    return Affine(Q(d["a"]), int(d["sy"]), Q(d["b"]), int(d.get("sx", 1)))


def push_from_json(data: dict) -> tuple[PushTable, dict[str, Symmetry]]:
    try:
        alphabet = Alphabet(tuple(data["alphabet"]))
        moves_alpha = Alphabet(tuple(data["move_alphabet"]))
        moves = {n: _genmap_from(d) for n, d in data["moves"].items()}
        moving = {n: tuple(d["moving"]) for n, d in data["moves"].items()}
        syms = {}
        for n, d in data["symmetries"].items():
            syms[n] = Symmetry(
                n,
                _affine_from(d["affine"]),
                _genmap_from(d),
                d["renaming"],
                {k: _genmap_from(v) for k, v in d["transported"].items()},
            )
        version = int(data["version"])
    except (KeyError, ValueError, TypeError) as exc:
        raise FixtureError("schema", f"push table: {exc}") from exc
    table = PushTable(alphabet, moves, moves_alpha, moving, version)
    validate_push_table(table, syms)
    return table, syms


def keep_from_json(data: dict) -> dict[tuple[str, str], KeepMap]:
    config = standard_config()
    out = {}
    try:
        for d in data["maps"]:
            pair = tuple(d["kept"])
            out[pair] = KeepMap(pair, GenMap.from_json(d), tuple(d["forgotten"]), config,
                                int(data["version"]))
    except (KeyError, ValueError, TypeError) as exc:
        raise FixtureError("schema", f"keep maps: {exc}") from exc
    validate_keep_maps(out)
    return out


def load_push_table(path=None) -> tuple[PushTable, dict[str, Symmetry]]:
    return push_from_json(_read(PUSH_FIXTURE, path))


def load_keep_maps(path=None) -> dict[tuple[str, str], KeepMap]:
    return keep_from_json(_read(KEEP_FIXTURE, path))


def _puncture_words(alphabet: Alphabet) -> dict[str, Word]:
    c = standard_config()
    if c.alphabet != alphabet:
        raise FixtureError("alphabet", f"expected {c.alphabet}, got {alphabet}")
    return {lab: Word(alphabet, c.puncture_word(lab)) for lab in LABELS}


def _puncture_permutation(m: GenMap, loops: Mapping[str, Word], sign: int = 1) -> dict:
    perm = {}
    for lab, w in loops.items():
        img = m(w)
        hits = [other for other, u in loops.items() if conjugate_equal(img, u if sign > 0 else ~u)]
        if len(hits) != 1:
            return {}
        perm[lab] = hits[0]
    return perm


def validate_push_table(table: PushTable, symmetries: Mapping[str, Symmetry]) -> None:
    """Raise FixtureError naming the first violated invariant."""
    loops = _puncture_words(table.alphabet)
    if set(table.moves) != set(table.move_alphabet.names):
        raise FixtureError("moves", "move set differs from the move alphabet")
    for name, m in table.moves.items():
        inv = m.inverse
        if not (compose(inv, m).is_identity() and compose(m, inv).is_identity()):
            raise FixtureError("automorphism", f"move {name} is not inverted by its stored inverse")
        perm = _puncture_permutation(m, loops)
        moving = set(table.moving.get(name, ()))
        if not perm:
            raise FixtureError("conjugacy", f"move {name} does not permute puncture loops")
        for lab in LABELS:
            if lab not in moving and perm[lab] != lab:
                raise FixtureError("conjugacy", f"move {name} disturbs the loop around {lab}")
    for name, s in symmetries.items():
        m = s.map
        if m.inverse is None or not compose(m.inverse, m).is_identity():
            raise FixtureError("symmetry", f"{name} is not inverted by its stored inverse")
        if not _puncture_permutation(m, loops, s.affine.orientation):
            raise FixtureError("symmetry", f"{name} does not permute puncture loops")
        renaming = s.renamed()
        if set(renaming) != set(table.moves):
            raise FixtureError("renaming", f"{name} does not rename every move")
        for move in table.move_alphabet.names:
            if not equivariance_check(m, [move], table, renaming):
                raise FixtureError("push_equivariance", f"{name} fails conjugation on move {move}")


def validate_keep_maps(keeps: Mapping[tuple[str, str], KeepMap]) -> None:
    for pair, k in keeps.items():
        if sorted(pair + k.forgotten) != sorted(LABELS) or k.target.rank != 3:
            raise FixtureError("keep_shape", f"Keep{pair} has the wrong shape")
        for lab, w in zip(k.forgotten, _forgotten_words(k)):
            if k.map(w):
                raise FixtureError("forgotten_trivial", f"Keep{pair} keeps the loop around {lab}")
        section = [Word(k.source, (k.source.index(n) + 1,)) for n in k.target.names]
        if any(k.map(s) != Word(k.target, (i + 1,)) for i, s in enumerate(section)):
            raise FixtureError("section", f"Keep{pair} does not split the name inclusion")


def write_fixtures(directory) -> None:
    from pathlib import Path

    directory = Path(directory)
    config = standard_config()
    table = build_push_table(config)
    syms = build_symmetries(config)
    keeps = build_keep_maps(config)
    validate_push_table(table, syms)
    validate_keep_maps(keeps)
    (directory / PUSH_FIXTURE).write_text(json.dumps(push_fixture_json(table, syms), indent=1) + "\n")
    (directory / KEEP_FIXTURE).write_text(json.dumps(keep_fixture_json(keeps), indent=1) + "\n")

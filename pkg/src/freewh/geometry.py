"""Exact planar model of a punctured torus, used to derive point-push tables.

The torus is R^2 / Z^2.  A configuration is a basepoint plus labelled
punctures in the open unit square.  Loops are polygons in the plane (lifted
paths from the basepoint to a lattice translate of it), and are encoded as
words by recording crossings with a cut system whose complement is a disk:

* edge ``a`` (y in Z), split into pieces by the feet of the slits;
* edge ``b`` (x in Z);
* one vertical slit from each puncture straight down to edge ``a``.

Crossing letters reduce to the free basis ``x`` (cross ``b`` rightwards),
``y`` (cross piece 0 of ``a`` upwards) and one loop per puncture (cross its
slit rightwards), with one puncture loop eliminated by the relation
``x y x^-1 = y S_1 ... S_n`` (slits in left-to-right order).

A puncture moving along a short segment acts on loops by a finger move: each
crossing of the segment is dragged ahead of the puncture and wrapped around
its new position.  All arithmetic is in exact rationals; any degenerate
incidence raises :class:`GeometryError` instead of guessing.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from fractions import Fraction as Q
from typing import Iterable, Sequence

from .morphisms import GenMap, compose, inner, inner_conjugator
from .words import Alphabet, Word, invert_letters, reduce_letters

Point = tuple[Q, Q]


class GeometryError(RuntimeError):
    pass


def pt(x, y) -> Point:
    return (Q(x), Q(y))


def _frac(v: Q) -> Q:
    return v - math.floor(v)


def _mod1(p: Point) -> Point:
    return (_frac(p[0]), _frac(p[1]))


def _sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def _add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def _scale(k: Q, p: Point) -> Point:
    return (k * p[0], k * p[1])


def _cross(p: Point, q: Point) -> Q:
    return p[0] * q[1] - p[1] * q[0]


def _on_segment(z: Point, u: Point, w: Point) -> bool:
    d = _sub(w, u)
    r = _sub(z, u)
    if _cross(d, r) != 0:
        return False
    dot = d[0] * r[0] + d[1] * r[1]
    return 0 <= dot <= d[0] * d[0] + d[1] * d[1]


@dataclass(frozen=True)
class Affine:
    """(x, y) -> (sx * x + a, sy * y + b) with sx, sy = +-1."""

    a: Q
    sy: int
    b: Q
    sx: int = 1

    def __call__(self, p: Point) -> Point:
        return (self.sx * p[0] + self.a, self.sy * p[1] + self.b)

    def linear(self, p: Point) -> Point:
        return (self.sx * p[0], self.sy * p[1])

    def __matmul__(self, other: "Affine") -> "Affine":
        # (self o other)(p)
        return Affine(
            self.sx * other.a + self.a,
            self.sy * other.sy,
            self.sy * other.b + self.b,
            self.sx * other.sx,
        )

    def inverse(self) -> "Affine":
        return Affine(-self.sx * self.a, self.sy, -self.sy * self.b, self.sx)

    @property
    def orientation(self) -> int:
        return self.sx * self.sy


IDENTITY = Affine(Q(0), 1, Q(0))


@dataclass(frozen=True)
class Config:
    base: Point
    punctures: tuple[tuple[str, Point], ...]
    eliminated: str

    def __post_init__(self):
        labels = [lab for lab, _ in self.punctures]
        if len(set(labels)) != len(labels) or self.eliminated not in labels:
            raise GeometryError("bad puncture labels")
        xs = [p[0] for _, p in self.punctures] + [self.base[0]]
        if len(set(xs)) != len(xs):
            raise GeometryError("punctures and basepoint need distinct x coordinates")
        for _, p in self.punctures + (("*", self.base),):
            if not (0 < p[0] < 1 and 0 < p[1] < 1):
                raise GeometryError(f"point {p} not in the open unit square")

    @property
    def labels(self) -> tuple[str, ...]:
        return tuple(lab for lab, _ in self.punctures)

    @property
    def basis_labels(self) -> tuple[str, ...]:
        return tuple(lab for lab in self.labels if lab != self.eliminated)

    @property
    def alphabet(self) -> Alphabet:
        return Alphabet(("x", "y") + self.basis_labels)

    def position(self, label: str) -> Point:
        return dict(self.punctures)[label]

    def moved(self, label: str, p: Point) -> "Config":
        p = _mod1(p)
        return replace(
            self, punctures=tuple((lab, p if lab == label else q) for lab, q in self.punctures)
        )

    def keep(self, labels: Iterable[str]) -> "Config":
        labels = set(labels)
        kept = tuple((lab, q) for lab, q in self.punctures if lab in labels)
        ordered = [lab for lab, _ in kept]
        elim = self.eliminated if self.eliminated in labels else ordered[-1]
        return Config(self.base, kept, elim)

    def rebased(self, base: Point) -> "Config":
        return replace(self, base=_mod1(base))

    # -- letters ----------------------------------------------------------

    def _gen(self, label: str) -> int:
        return self.alphabet.index(label) + 1

    def _sorted_labels(self) -> list[str]:
        return [lab for lab, _ in sorted(self.punctures, key=lambda lp: lp[1][0])]

    def puncture_word(self, label: str) -> tuple[int, ...]:
        """Word of the loop around ``label`` (the eliminated one via the relation)."""
        if label != self.eliminated:
            return (self._gen(label),)
        order = self._sorted_labels()
        i = order.index(label)
        x, y = 1, 2
        before = [self._gen(lab) for lab in order[:i]]
        after = [self._gen(lab) for lab in order[i + 1 :]]
        return reduce_letters(
            invert_letters(before) + (-y, x, y, -x) + invert_letters(after)
        )

    def _piece_word(self, piece: int) -> tuple[int, ...]:
        order = self._sorted_labels()
        out: tuple[int, ...] = (2,)
        for lab in order[:piece]:
            out += self.puncture_word(lab)
        return reduce_letters(out)


# -- encoding -------------------------------------------------------------


def _check_vertex(v: Point, config: Config) -> None:
    fx, fy = _mod1(v)
    if fx == 0 or fy == 0:
        raise GeometryError(f"vertex {v} on an edge of the square")
    for _, (zx, zy) in config.punctures:
        if fx == zx and fy <= zy:
            raise GeometryError(f"vertex {v} on a slit or puncture")


def _segment_events(u: Point, w: Point, config: Config):
    events = []
    dx, dy = w[0] - u[0], w[1] - u[1]
    feet = sorted(p[0] for _, p in config.punctures)
    if dy != 0:
        lo, hi = sorted((u[1], w[1]))
        for k in range(math.ceil(lo), math.floor(hi) + 1):
            t = (k - u[1]) / dy
            fx = _frac(u[0] + t * dx)
            if fx == 0 or fx in feet:
                raise GeometryError("segment crosses a vertex of the cut system")
            piece = sum(1 for f in feet if f < fx)
            events.append((t, ("A", piece, 1 if dy > 0 else -1)))
    if dx != 0:
        lo, hi = sorted((u[0], w[0]))
        sign = 1 if dx > 0 else -1
        for k in range(math.ceil(lo), math.floor(hi) + 1):
            t = (k - u[0]) / dx
            if _frac(u[1] + t * dy) == 0:
                raise GeometryError("segment crosses the corner")
            events.append((t, ("B", sign)))
        for lab, (zx, zy) in config.punctures:
            for k in range(math.ceil(lo - zx), math.floor(hi - zx) + 1):
                t = (zx + k - u[0]) / dx
                fy = _frac(u[1] + t * dy)
                if fy == 0 or fy == zy:
                    raise GeometryError(f"segment hits puncture {lab} or its foot")
                if fy < zy:
                    events.append((t, ("S", lab, sign)))
    events.sort(key=lambda e: e[0])
    for (t1, _), (t2, _) in zip(events, events[1:]):
        if t1 == t2:
            raise GeometryError("simultaneous crossings")
    return [e for _, e in events]


def encode(poly: Sequence[Point], config: Config) -> tuple[int, ...]:
    """Reduced word (over ``config.alphabet``) of a closed lifted polygon."""
    if _mod1(poly[0]) != config.base or _mod1(poly[-1]) != config.base:
        raise GeometryError("polygon is not based at the basepoint")
    for v in poly[1:-1]:
        _check_vertex(v, config)
    out: list[int] = []
    for u, w in zip(poly, poly[1:]):
        for ev in _segment_events(u, w, config):
            if ev[0] == "A":
                piece_word = config._piece_word(ev[1])
                out.extend(piece_word if ev[2] > 0 else invert_letters(piece_word))
            elif ev[0] == "B":
                out.append(ev[1])
            else:
                pw = config.puncture_word(ev[1])
                out.extend(pw if ev[2] > 0 else invert_letters(pw))
    return reduce_letters(out)


def generator_loops(config: Config) -> list[list[Point]]:
    """Polygons for the basis of ``config.alphabet``, in alphabet order."""
    bx, by = config.base
    ys = [p[1] for _, p in config.punctures]
    H = (1 + max(ys)) / 2
    xs = sorted([p[0] for _, p in config.punctures] + [bx, Q(0), Q(1)])
    delta = min(b - a for a, b in zip(xs, xs[1:])) / 4
    first = min(p[0] for _, p in config.punctures)
    c = first / 2
    loops = [
        [(bx, by), (bx, H), (bx + 1, H), (bx + 1, by)],
        [(bx, by), (bx, H), (c, H), (c, 1 + H), (bx, 1 + H), (bx, 1 + by)],
    ]
    for lab in config.basis_labels:
        zx, zy = config.position(lab)
        yc = zy / 2
        loops.append(
            [
                (bx, by),
                (bx, H),
                (zx - delta, H),
                (zx - delta, yc),
                (zx + delta, yc),
                (zx + delta, H),
                (bx, H),
                (bx, by),
            ]
        )
    return loops


# -- finger moves ---------------------------------------------------------


def _lifts_near(points: Iterable[Point], lo: Point, hi: Point) -> list[Point]:
    out = []
    for p in points:
        for i in range(math.floor(lo[0] - p[0]) - 1, math.ceil(hi[0] - p[0]) + 2):
            for j in range(math.floor(lo[1] - p[1]) - 1, math.ceil(hi[1] - p[1]) + 2):
                out.append((p[0] + i, p[1] + j))
    return out


def _inside(z: Point, quad: Sequence[Point]) -> bool:
    signs = set()
    for u, w in zip(quad, quad[1:] + quad[:1]):
        c = _cross(_sub(w, u), _sub(z, u))
        signs.add((c > 0) - (c < 0))
    return not ({1, -1} <= signs)


def finger(
    poly: Sequence[Point], start: Point, end: Point, after: Config, moving: str
) -> list[Point]:
    """Image of ``poly`` when the puncture at ``start`` slides to ``end``."""
    e = _sub(end, start)
    xs = [p[0] for p in poly] + [start[0], end[0]]
    ys = [p[1] for p in poly] + [start[1], end[1]]
    lo, hi = (min(xs), min(ys)), (max(xs), max(ys))
    offsets = [
        (Q(i), Q(j))
        for i in range(math.floor(lo[0] - hi[0]) - 1, math.ceil(hi[0] - lo[0]) + 2)
        for j in range(math.floor(lo[1] - hi[1]) - 1, math.ceil(hi[1] - lo[1]) + 2)
    ]
    crossings: list[list[tuple[Q, Point]]] = []
    reach = Q(1)  # how far beyond ``end`` the loop stays clear, in units of e
    for u, w in zip(poly, poly[1:]):
        d = _sub(w, u)
        row = []
        for o in offsets:
            s0 = _add(start, o)
            denom = _cross(d, e)
            r = _sub(s0, u)
            if denom == 0:
                if _cross(d, r) == 0 and (
                    _on_segment(s0, u, w) or _on_segment(_add(end, o), u, w)
                    or _on_segment(u, s0, _add(end, o))
                ):
                    raise GeometryError("loop runs along the move segment")
                continue
            s = _cross(r, e) / denom
            t = _cross(r, d) / denom
            if not (0 <= s <= 1):
                continue
            if 0 <= t <= 1:
                if s in (0, 1) or t in (0, 1):
                    raise GeometryError("degenerate crossing with move segment")
                row.append((s, o))
            elif 1 < t < 1 + reach:
                reach = t - 1
        row.sort(key=lambda so: so[0])
        crossings.append(row)
    others = [p for lab, p in after.punctures if lab != moving]
    eta = reach / 2
    for attempt in range(60):
        out = [poly[0]]
        ok = True
        for (u, w), row in zip(zip(poly, poly[1:]), crossings):
            d = _sub(w, u)
            ss = [Q(0)] + [s for s, _ in row] + [Q(1)]
            gap = min(b - a for a, b in zip(ss, ss[1:])) if row else Q(1)
            ds = gap / 4 / (2**attempt)
            for s, o in row:
                x_a = _add(u, _scale(s - ds, d))
                x_b = _add(u, _scale(s + ds, d))
                far = _add(_add(end, o), _scale(eta / (2**attempt), e))
                shift = _sub(far, _add(u, _scale(s, d)))
                quad = [x_a, _add(x_a, shift), _add(x_b, shift), x_b]
                box_lo = (min(q[0] for q in quad), min(q[1] for q in quad))
                box_hi = (max(q[0] for q in quad), max(q[1] for q in quad))
                if any(_inside(z, quad) for z in _lifts_near(others, box_lo, box_hi)):
                    ok = False
                    break
                for v in quad:
                    try:
                        _check_vertex(v, after)
                    except GeometryError:
                        ok = False
                if not ok:
                    break
                out.extend(quad)
            if not ok:
                break
            out.append(w)
        if ok:
            return out
    raise GeometryError("could not fit a finger move")


# -- motions --------------------------------------------------------------


def _dist2(p: Point, q: Point) -> Q:
    d = _sub(p, q)
    return d[0] * d[0] + d[1] * d[1]


def step_map(config: Config, label: str, start: Point, end: Point) -> tuple[GenMap, Config]:
    """Automorphism induced by sliding ``label`` from ``start`` to ``end``."""
    if _mod1(start) != config.position(label):
        raise GeometryError("segment does not start at the puncture")
    after = config.moved(label, end)
    for b in _lifts_near([config.base], *_bbox([start, end])):
        if _on_segment(b, start, end):
            raise GeometryError("move segment passes through the basepoint")
    for lab, p in config.punctures:
        if lab != label:
            for z in _lifts_near([p], *_bbox([start, end])):
                if _on_segment(z, start, end):
                    raise GeometryError(f"move segment hits puncture {lab}")
    A = config.alphabet
    images = []
    for loop in generator_loops(config):
        images.append(Word(A, encode(finger(loop, start, end, after, label), after)))
    return GenMap(A, A, tuple(images)), after


def _bbox(points: Sequence[Point]) -> tuple[Point, Point]:
    return (
        (min(p[0] for p in points), min(p[1] for p in points)),
        (max(p[0] for p in points), max(p[1] for p in points)),
    )


def _relabel(config: Config, final: Config) -> GenMap:
    """Rename puncture loops of ``final`` by the position they now occupy."""
    where = {p: lab for lab, p in config.punctures}
    perm = {lab: where.get(p) for lab, p in final.punctures}
    if None in perm.values() or sorted(perm.values()) != sorted(perm):
        raise GeometryError("motion does not return the punctures to their positions")
    if perm[config.eliminated] != config.eliminated:
        raise GeometryError("the eliminated puncture must return to itself")
    A = config.alphabet
    images = [Word(A, (1,)), Word(A, (2,))]
    for lab in config.basis_labels:
        images.append(Word(A, (A.index(perm[lab]) + 1,)))
    return GenMap(A, A, tuple(images))


def motion_map(
    config: Config, tracks: dict[str, Sequence[Point]], max_step: Q | None = None
) -> GenMap:
    """Automorphism of pi_1(T - punctures, base) induced by a puncture motion.

    Every track is a polygon starting at (a lift of) its puncture; all tracks
    have the same number of vertices and are traversed simultaneously, each
    straight piece split into sub-steps shorter than ``max_step``.
    """
    labels = sorted(tracks)
    nseg = {len(tr) for tr in tracks.values()}
    if len(nseg) != 1:
        raise GeometryError("tracks must have equal vertex counts")
    nseg = nseg.pop() - 1
    A = config.alphabet
    total = GenMap.identity(A)
    current = config
    limit = float(max_step) ** 2 if max_step else 0.0
    for j in range(nseg):
        m = 1
        for lab in labels if limit else ():
            d2 = float(_dist2(tracks[lab][j], tracks[lab][j + 1]))
            m = max(m, math.ceil(math.sqrt(d2 / limit)))
        for extra in range(12):
            # a subdivision point can land on a degenerate position; refine
            try:
                seg_total, seg_current = _run_segment(
                    total, current, tracks, labels, j, m + extra
                )
                break
            except GeometryError:
                if extra == 11:
                    raise
        total, current = seg_total, seg_current
    return compose(_relabel(config, current), total)


def _run_segment(total, current, tracks, labels, j, m):
    for k in range(m):
        for lab in labels:
            u, w = tracks[lab][j], tracks[lab][j + 1]
            p0 = _add(u, _scale(Q(k, m), _sub(w, u)))
            p1 = _add(u, _scale(Q(k + 1, m), _sub(w, u)))
            step, current = step_map(current, lab, p0, p1)
            total = compose(step, total)
    return total, current


def reverse_tracks(config: Config, tracks: dict[str, Sequence[Point]]) -> dict[str, list[Point]]:
    """Tracks of the time-reversed motion, keyed by the label at each start."""
    where = {p: lab for lab, p in config.punctures}
    out = {}
    for tr in tracks.values():
        end = tr[-1]
        lab = where[_mod1(end)]
        shift = _sub(config.position(lab), end)
        out[lab] = [_add(p, shift) for p in reversed(tr)]
    return out


def motion_automorphism(config: Config, tracks: dict[str, Sequence[Point]]) -> GenMap:
    """``motion_map`` with its inverse attached, checked by composition."""
    fwd = motion_map(config, tracks)
    bwd = motion_map(config, reverse_tracks(config, tracks))
    if not compose(bwd, fwd).is_identity() or not compose(fwd, bwd).is_identity():
        raise GeometryError("reversed motion does not invert the forward motion")
    return fwd.with_inverse(bwd)


def symmetry_map(config: Config, phi: Affine) -> GenMap:
    """Automorphism induced by an affine symmetry preserving the punctures.

    The image basepoint is joined back to the basepoint by a straight path.
    """
    base = config.base
    image_base = phi(base)
    A = config.alphabet
    images = []
    for loop in generator_loops(config):
        end_shift = phi.linear(_sub(loop[-1], loop[0]))
        path = [base] + [phi(p) for p in loop] + [_add(base, end_shift)]
        images.append(Word(A, encode(path, config)))
    for b in _lifts_near([p for _, p in config.punctures], *_bbox([base, image_base])):
        if _on_segment(b, base, image_base):
            raise GeometryError("connecting path hits a puncture")
    return GenMap(A, A, tuple(images))


def symmetry_automorphism(config: Config, phi: Affine) -> GenMap:
    fwd = symmetry_map(config, phi)
    bwd = symmetry_map(config, phi.inverse())
    g = inner_conjugator(compose(bwd, fwd))
    if g is None:
        raise GeometryError("symmetry and its inverse do not compose to an inner map")
    exact_bwd = compose(inner(~g), bwd)
    if not compose(fwd, exact_bwd).is_identity():
        raise GeometryError("inverse symmetry is not a two-sided inverse")
    return fwd.with_inverse(exact_bwd)


# -- bases ----------------------------------------------------------------


def nielsen_basis(words: Sequence[tuple[int, ...]], rank: int) -> bool:
    """Certificate that ``words`` form a free basis: Nielsen moves down to letters.

    Only strictly length-reducing moves are used, so a False answer is
    inconclusive; a True answer is a proof.
    """
    ws = [reduce_letters(w) for w in words]
    if len(ws) != rank:
        return False
    changed = True
    while changed:
        changed = False
        for i in range(rank):
            for j in range(rank):
                if i == j:
                    continue
                for vj in (ws[j], invert_letters(ws[j])):
                    for cand in (reduce_letters(ws[i] + vj), reduce_letters(vj + ws[i])):
                        if len(cand) < len(ws[i]):
                            ws[i] = cand
                            changed = True
    return sorted(abs(w[0]) for w in ws if len(w) == 1) == list(range(1, rank + 1))

"""One-shot reproduction of the computational claims about the candidate word.

Each check returns a claim dict ``{"id", "anchor", "result", "data"}`` with
result ``"PASS"`` or ``"FAIL"``; :func:`verify_all` bundles them into the
report ``{"schema", "claims", "fixtures", "timing"}``.
"""

from __future__ import annotations

import hashlib
import json
import time
from typing import Callable

from . import surface
from .covers import FixtureError, in_subgroup, load_cover, rewrite
from .morphisms import GenMap, compose
from .whitehead import (
    DEFAULT_BUDGET,
    enumerate_type_i,
    equivalent,
    inverse_equivalent,
    orbit,
)
from .words import Alphabet, Word, conjugate_equal, parse_word

W_TEXT = "a^2 c^2 a c^-1"
V_TEXT = "x^4 x Y x Y x^2 y X"
EXPECTED_MIN_LENGTH = 6
F3 = Alphabet(("a", "b", "c"))
# pinned automorphism for the positive control: a -> a b, then swap b and c
PINNED = compose(
    GenMap.from_strings(["a", "c", "b"], F3),
    GenMap.from_strings(["a b", "b", "c"], F3),
)


def _claim(cid: str, anchor: str, ok: bool, data: dict) -> dict:
    return {"id": cid, "anchor": anchor, "result": "PASS" if ok else "FAIL", "data": data}


def verify_inverse_claim(
    word: str = W_TEXT, budget: int = DEFAULT_BUDGET, threads: int = 1
) -> dict:
    """The candidate word is not automorphism-equivalent to its inverse."""
    w = parse_word(word, F3)
    t0 = time.perf_counter()
    res = inverse_equivalent(w, budget, threads)
    orb = orbit(w, budget, threads)
    elapsed = time.perf_counter() - t0
    a = parse_word("a", F3)
    control_inverse = inverse_equivalent(a)
    image = PINNED(w)
    control_pinned = equivalent(w, image)
    data = {
        "word": str(w),
        "inverse_equivalent": res.verdict,
        "min_length": orb.min_length,
        "orbit_size": len(orb),
        "seconds": round(elapsed, 3),
        "controls": {
            "a_inverse_equivalent": control_inverse.verdict,
            "pinned_image": str(image),
            "pinned_equivalent": control_pinned.verdict,
        },
        "witnesses": {
            "a_inverse": control_inverse.witness_map().to_json(),
            "pinned": control_pinned.to_json(),
        }
        if control_inverse and control_pinned
        else {},
    }
    ok = (
        not res.verdict
        and orb.min_length == EXPECTED_MIN_LENGTH
        and control_inverse.verdict
        and control_pinned.verdict
    )
    return _claim("inverse-asymmetry", "candidate word versus its inverse", ok, data)


def type_i_matches(u: Word, target: Word) -> dict:
    """Signed permutations sending ``u`` to ``target`` exactly and up to rotation."""
    exact, cyclic = [], []
    for t in enumerate_type_i(u.alphabet):
        img = t.genmap(u)
        if img == target:
            exact.append(str(t))
        if conjugate_equal(img, target):
            cyclic.append(str(t))
    return {"exact": exact, "cyclic": cyclic}


def verify_lift(cover_path=None, word: str = W_TEXT) -> dict:
    """The rewritten source word is equivalent to the candidate, not to its inverse."""
    cover = load_cover(cover_path)
    w = parse_word(word, cover.subgroup)
    v = parse_word(V_TEXT, cover.ambient)
    member = in_subgroup(v, cover)
    data: dict = {"v": str(v), "in_subgroup": member}
    if not member:
        return _claim("lift", "candidate word as a lift", False, data)
    lift = rewrite(v, cover)
    eq = equivalent(lift, w)
    inv = inverse_equivalent(lift)
    renamed = Word(cover.subgroup, lift.letters)
    data.update(
        {
            "lift": str(lift),
            "equivalent_to_candidate": eq.verdict,
            "inverse_equivalent": inv.verdict,
            "type_i_letter_equality": type_i_matches(renamed, w),
            "witness": eq.to_json() if eq else None,
        }
    )
    ok = eq.verdict and not inv.verdict
    if eq:
        ok = ok and eq.witness_map()(lift) == w
    return _claim("lift", "candidate word as a lift", ok, data)


def _vhat_inverse(table: surface.PushTable) -> GenMap:
    return surface.push_along(surface.vhat_path(), table).inverse


def verify_keep_checks(push_path=None, keep_path=None) -> dict:
    """Forgetting two punctures after the inverse lifted push."""
    table, _ = surface.load_push_table(push_path)
    keeps = surface.load_keep_maps(keep_path)
    m = _vhat_inverse(table)
    ident = GenMap.identity(table.alphabet)
    rows, ok = [], True
    for pair, k in keeps.items():
        curves = surface.test_curves(k.target)
        report = surface.curve_report(surface.keep(m, k), curves)
        trivial = not any(r["changed"] for r in report)
        expected_trivial = not set(pair) & {"p1", "p2"}
        id_trivial = surface.acts_trivially(surface.keep(ident, k), curves)
        changed = [r for r in report if r["changed"]]
        rows.append(
            {
                "kept": list(pair),
                "trivial": trivial,
                "expected_trivial": expected_trivial,
                "identity_trivial": id_trivial,
                "changed_curves": len(changed),
                "test_curves": len(curves),
                "example": changed[0] if changed else None,
            }
        )
        ok = ok and trivial == expected_trivial and id_trivial
    return _claim("keep", "forgetful images of the lifted push", ok, {"cases": rows})


def verify_equivariance(push_path=None) -> dict:
    """Conjugating pushes by surface symmetries, and the lift basis check."""
    table, syms = surface.load_push_table(push_path)
    failures = []
    count = 0
    for name, s in syms.items():
        renaming = s.renamed()
        for move in table.move_alphabet.names:
            count += 1
            if not surface.equivariance_check(s.map, [move], table, renaming):
                failures.append(f"{name}:{move}")
    tau = syms["tau"]
    vhat = surface.equivariance_check(tau.map, surface.vhat_path(), table, tau.renamed())
    basis = surface.klein_lift_basis()
    data = {
        "checked": count,
        "failures": failures,
        "tau_on_vhat": vhat,
        "lift_basis": basis,
    }
    ok = not failures and vhat and basis["basis"]
    return _claim("conjugation", "conjugating pushes by symmetries", ok, data)


def _guard(cid: str, anchor: str, fn: Callable[[], dict]) -> dict:
    try:
        return fn()
    except FixtureError as exc:
        return _claim(cid, anchor, False, {"invariant": exc.invariant, "error": str(exc)})
    except FileNotFoundError as exc:
        return _claim(cid, anchor, False, {"invariant": "missing", "error": str(exc)})


def verify_all(
    word: str = W_TEXT,
    cover_path=None,
    push_path=None,
    keep_path=None,
    budget: int = DEFAULT_BUDGET,
    threads: int = 1,
) -> dict:
    checks = [
        ("inverse-asymmetry", "candidate word versus its inverse",
         lambda: verify_inverse_claim(word, budget, threads)),
        ("lift", "candidate word as a lift", lambda: verify_lift(cover_path, word)),
        ("keep", "forgetful images of the lifted push",
         lambda: verify_keep_checks(push_path, keep_path)),
        ("conjugation", "conjugating pushes by symmetries", lambda: verify_equivariance(push_path)),
    ]
    claims, timing = [], {}
    start = time.perf_counter()
    for cid, anchor, fn in checks:
        t0 = time.perf_counter()
        claims.append(_guard(cid, anchor, fn))
        timing[cid] = round(time.perf_counter() - t0, 3)
    timing["total"] = round(time.perf_counter() - start, 3)
    fixtures = {
        "klein_cover": _version("klein_cover.json", cover_path),
        "push_tables": _version(surface.PUSH_FIXTURE, push_path),
        "keep_maps": _version(surface.KEEP_FIXTURE, keep_path),
    }
    return {"schema": 1, "claims": claims, "fixtures": fixtures, "timing": timing}


def _version(name: str, path) -> int | None:
    try:
        return int(surface._read(name, path).get("version"))
    except (OSError, ValueError, TypeError, AttributeError):
        return None


def passed(report: dict) -> bool:
    return all(c["result"] == "PASS" for c in report["claims"])


def _strip(obj):
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k not in ("witness", "witnesses", "seconds")}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def report_digest(report: dict) -> str:
    """Hash of the report with timing and witnesses removed."""
    body = {"claims": _strip(report["claims"]), "fixtures": report["fixtures"]}
    return hashlib.sha256(json.dumps(body, sort_keys=True).encode()).hexdigest()


def summary_lines(report: dict) -> list[str]:
    lines = []
    for c in report["claims"]:
        lines.append(f"{c['result']}  {c['id']:<18} [{c['anchor']}]")
    return lines


def replay_check(witness: dict, source: str, target: str, alphabet: Alphabet = F3) -> bool:
    """Re-verify a stored equivalence witness by pure application."""
    m = GenMap.from_json(witness["map"])
    return m(parse_word(source, alphabet)) == parse_word(target, alphabet)

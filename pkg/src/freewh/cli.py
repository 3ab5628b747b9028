"""Command-line front end.

Exit status: 0 success, 1 verification failure, 2 usage or input error.
"""

from __future__ import annotations

import argparse
import json
import random
import sys

from . import surface, verify
from .covers import NotInSubgroup, load_cover, rewrite
from .whitehead import (
    DEFAULT_BUDGET,
    OrbitBudgetExceeded,
    equivalent,
    inverse_equivalent,
    minimize,
    orbit,
    primitive_witness,
    replay,
    witness_map,
)
from .words import Alphabet, CyclicWord, Word, WordSyntaxError, cyclic_reduce, parse_word


class UsageError(Exception):
    pass


def _bool(v: bool) -> str:
    return "true" if v else "false"


def _emit(args, text: str, payload: dict) -> None:
    if args.json:
        print(json.dumps({"schema": 1, **payload}, indent=1))
    else:
        print(text)


def _alphabet(args) -> Alphabet:
    try:
        return Alphabet.parse(args.alphabet)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _word(text: str, alphabet: Alphabet) -> Word:
    return parse_word(text, alphabet)


def cmd_reduce(args) -> int:
    u = _word(args.word, _alphabet(args))
    _emit(args, str(u), {"word": str(u), "length": len(u)})
    return 0


def cmd_minimize(args) -> int:
    u = _word(args.word, _alphabet(args))
    c, steps = minimize(u)
    text = f"{c}\nwitness: {'; '.join(map(str, steps)) or 'none'}"
    _emit(args, text, {
        "word": str(u),
        "minimal": str(c),
        "length": len(c),
        "witness": [t.to_json() for t in steps],
    })
    return 0


def cmd_orbit(args) -> int:
    A = _alphabet(args)
    u = _word(args.word, A)
    orb = orbit(u, args.budget, args.threads)
    queries = [_word(q, A) for q in args.contains or []]
    report = orb.report(queries)
    lines = [f"min_length {report['min_length']}", f"orbit_size {report['orbit_size']}"]
    lines += [f"{q['word']}: {_bool(q['member'])}" for q in report["contains"]]
    _emit(args, "\n".join(lines), {k: v for k, v in report.items() if k != "schema"})
    return 0


def _equiv_out(args, res) -> int:
    payload = res.to_json()
    payload.pop("schema", None)
    text = _bool(res.verdict)
    if res.verdict:
        text += f"\nwitness: {res.witness_map()}"
    _emit(args, text, payload)
    return 0


def cmd_equiv(args) -> int:
    A = _alphabet(args)
    return _equiv_out(args, equivalent(_word(args.u, A), _word(args.v, A), args.budget, args.threads))


def cmd_inv_equiv(args) -> int:
    u = _word(args.word, _alphabet(args))
    return _equiv_out(args, inverse_equivalent(u, args.budget, args.threads))


def cmd_primitive(args) -> int:
    u = _word(args.word, _alphabet(args))
    m = primitive_witness(u)
    text = _bool(m is not None)
    if m is not None:
        text += f"\nwitness: {m}"
    _emit(args, text, {
        "word": str(u),
        "primitive": m is not None,
        "witness": m.to_json() if m is not None else None,
    })
    return 0


def cmd_lift(args) -> int:
    cover = load_cover(args.cover)
    u = _word(args.word, cover.ambient)
    try:
        s = rewrite(u, cover)
    except NotInSubgroup as exc:
        raise UsageError(str(exc)) from exc
    _emit(args, str(s), {"word": str(u), "lift": str(s), "subgroup": list(cover.subgroup.names)})
    return 0


def cmd_push(args) -> int:
    table, _ = surface.load_push_table(args.push_fixture)
    try:
        path = table.path(args.path)
    except WordSyntaxError as exc:
        raise UsageError(f"bad push path: {exc}") from exc
    m = surface.push_along(path, table)
    payload = {"path": str(path)}
    if args.keep:
        pair = tuple(p.strip() for p in args.keep.split(","))
        keeps = surface.load_keep_maps(args.keep_fixture)
        k = keeps.get(pair) or keeps.get(pair[::-1])
        if k is None:
            raise UsageError(f"no keep map for {args.keep}; choose two of {','.join(surface.LABELS)}")
        m = surface.keep(m, k)
        payload["keep"] = list(k.kept)
    u = _word(args.apply, m.source)
    img = m(u)
    payload.update({"alphabet": list(m.source.names), "word": str(u), "image": str(img),
                    "cyclic_image": str(cyclic_reduce(img)[0])})
    _emit(args, str(img), payload)
    return 0


def cmd_verify(args) -> int:
    report = verify.verify_all(
        cover_path=args.cover,
        push_path=args.push_fixture,
        keep_path=args.keep_fixture,
        budget=args.budget,
        threads=args.threads,
    )
    report["digest"] = verify.report_digest(report)
    if isinstance(args.json, str):
        with open(args.json, "w") as fh:
            json.dump(report, fh, indent=1)
    if args.json is True:
        print(json.dumps(report, indent=1))
    else:
        print("\n".join(verify.summary_lines(report)))
        print(f"total {report['timing']['total']}s")
    return 0 if verify.passed(report) else 1


def cmd_fixtures(args) -> int:
    if args.action == "build":
        surface.write_fixtures(args.out)
        print(f"wrote fixtures to {args.out}")
        return 0
    if args.action == "dump":
        name = {"cover": "klein_cover.json", "push": surface.PUSH_FIXTURE,
                "keep": surface.KEEP_FIXTURE}[args.name]
        print(json.dumps(surface._read(name, None), indent=1))
        return 0
    from .covers import FixtureError

    results = {}
    for name, load in (
        ("cover", lambda: load_cover(args.cover)),
        ("push", lambda: surface.load_push_table(args.push_fixture)),
        ("keep", lambda: surface.load_keep_maps(args.keep_fixture)),
    ):
        try:
            load()
            results[name] = "ok"
        except FixtureError as exc:
            results[name] = f"invariant {exc.invariant}: {exc}"
    ok = all(v == "ok" for v in results.values())
    _emit(args, "\n".join(f"{k}: {v}" for k, v in results.items()), {"valid": ok, **results})
    return 0 if ok else 1


def cmd_selfcheck(args) -> int:
    """Randomised law checks: witnesses replay and reduction is stable."""
    rng = random.Random(args.seed)
    A = _alphabet(args)
    failures = 0
    for _ in range(args.count):
        letters = [rng.choice([1, -1]) * rng.randint(1, A.rank) for _ in range(rng.randint(1, 8))]
        u = Word(A, letters)
        c, steps = minimize(u)
        if CyclicWord(A, replay(steps, u).letters) != c:
            failures += 1
        m = witness_map(steps, A)
        if CyclicWord(A, m(u).letters) != c:
            failures += 1
    _emit(args, f"{args.count} cases, {failures} failures", {"cases": args.count, "failures": failures})
    return 0 if failures == 0 else 1


def build_parser() -> argparse.ArgumentParser:
    base = argparse.ArgumentParser(add_help=False)
    base.add_argument("--alphabet", default=argparse.SUPPRESS, help="generator names, e.g. a,b,c")
    base.add_argument("--threads", type=int, default=argparse.SUPPRESS)
    base.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    base.add_argument("--budget", type=int, default=argparse.SUPPRESS)
    base.add_argument("--cover", default=argparse.SUPPRESS, help="Klein cover fixture path")
    base.add_argument("--push-fixture", default=argparse.SUPPRESS)
    base.add_argument("--keep-fixture", default=argparse.SUPPRESS)

    common = argparse.ArgumentParser(add_help=False, parents=[base])
    common.add_argument("--json", action="store_true", default=argparse.SUPPRESS)

    p = argparse.ArgumentParser(prog="freewh", parents=[common],
                                description="Whitehead equivalence and point-push checks")
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_, parents=(common,)):
        sp = sub.add_parser(name, parents=list(parents), help=help_)
        sp.set_defaults(func=fn)
        return sp

    add("reduce", cmd_reduce, "freely reduce a word").add_argument("word")
    add("minimize", cmd_minimize, "minimal cyclic form and witness").add_argument("word")
    sp = add("orbit", cmd_orbit, "minimal-length orbit report")
    sp.add_argument("word")
    sp.add_argument("--contains", nargs="*", metavar="WORD")
    sp = add("equiv", cmd_equiv, "automorphism equivalence")
    sp.add_argument("u")
    sp.add_argument("v")
    add("inv-equiv", cmd_inv_equiv, "equivalence with the inverse").add_argument("word")
    add("primitive", cmd_primitive, "primitivity with witness").add_argument("word")
    add("lift", cmd_lift, "rewrite a word of F(x,y) in the index-2 subgroup").add_argument("word")
    sp = add("push", cmd_push, "apply a composite point push")
    sp.add_argument("path", help="word in the move names, e.g. 'x y^-1 p1q1'")
    sp.add_argument("--apply", required=True, metavar="WORD")
    sp.add_argument("--keep", metavar="A,B", help="forget all points but these two")
    sp = add("verify-paper", cmd_verify, "run every claim check", parents=(base,))
    sp.add_argument("--json", nargs="?", const=True, default=argparse.SUPPRESS, metavar="FILE",
                    help="print the JSON report, or write it to FILE")
    sp = add("fixtures", cmd_fixtures, "dump, validate or rebuild fixtures")
    sp.add_argument("action", choices=["dump", "validate", "build"])
    sp.add_argument("name", nargs="?", choices=["cover", "push", "keep"], default="push")
    sp.add_argument("--out", default=".")
    sp = add("selfcheck", cmd_selfcheck, "randomised law checks (uses --seed)")
    sp.add_argument("--count", type=int, default=200)
    return p


DEFAULTS = {
    "alphabet": "a,b,c",
    "json": False,
    "threads": 1,
    "seed": 0,
    "budget": DEFAULT_BUDGET,
    "cover": None,
    "push_fixture": None,
    "keep_fixture": None,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    for k, v in DEFAULTS.items():
        if not hasattr(args, k):
            setattr(args, k, v)
    try:
        return args.func(args)
    except (UsageError, WordSyntaxError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OrbitBudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

"""Slow, independent reference implementations working on plain strings.

Lowercase letters are generators and uppercase their inverses.  Nothing here
imports the package, so agreement with it is meaningful.
"""

from __future__ import annotations

from collections import deque
from itertools import permutations, product


def inv_char(ch: str) -> str:
    return ch.lower() if ch.isupper() else ch.upper()


def reduce(s: str) -> str:
    out: list[str] = []
    for ch in s:
        if out and out[-1] == inv_char(ch):
            out.pop()
        else:
            out.append(ch)
    return "".join(out)


def inverse(s: str) -> str:
    return "".join(inv_char(ch) for ch in reversed(s))


def cyclic_reduce(s: str) -> str:
    s = reduce(s)
    while len(s) > 1 and s[0] == inv_char(s[-1]):
        s = s[1:-1]
    return s


def _key(gens: str, s: str) -> tuple:
    # generator order, positive before inverse
    return tuple(2 * gens.index(ch.lower()) + ch.isupper() for ch in s)


def canonical(gens: str, s: str) -> str:
    """Least rotation by brute force over every rotation."""
    s = cyclic_reduce(s)
    if not s:
        return s
    return min((s[i:] + s[:i] for i in range(len(s))), key=lambda r: _key(gens, r))


def substitute(s: str, images: dict[str, str]) -> str:
    out = []
    for ch in s:
        out.append(images[ch] if ch.islower() else inverse(images[ch.lower()]))
    return reduce("".join(out))


def letters(gens: str) -> list[str]:
    return [c for g in gens for c in (g, g.upper())]


def type_ii_images(gens: str, a: str, cut: set[str]) -> dict[str, str]:
    images = {}
    for g in gens:
        if g == a.lower():
            images[g] = g
            continue
        img = g
        if g.upper() in cut:
            img = inverse(a) + img
        if g in cut:
            img = img + a
        images[g] = img
    return images


def all_type_ii(gens: str) -> list[dict[str, str]]:
    out = []
    for a in letters(gens):
        rest = [x for x in letters(gens) if x.lower() != a.lower()]
        for bits in product((0, 1), repeat=len(rest)):
            cut = {a} | {x for x, b in zip(rest, bits) if b}
            out.append(type_ii_images(gens, a, cut))
    return out


def all_type_i(gens: str) -> list[dict[str, str]]:
    out = []
    for perm in permutations(gens):
        for signs in product((0, 1), repeat=len(gens)):
            out.append({g: (p.upper() if s else p) for g, p, s in zip(gens, perm, signs)})
    return out


def all_whitehead(gens: str) -> list[dict[str, str]]:
    return all_type_i(gens) + all_type_ii(gens)


def naive_minimal_class(gens: str, s: str) -> frozenset[str]:
    """Minimal-length orbit, closing under all automorphisms with no phases."""
    autos = all_whitehead(gens)
    cur = canonical(gens, s)
    improved = True
    while improved:
        improved = False
        for m in autos:
            img = cyclic_reduce(substitute(cur, m))
            if len(img) < len(cur):
                cur, improved = canonical(gens, img), True
                break
    seen = {cur}
    queue = deque([cur])
    while queue:
        u = queue.popleft()
        for m in autos:
            img = canonical(gens, substitute(u, m))
            if len(img) == len(cur) and img not in seen:
                seen.add(img)
                queue.append(img)
    return frozenset(seen)


def cyclic_words(gens: str, max_len: int) -> list[str]:
    """Canonical representatives of all nontrivial cyclic words up to ``max_len``."""
    out = set()
    for n in range(1, max_len + 1):
        for combo in product(letters(gens), repeat=n):
            s = "".join(combo)
            if reduce(s) == s and cyclic_reduce(s) == s:
                out.add(canonical(gens, s))
    return sorted(out, key=lambda r: (len(r), _key(gens, r)))


def parity_rewrite_embed(s: str) -> str:
    """Substitute the index-2 subgroup generators back into F(x, y)."""
    table = {"a": "yX", "b": "xx", "c": "xy"}
    return substitute(s, table)


def in_parity_kernel(s: str) -> bool:
    return len(reduce(s)) % 2 == 0


def from_letters(gens: str, letters_: tuple[int, ...]) -> str:
    return "".join(gens[abs(x) - 1] if x > 0 else gens[abs(x) - 1].upper() for x in letters_)


def to_letters(gens: str, s: str) -> tuple[int, ...]:
    return tuple((gens.index(ch.lower()) + 1) * (-1 if ch.isupper() else 1) for ch in s)

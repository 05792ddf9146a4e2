"""Weyl group elements as words in simple reflections.

A word ``s_{i1} s_{i2} ... s_{ik}`` acts as a composition of functions:
the rightmost letter is applied first.  Letters are stored 0-based.

No search here enumerates the Weyl group.  Everything is a BFS over an
orbit of roots (or pairs of roots), with parent recovery and a
lexicographic tie-break on the written letter sequence.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import LieExpError, NotConjugate, NotNice, NotOrthogonal
from .root_system import Levi, Root, RootSystem, is_positive, neg


def _view(rs: RootSystem, within: Levi | None) -> Levi:
    if within is None:
        return rs.full
    if within.ambient is not rs:
        raise LieExpError("Levi view belongs to another root system")
    return within


def reflect_simple(rs: RootSystem, i: int, v: Sequence[int]) -> Root:
    row = rs.cartan[i]
    c = sum(row[j] * v[j] for j in range(rs.rank) if v[j])
    if c == 0:
        return tuple(v)
    out = list(v)
    out[i] -= c
    return tuple(out)


def reflect(rs: RootSystem, eps: Sequence[int], delta: Sequence[int]) -> Root:
    """s_delta(eps) = eps - <eps, delta> delta."""
    c = rs.pairing(eps, delta)
    return tuple(e - c * d for e, d in zip(eps, delta))


@dataclass(frozen=True)
class WeylWord:
    rs: RootSystem
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "letters", tuple(self.letters))
        for i in self.letters:
            if not 0 <= i < self.rs.rank:
                raise LieExpError(f"reflection index s{i + 1} out of range")

    def __len__(self):
        return len(self.letters)

    def __call__(self, v: Sequence[int]) -> Root:
        return apply(self, v)

    def __mul__(self, other: "WeylWord") -> "WeylWord":
        return WeylWord(self.rs, self.letters + other.letters)

    def inverse(self) -> "WeylWord":
        return WeylWord(self.rs, self.letters[::-1])

    def __str__(self):
        return " ".join(f"s{i + 1}" for i in self.letters) or "1"

    def __repr__(self):
        return f"WeylWord({self})"

    def to_json(self) -> list[int]:
        return [i + 1 for i in self.letters]

    @classmethod
    def parse(cls, rs: RootSystem, text: str) -> "WeylWord":
        text = text.strip()
        if text in ("", "1", "e"):
            return cls(rs, ())
        toks = [t for t in re.split(r"[\s*·]+", text) if t]
        letters = []
        for t in toks:
            m = re.fullmatch(r"s_?(\d+)", t)
            if not m:
                raise LieExpError(f"bad word letter {t!r}")
            letters.append(int(m.group(1)) - 1)
        return cls(rs, tuple(letters))

    @classmethod
    def from_json(cls, rs: RootSystem, data: Sequence[int]) -> "WeylWord":
        return cls(rs, tuple(int(i) - 1 for i in data))


def word(rs: RootSystem, *one_based: int) -> WeylWord:
    return WeylWord(rs, tuple(i - 1 for i in one_based))


def apply(w: WeylWord, v: Sequence[int]) -> Root:
    rs = w.rs
    if len(v) != rs.rank:
        raise LieExpError("dimension mismatch")
    out = tuple(v)
    for i in reversed(w.letters):
        out = reflect_simple(rs, i, out)
    return out


def is_identity(w: WeylWord) -> bool:
    return all(apply(w, rs_s) == rs_s for rs_s in w.rs.simple_roots)


def orbit(rs: RootSystem, seed: Iterable[Sequence[int]], within: Levi | None = None) -> set[Root]:
    """Closure of ``seed`` under the simple reflections of ``within``."""
    gens = _view(rs, within).simple
    seen = {tuple(v) for v in seed}
    queue = deque(seen)
    while queue:
        v = queue.popleft()
        for i in gens:
            u = reflect_simple(rs, i, v)
            if u not in seen:
                seen.add(u)
                queue.append(u)
    return seen


def _bfs(rs: RootSystem, start, gens, step) -> dict:
    dist = {start: 0}
    queue = deque([start])
    while queue:
        x = queue.popleft()
        for i in gens:
            y = step(i, x)
            if y not in dist:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def _lex_least_word(rs, dist, targets, gens, step) -> WeylWord:
    """Lex-least written word among shortest paths from the BFS root to any target.

    The leftmost letter is applied last, so the word is read off by walking
    back from the targets towards the start.
    """
    d = min(dist[t] for t in targets)
    current = {t for t in targets if dist[t] == d}
    letters = []
    while d > 0:
        for i in sorted(gens):
            prev = {step(i, t) for t in current}
            prev = {p for p in prev if dist.get(p) == d - 1}
            if prev:
                letters.append(i)
                current = prev
                break
        else:  # pragma: no cover - BFS distances guarantee a predecessor
            raise AssertionError("broken BFS tree")
        d -= 1
    return WeylWord(rs, tuple(letters))


def conjugating_word(rs: RootSystem, eps: Sequence[int], delta: Sequence[int], within: Levi | None = None) -> WeylWord:
    """Shortest word w in the Weyl group of ``within`` with w(eps) = delta."""
    view = _view(rs, within)
    eps, delta = tuple(eps), tuple(delta)
    step = lambda i, v: reflect_simple(rs, i, v)
    dist = _bfs(rs, eps, view.simple, step)
    if delta not in dist:
        raise NotConjugate(f"{rs.fmt(eps)} and {rs.fmt(delta)} are not conjugate under W({view.type_name()})")
    w = _lex_least_word(rs, dist, [delta], view.simple, step)
    assert apply(w, eps) == delta
    return w


def pair_to_simple(rs: RootSystem, eps: Sequence[int], delta: Sequence[int], within: Levi | None = None):
    """Move an orthogonal pair of roots onto a pair of simple roots.

    Returns ``(w, i, j)`` with ``w(eps) = alpha_i`` and ``w(delta) = alpha_j``.
    """
    view = _view(rs, within)
    eps, delta = tuple(eps), tuple(delta)
    if not (view.contains(eps) and view.contains(delta)):
        raise LieExpError("roots must lie in the given view")
    if rs.pairing(eps, delta) != 0:
        raise NotOrthogonal(f"<{rs.fmt(eps)}, {rs.fmt(delta)}> != 0")
    simple = {rs.simple_root(i): i for i in view.simple}
    step = lambda i, p: (reflect_simple(rs, i, p[0]), reflect_simple(rs, i, p[1]))
    dist = _bfs(rs, (eps, delta), view.simple, step)
    targets = [p for p in dist if p[0] in simple and p[1] in simple]
    w = _lex_least_word(rs, dist, targets, view.simple, step)
    a, b = apply(w, eps), apply(w, delta)
    assert a in simple and b in simple and rs.pairing(a, b) == 0
    return w, simple[a], simple[b]


def longest_element(rs: RootSystem, within: Levi | None = None) -> WeylWord:
    """Reduced word for the longest element, built greedily by right multiplication."""
    view = _view(rs, within)
    letters: list[int] = []
    while True:
        w = WeylWord(rs, tuple(letters))
        for i in view.simple:
            if is_positive(apply(w, rs.simple_root(i))):
                letters.append(i)
                break
        else:
            break
    w = WeylWord(rs, tuple(letters))
    assert len(w) == len(view.positive_roots)
    return w


def length(w: WeylWord, within: Levi | None = None) -> int:
    """Number of positive roots sent to negative roots."""
    view = _view(w.rs, within)
    return sum(1 for r in view.positive_roots if not is_positive(apply(w, r)))


def _peel(rs: RootSystem, images: list[Root]) -> WeylWord:
    """Reduced word of the element sending alpha_j to images[j], peeling the smallest right descent."""
    letters = []
    while True:
        desc = [i for i in range(rs.rank) if not is_positive(images[i])]
        if not desc:
            break
        i = desc[0]
        letters.append(i)
        # images of w s_i: w(alpha_j - C_ij alpha_i)
        row = rs.cartan[i]
        images = [tuple(x - row[j] * y for x, y in zip(images[j], images[i])) if j != i else neg(images[i])
                  for j in range(rs.rank)]
    # letters were peeled from the right
    return WeylWord(rs, tuple(reversed(letters)))


def reduced(w: WeylWord) -> WeylWord:
    """A reduced word for the same element."""
    rs = w.rs
    out = _peel(rs, [apply(w, a) for a in rs.simple_roots])
    assert all(apply(out, a) == apply(w, a) for a in rs.simple_roots)
    return out


def reflection_word(rs: RootSystem, delta: Sequence[int]) -> WeylWord:
    """Reduced word for the reflection s_delta.

    An involution equals its inverse, so peeling off the smallest right
    descent each time gives a word whose reverse is the same element.
    """
    delta = tuple(delta)
    if not rs.is_root(delta):
        raise LieExpError(f"{delta} is not a root")
    w = _peel(rs, [reflect(rs, a, delta) for a in rs.simple_roots]).inverse()
    assert all(apply(w, a) == reflect(rs, a, delta) for a in rs.simple_roots)
    return w


def involution_switch(rs: RootSystem, alpha: int) -> WeylWord:
    """Involution w with w(alpha) = delta_alpha for a nice simple root.

    Abelian alpha uses the longest element of the Levi on the other simple
    roots of its component; Heisenberg alpha prefixes the reflection in its
    unique neighbour.
    """
    from . import grading_parabolic as grading

    kind = grading.classify_root(rs, alpha)
    if not grading.is_nice(rs, alpha):
        raise NotNice(f"a{alpha + 1} is not nice in {rs.name}")
    comp = rs.component_indices[rs.component_of(rs.simple_root(alpha))]
    w0 = longest_element(rs, rs.levi([i for i in comp if i != alpha]))
    if kind == grading.ABELIAN:
        w = w0
    else:
        beta = grading.neighbour(rs, alpha)
        w = WeylWord(rs, (beta,)) * w0
    target = grading.delta(rs, alpha)
    assert apply(w, rs.simple_root(alpha)) == target
    assert all(apply(w, apply(w, r)) == r for r in rs.simple_roots)
    return w


__all__ = [
    "WeylWord",
    "apply",
    "conjugating_word",
    "involution_switch",
    "length",
    "longest_element",
    "neg",
    "orbit",
    "pair_to_simple",
    "reduced",
    "reflect",
    "reflection_word",
    "word",
]

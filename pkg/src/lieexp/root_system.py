"""Split simply-laced root systems in simple-root coordinates.

Roots are plain integer tuples over the simple roots, numbered as in
Bourbaki (1-based in text, 0-based in code).  Products of simple types
are supported; the simple roots of the factors are concatenated in the
order given to :func:`build`.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from typing import Iterable, Sequence

Root = tuple[int, ...]


class RootSystemError(ValueError):
    pass


# Dynkin edges, Bourbaki numbering, 1-based.
def _edges(series: str, rank: int) -> list[tuple[int, int]]:
    if series == "A":
        return [(i, i + 1) for i in range(1, rank)]
    if series == "D":
        chain = [(i, i + 1) for i in range(1, rank - 1)]
        return chain + [(rank - 2, rank)]
    if series == "E":
        return [(1, 3), (3, 4), (4, 5), (2, 4)] + [(i, i + 1) for i in range(5, rank)]
    raise RootSystemError(f"unknown series {series}")


def _normalize(series: str, rank: int) -> list[tuple[str, int, dict[int, int]]]:
    """Return simple factors with a relabel map (requested label -> factor label)."""
    series = series.upper()
    if series in ("B", "C", "F", "G"):
        raise RootSystemError(f"{series}{rank}: simply-laced only")
    if series == "A":
        if rank < 1:
            raise RootSystemError("A_n needs n >= 1")
        return [("A", rank, {i: i for i in range(1, rank + 1)})]
    if series == "D":
        if rank < 2:
            raise RootSystemError("D_n needs n >= 2")
        if rank == 2:
            return [("A", 1, {1: 1}), ("A", 1, {2: 1})]
        if rank == 3:
            # D3 node 1 is the branch point, i.e. the middle node of A3.
            return [("A", 3, {1: 2, 2: 1, 3: 3})]
        return [("D", rank, {i: i for i in range(1, rank + 1)})]
    if series == "E":
        if rank not in (6, 7, 8):
            raise RootSystemError("E_n needs n in 6, 7, 8")
        return [("E", rank, {i: i for i in range(1, rank + 1)})]
    raise RootSystemError(f"unknown series {series!r}: simply-laced only")


def parse_type(text: str) -> list[tuple[str, int]]:
    """Parse ``"E8"``, ``"D5xA2"`` or ``"A1*A1"`` into (series, rank) pairs."""
    parts = re.split(r"[x*×,]", text.strip())
    out = []
    for p in parts:
        m = re.fullmatch(r"\s*([A-Za-z])_?(\d+)\s*", p)
        if not m:
            raise RootSystemError(f"bad type {p!r}")
        out.append((m.group(1).upper(), int(m.group(2))))
    return out


@dataclass(frozen=True)
class CartanElement:
    """Element of the Cartan subalgebra in the fundamental-coweight basis.

    ``coords[i]`` is the value on the i-th simple root, so the value on
    ``sum m_i alpha_i`` is ``sum m_i coords[i]``.
    """

    coords: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(Fraction(c) for c in self.coords))

    def __call__(self, root: Sequence[int]) -> Fraction:
        if len(root) != len(self.coords):
            raise RootSystemError("dimension mismatch")
        return sum((c * m for c, m in zip(self.coords, root) if m), Fraction(0))

    def __add__(self, other: "CartanElement") -> "CartanElement":
        return CartanElement(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other: "CartanElement") -> "CartanElement":
        return CartanElement(tuple(a - b for a, b in zip(self.coords, other.coords)))

    def __neg__(self) -> "CartanElement":
        return CartanElement(tuple(-a for a in self.coords))

    def scale(self, q) -> "CartanElement":
        q = Fraction(q)
        return CartanElement(tuple(q * a for a in self.coords))

    def __rmul__(self, q) -> "CartanElement":
        return self.scale(q)

    def to_json(self) -> dict:
        return {"coweights": {f"a{i + 1}": str(c) for i, c in enumerate(self.coords) if c}}

    @classmethod
    def from_json(cls, data: dict, rank: int) -> "CartanElement":
        coords = [Fraction(0)] * rank
        for key, val in data.get("coweights", {}).items():
            m = re.fullmatch(r"a(\d+)", key)
            if not m or not 1 <= int(m.group(1)) <= rank:
                raise RootSystemError(f"bad coweight key {key!r}")
            coords[int(m.group(1)) - 1] = Fraction(val)
        return cls(tuple(coords))


class RootSystem:
    """A split simply-laced root system, possibly a product of simple factors."""

    def __init__(self, groups: list[list[tuple[str, int, dict[int, int]]]], requested):
        self.requested = list(requested)
        self.factors = [(s, r) for g in groups for s, r, _ in g]
        self.rank = sum(r for _, r in self.factors)
        # (requested factor number, requested 1-based label) -> global 0-based index
        self.relabel: dict[tuple[int, int], int] = {}
        cartan = [[0] * self.rank for _ in range(self.rank)]
        self.component_indices: list[tuple[int, ...]] = []
        offset = 0
        for k, group in enumerate(groups):
            for s, r, rel in group:
                for a, b in _edges(s, r):
                    cartan[offset + a - 1][offset + b - 1] = -1
                    cartan[offset + b - 1][offset + a - 1] = -1
                for i in range(r):
                    cartan[offset + i][offset + i] = 2
                for lab, target in rel.items():
                    self.relabel[(k, lab)] = offset + target - 1
                self.component_indices.append(tuple(range(offset, offset + r)))
                offset += r
        self.cartan: tuple[tuple[int, ...], ...] = tuple(tuple(row) for row in cartan)
        self._check_cartan()
        self.positive_roots: tuple[Root, ...] = self._close()
        self.negative_roots: tuple[Root, ...] = tuple(neg(r) for r in self.positive_roots)
        self.roots: tuple[Root, ...] = self.positive_roots + self.negative_roots
        self._root_set = frozenset(self.roots)
        self._cvec = {r: self._cartan_vec(r) for r in self.roots}
        self.highest_roots: tuple[Root, ...] = tuple(
            max((r for r in self.positive_roots if self._in_component(r, c)), key=height)
            for c in self.component_indices
        )

    def __repr__(self):
        return f"RootSystem({self.name})"

    @property
    def name(self) -> str:
        return "x".join(f"{s}{r}" for s, r in self.factors)

    def _check_cartan(self):
        for i, row in enumerate(self.cartan):
            for j, v in enumerate(row):
                assert v == self.cartan[j][i]
                assert v == 2 if i == j else v in (0, -1)

    def _cartan_vec(self, r: Sequence[int]) -> tuple[int, ...]:
        return tuple(sum(row[j] * r[j] for j in range(self.rank) if r[j]) for row in self.cartan)

    def _close(self) -> tuple[Root, ...]:
        simple = [self.simple_root(i) for i in range(self.rank)]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for r in frontier:
                cv = self._cartan_vec(r)
                for i in range(self.rank):
                    if cv[i] < 0:
                        s = list(r)
                        s[i] -= cv[i]
                        s = tuple(s)
                        if s not in seen:
                            seen.add(s)
                            nxt.append(s)
            frontier = nxt
        return tuple(sorted(seen, key=lambda r: (height(r), tuple(-x for x in r))))

    def _in_component(self, r: Root, comp: tuple[int, ...]) -> bool:
        return all(r[i] == 0 for i in range(self.rank) if i not in comp)

    def simple_root(self, i: int) -> Root:
        if not 0 <= i < self.rank:
            raise RootSystemError(f"simple root index {i + 1} out of range")
        return tuple(1 if j == i else 0 for j in range(self.rank))

    @property
    def simple_roots(self) -> tuple[Root, ...]:
        return tuple(self.simple_root(i) for i in range(self.rank))

    def is_root(self, r: Sequence[int]) -> bool:
        return tuple(r) in self._root_set

    def pairing(self, a: Sequence[int], b: Sequence[int]) -> int:
        if len(a) != self.rank or len(b) != self.rank:
            raise RootSystemError("dimension mismatch")
        cv = self._cvec.get(b) if isinstance(b, tuple) else None
        if cv is None:
            cv = self._cartan_vec(b)
        return sum(x * y for x, y in zip(a, cv) if x)

    def eval(self, S: CartanElement, r: Sequence[int]) -> Fraction:
        return S(r)

    def component_of(self, r: Sequence[int]) -> int:
        for k, comp in enumerate(self.component_indices):
            if any(r[i] for i in comp):
                if not self._in_component(tuple(r), comp):
                    raise RootSystemError("vector spans several components")
                return k
        raise RootSystemError("zero vector has no component")

    def component_type(self, k: int) -> tuple[str, int]:
        return self.factors[k]

    def highest_root_of(self, i: int) -> Root:
        """Highest root of the component containing simple root ``i``."""
        return self.highest_roots[self.component_of(self.simple_root(i))]

    # Cartan elements
    def zero_cartan(self) -> CartanElement:
        return CartanElement((0,) * self.rank)

    def S(self, *indices: int) -> CartanElement:
        """The element taking value 2 on the given simple roots and 0 on the rest."""
        return CartanElement(tuple(2 if i in indices else 0 for i in range(self.rank)))

    def S_all(self) -> CartanElement:
        return CartanElement((2,) * self.rank)

    def coweight(self, i: int) -> CartanElement:
        return CartanElement(tuple(1 if j == i else 0 for j in range(self.rank)))

    def coroot(self, r: Sequence[int]) -> CartanElement:
        return CartanElement(self._cartan_vec(r))

    def levi(self, subset: Iterable[int]) -> "Levi":
        return Levi(self, subset)

    @cached_property
    def full(self) -> "Levi":
        return Levi(self, range(self.rank))

    # text syntax
    def parse_root(self, text: str) -> Root:
        r = parse_vector(text, self.rank)
        if not self.is_root(r):
            raise RootSystemError(f"{text!r} is not a root of {self.name}")
        return r

    def fmt(self, r: Sequence[int]) -> str:
        return format_root(r)


def build(spec: Sequence[tuple[str, int]] | str) -> RootSystem:
    """Build the root system for a list of (series, rank) pairs, e.g. ``[("D", 5)]``.

    Equal specs return the same object, so derived data cached per system is shared.
    """
    if isinstance(spec, str):
        spec = parse_type(spec)
    return _build(tuple((str(s).upper(), int(r)) for s, r in spec))


@lru_cache(maxsize=None)
def _build(spec: tuple[tuple[str, int], ...]) -> RootSystem:
    groups = [_normalize(s, int(r)) for s, r in spec]
    if not groups:
        raise RootSystemError("empty type")
    return RootSystem(groups, [(s.upper(), int(r)) for s, r in spec])


class Levi:
    """View of the sub-root-system spanned by a set of simple roots.

    Roots stay in ambient coordinates; :meth:`restrict` and :meth:`embed`
    convert to and from coordinates over ``simple`` only.
    """

    def __init__(self, ambient: RootSystem, subset: Iterable[int]):
        self.ambient = ambient
        self.simple: tuple[int, ...] = tuple(sorted(set(subset)))
        for i in self.simple:
            ambient.simple_root(i)
        sset = set(self.simple)
        self.positive_roots: tuple[Root, ...] = tuple(
            r for r in ambient.positive_roots if all(r[i] == 0 for i in range(ambient.rank) if i not in sset)
        )
        self.roots: tuple[Root, ...] = self.positive_roots + tuple(neg(r) for r in self.positive_roots)
        self._root_set = frozenset(self.roots)
        self.components: tuple[tuple[int, ...], ...] = _components(ambient, self.simple)
        self.highest_roots: tuple[Root, ...] = tuple(
            max((r for r in self.positive_roots if all(r[i] == 0 for i in range(ambient.rank) if i not in c)), key=height)
            for c in self.components
        )

    def __repr__(self):
        return f"Levi({self.ambient.name}, {[i + 1 for i in self.simple]})"

    def __eq__(self, other):
        return isinstance(other, Levi) and other.ambient is self.ambient and other.simple == self.simple

    def __hash__(self):
        return hash((id(self.ambient), self.simple))

    @property
    def rank(self) -> int:
        return len(self.simple)

    def contains(self, r: Sequence[int]) -> bool:
        return tuple(r) in self._root_set

    def component_of(self, r: Sequence[int]) -> int | None:
        for k, comp in enumerate(self.components):
            if all(r[i] == 0 for i in range(self.ambient.rank) if i not in comp) and any(r[i] for i in comp):
                return k
        return None

    def restrict(self, r: Sequence[int]) -> tuple[int, ...]:
        return tuple(r[i] for i in self.simple)

    def embed(self, local: Sequence[int]) -> Root:
        out = [0] * self.ambient.rank
        for i, c in zip(self.simple, local):
            out[i] = c
        return tuple(out)

    def component_types(self) -> list[tuple[str, int]]:
        return [identify(self.ambient, c) for c in self.components]

    def type_name(self) -> str:
        if not self.components:
            return "T"
        return "x".join(f"{s}{r}" for s, r in self.component_types())


def _components(rs: RootSystem, subset: tuple[int, ...]) -> tuple[tuple[int, ...], ...]:
    left = set(subset)
    comps = []
    while left:
        start = min(left)
        stack, comp = [start], {start}
        while stack:
            i = stack.pop()
            for j in list(left):
                if j not in comp and rs.cartan[i][j] == -1:
                    comp.add(j)
                    stack.append(j)
        left -= comp
        comps.append(tuple(sorted(comp)))
    return tuple(sorted(comps))


def identify(rs: RootSystem, comp: Sequence[int]) -> tuple[str, int]:
    """Cartan type of a connected set of simple roots, from its root count and shape."""
    n = len(comp)
    npos = sum(1 for r in rs.positive_roots if all(r[i] == 0 for i in range(rs.rank) if i not in comp))
    if npos == n * (n + 1) // 2:
        return ("A", n)
    if n >= 4 and npos == n * (n - 1):
        return ("D", n)
    for k, count in ((6, 36), (7, 63), (8, 120)):
        if n == k and npos == count:
            return ("E", k)
    raise RootSystemError("unrecognised component")


def height(r: Sequence[int]) -> int:
    return sum(r)


def neg(r: Sequence[int]) -> Root:
    return tuple(-x for x in r)


def add(a: Sequence[int], b: Sequence[int]) -> Root:
    return tuple(x + y for x, y in zip(a, b))


def sub(a: Sequence[int], b: Sequence[int]) -> Root:
    return tuple(x - y for x, y in zip(a, b))


def is_positive(r: Sequence[int]) -> bool:
    return any(r) and all(x >= 0 for x in r)


_TERM = re.compile(r"(\d*)\s*a\s*(\d+)")


def parse_vector(text: str, rank: int) -> Root:
    """Parse ``"a1+a2+2a3"``, ``"-a1+a2"`` (negated sum) or ``"[1,1,2,0,0]"``."""
    s = text.strip().replace(" ", "")
    if s.startswith("[") or s.startswith("-["):
        sign = -1 if s.startswith("-") else 1
        try:
            vals = [int(x) for x in s.lstrip("-").strip("[]").split(",") if x != ""]
        except ValueError as exc:
            raise RootSystemError(f"bad vector {text!r}") from exc
        if len(vals) != rank:
            raise RootSystemError(f"{text!r}: expected {rank} coefficients")
        return tuple(sign * v for v in vals)
    if not s:
        raise RootSystemError("empty root")
    sign = 1
    if s[0] == "-" and "-" not in s[1:]:
        sign, s = -1, s[1:]
        parts = [(1, p) for p in s.split("+")]
    else:
        parts = [(-1 if p.startswith("-") else 1, p.lstrip("+-")) for p in re.findall(r"[+-]?[^+-]+", s)]
    out = [0] * rank
    for sg, p in parts:
        m = _TERM.fullmatch(p)
        if not m:
            raise RootSystemError(f"bad root term {p!r} in {text!r}")
        idx = int(m.group(2))
        if not 1 <= idx <= rank:
            raise RootSystemError(f"index a{idx} out of range")
        out[idx - 1] += sg * int(m.group(1) or 1)
    return tuple(sign * v for v in out)


def format_root(r: Sequence[int]) -> str:
    if not any(r):
        return "0"
    sign = ""
    if all(x <= 0 for x in r):
        sign, r = "-", neg(r)
    if all(x >= 0 for x in r):
        terms = [f"{'' if c == 1 else c}a{i + 1}" for i, c in enumerate(r) if c]
        return sign + "+".join(terms)
    return "[" + ",".join(str(x) for x in r) + "]"

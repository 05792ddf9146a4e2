"""Chevalley basis of a split simply-laced Lie algebra.

Basis keys: a root tuple ``r`` stands for ``e_r`` when ``r`` is positive
and for ``f_{-r}`` when ``r`` is negative; an int ``i`` stands for the
coroot ``h_i`` of the i-th simple root.

Signs come from the bimultiplicative asymmetry function on the root
lattice with eps(a_i, a_j) = -1 exactly when i == j, or i < j and the
nodes are adjacent.  With E_a the Frenkel-Kac basis,
``[E_a, E_b] = eps(a, b) E_{a+b}`` and ``[E_a, E_{-a}] = -h_a``; we set
``e_r = E_r`` and ``f_r = -E_{-r}`` so that ``[e_r, f_r] = h_r``.
"""

from __future__ import annotations

import json
import random
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Mapping, Union

from . import linalg
from .errors import LieExpError, NonNilpotent, NotOrthogonalSupport
from .root_system import Root, RootSystem, add, is_positive, neg

Key = Union[Root, int]


class AlgebraElement:
    """Finitely supported rational combination of basis vectors."""

    __slots__ = ("rs", "coeffs")

    def __init__(self, rs: RootSystem, coeffs: Mapping[Key, object] | None = None):
        self.rs = rs
        self.coeffs: dict[Key, Fraction] = {}
        for k, v in (coeffs or {}).items():
            v = Fraction(v)
            if v:
                self.coeffs[k] = v

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for k, v in other.coeffs.items():
            out[k] = out.get(k, 0) + v
        return AlgebraElement(self.rs, out)

    def __neg__(self) -> "AlgebraElement":
        return AlgebraElement(self.rs, {k: -v for k, v in self.coeffs.items()})

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + (-other)

    def scale(self, q) -> "AlgebraElement":
        q = Fraction(q)
        return AlgebraElement(self.rs, {k: q * v for k, v in self.coeffs.items()})

    def __rmul__(self, q) -> "AlgebraElement":
        return self.scale(q)

    def __eq__(self, other):
        return isinstance(other, AlgebraElement) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"AlgebraElement({json.dumps(self.to_json(), sort_keys=True)})"

    def weights(self) -> set:
        """Root-space weights in the support; 0 stands for the Cartan."""
        return {k if isinstance(k, tuple) else 0 for k in self.coeffs}

    def to_json(self) -> dict:
        out: dict = {"e": {}, "f": {}, "h": {}}
        for k, v in sorted(self.coeffs.items(), key=lambda kv: _sort_key(kv[0])):
            if isinstance(k, int):
                out["h"][f"a{k + 1}"] = str(v)
            elif is_positive(k):
                out["e"][self.rs.fmt(k)] = str(v)
            else:
                out["f"][self.rs.fmt(neg(k))] = str(v)
        return out

    @classmethod
    def from_json(cls, rs: RootSystem, data: Mapping) -> "AlgebraElement":
        coeffs: dict = {}
        for name, sign in (("e", 1), ("f", -1)):
            for txt, v in data.get(name, {}).items():
                r = rs.parse_root(txt)
                if not is_positive(r):
                    raise LieExpError(f"{name}-keys must be positive roots")
                coeffs[r if sign == 1 else neg(r)] = Fraction(v)
        for txt, v in data.get("h", {}).items():
            i = int(txt.lstrip("a")) - 1
            rs.simple_root(i)
            coeffs[i] = Fraction(v)
        return cls(rs, coeffs)


def _sort_key(k: Key):
    if isinstance(k, int):
        return (1, (k,))
    return (0 if is_positive(k) else 2, tuple(abs(x) for x in k))


class ChevalleyAlgebra:
    def __init__(self, rs: RootSystem):
        self.rs = rs
        self.dim = len(rs.roots) + rs.rank
        self.basis: tuple[Key, ...] = tuple(rs.positive_roots) + tuple(range(rs.rank)) + tuple(rs.negative_roots)
        self.index: dict[Key, int] = {k: n for n, k in enumerate(self.basis)}
        n = rs.rank
        self._eps = [
            [(-1 if i == j or (i < j and rs.cartan[i][j] == -1) else 1) for j in range(n)] for i in range(n)
        ]
        self._N: dict[tuple[Root, Root], int] = {}
        for a in rs.roots:
            for b in rs.roots:
                s = add(a, b)
                if rs.is_root(s):
                    self._N[(a, b)] = _sgn(a) * _sgn(b) * _sgn(s) * self.asym(a, b)

    def asym(self, a: Root, b: Root) -> int:
        """The asymmetry function, bimultiplicative in both arguments."""
        parity = 0
        for i, ai in enumerate(a):
            if ai:
                row = self._eps[i]
                for j, bj in enumerate(b):
                    if bj and row[j] == -1:
                        parity += ai * bj
        return -1 if parity % 2 else 1

    def N(self, a: Root, b: Root) -> int:
        """Structure constant: [x_a, x_b] = N(a, b) x_{a+b}; 0 when a+b is not a root."""
        return self._N.get((a, b), 0)

    # basis vectors
    def e(self, r: Root) -> AlgebraElement:
        return AlgebraElement(self.rs, {tuple(r): 1})

    def f(self, r: Root) -> AlgebraElement:
        return AlgebraElement(self.rs, {neg(r): 1})

    def h(self, i: int) -> AlgebraElement:
        return AlgebraElement(self.rs, {i: 1})

    def coroot(self, r: Root) -> AlgebraElement:
        return AlgebraElement(self.rs, {i: c for i, c in enumerate(r) if c})

    def bracket_basis(self, x: Key, y: Key) -> list[tuple[Key, int]]:
        rs = self.rs
        xi, yi = isinstance(x, int), isinstance(y, int)
        if xi and yi:
            return []
        if xi:
            c = rs.pairing(y, rs.simple_root(x))
            return [(y, c)] if c else []
        if yi:
            c = rs.pairing(x, rs.simple_root(y))
            return [(x, -c)] if c else []
        s = add(x, y)
        if not any(s):
            return [(i, c) for i, c in enumerate(x) if c]
        n = self._N.get((x, y))
        return [(s, n)] if n else []

    def ad(self, X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
        out: dict[Key, Fraction] = {}
        for kx, vx in X.coeffs.items():
            for ky, vy in Y.coeffs.items():
                for k, c in self.bracket_basis(kx, ky):
                    out[k] = out.get(k, 0) + c * vx * vy
        return AlgebraElement(self.rs, out)

    bracket = ad

    def check_jacobi(self, triples: Iterable[tuple[Key, Key, Key]]) -> int:
        """Assert the Jacobi identity on basis triples; returns how many were checked."""
        n = 0
        for x, y, z in triples:
            X, Y, Z = (AlgebraElement(self.rs, {k: 1}) for k in (x, y, z))
            total = self.ad(X, self.ad(Y, Z)) + self.ad(Y, self.ad(Z, X)) + self.ad(Z, self.ad(X, Y))
            if total:
                raise AssertionError(f"Jacobi fails on {x}, {y}, {z}")
            n += 1
        return n

    def sample_triples(self, count: int, seed: int = 0):
        rng = random.Random(seed)
        for _ in range(count):
            yield tuple(rng.choice(self.basis) for _ in range(3))

    def all_triples(self):
        return product(self.basis, repeat=3)

    # covectors and nilpotents
    def dual_nilpotent(self, phi: "Covector") -> AlgebraElement:
        """Killing dual of phi: positive-root component c_eps becomes c_eps f_eps."""
        return AlgebraElement(self.rs, {(neg(k) if isinstance(k, tuple) else k): v for k, v in phi.items()})

    def covector_of(self, x: AlgebraElement) -> dict:
        return {(neg(k) if isinstance(k, tuple) else k): v for k, v in x.coeffs.items()}

    def ad_rows(self, x: AlgebraElement) -> list[dict]:
        """Images [Y, x] of every basis vector Y, as sparse rows over basis indices."""
        rows = []
        for k in self.basis:
            row: dict[int, Fraction] = {}
            for kx, vx in x.coeffs.items():
                for kk, c in self.bracket_basis(k, kx):
                    j = self.index[kk]
                    row[j] = row.get(j, 0) + c * vx
            rows.append(row)
        return rows

    def centralizer_dim(self, x: AlgebraElement) -> int:
        return self.dim - linalg.rank(self.ad_rows(x))

    def orbit_dim(self, x: AlgebraElement) -> int:
        return self.dim - self.centralizer_dim(x)

    def centralizer_basis(self, x: AlgebraElement) -> list[AlgebraElement]:
        # columns of the ad matrix are the rows transposed
        cols: dict[int, dict[int, Fraction]] = {}
        for i, row in enumerate(self.ad_rows(x)):
            for j, v in row.items():
                cols.setdefault(j, {})[i] = v
        basis = linalg.nullspace(list(cols.values()), list(range(self.dim)))
        return [AlgebraElement(self.rs, {self.basis[i]: v for i, v in vec.items()}) for vec in basis]

    def sl2_triple(self, phi: "Covector") -> tuple[AlgebraElement, AlgebraElement, AlgebraElement]:
        rs = self.rs
        support = [k for k in phi]
        if not support or any(not isinstance(k, tuple) or not is_positive(k) for k in support):
            raise NotOrthogonalSupport("support must be a nonempty set of positive roots")
        for a in support:
            for b in support:
                if a != b and rs.pairing(a, b) != 0:
                    raise NotOrthogonalSupport(f"{rs.fmt(a)} and {rs.fmt(b)} are not orthogonal")
        f = self.dual_nilpotent(phi)
        h = AlgebraElement(rs, {})
        e = AlgebraElement(rs, {})
        for r, c in phi.items():
            h = h + self.coroot(r)
            e = e + self.e(r).scale(1 / Fraction(c))
        assert self.ad(e, f) == h
        assert self.ad(h, e) == e.scale(2)
        assert self.ad(h, f) == f.scale(-2)
        return e, h, f

    def exp_ad(self, X: AlgebraElement, Y: AlgebraElement) -> AlgebraElement:
        """exp(ad X) Y as a finite sum."""
        total = Y
        term = Y
        for k in range(1, self.dim + 2):
            term = self.ad(X, term).scale(Fraction(1, k))
            if not term:
                return total
            total = total + term
        raise NonNilpotent("ad X is not nilpotent on this vector")

    def exp_ad_apply(self, X: AlgebraElement, phi: "Covector") -> "Covector":
        """Coadjoint action of Exp(X) on phi, through the Killing identification."""
        return Covector(self.rs, self.covector_of(self.exp_ad(X, self.dual_nilpotent(phi))))


def _sgn(r: Root) -> int:
    return 1 if is_positive(r) else -1


class Covector(dict):
    """Functional on the Lie algebra, stored by root.

    A positive key eps carries the component in the dual of g_eps's
    opposite space (it pairs with e_eps), i.e. the coefficient of f_eps in
    the Killing dual.  Negative keys and int keys (Cartan) appear only
    after deformations.
    """

    def __init__(self, rs: RootSystem, data: Mapping | None = None):
        super().__init__()
        self.rs = rs
        for k, v in (data or {}).items():
            v = Fraction(v)
            if v:
                self[tuple(k) if not isinstance(k, int) else k] = v

    @property
    def support(self) -> list[Root]:
        return sorted((k for k in self if isinstance(k, tuple)), key=lambda r: (sum(map(abs, r)), r))

    def is_negative_nilpotent(self) -> bool:
        return all(isinstance(k, tuple) and is_positive(k) for k in self)

    def __eq__(self, other):
        return dict.__eq__(self, other)

    def __hash__(self):
        return hash(frozenset(self.items()))

    def to_json(self) -> dict:
        out = {}
        for k, v in sorted(self.items(), key=lambda kv: _sort_key(kv[0])):
            if isinstance(k, int):
                out[f"h{k + 1}"] = str(v)
            else:
                out[self.rs.fmt(k)] = str(v)
        return out

    @classmethod
    def from_json(cls, rs: RootSystem, data: Mapping) -> "Covector":
        out = {}
        for txt, v in data.items():
            if txt.startswith("h"):
                out[int(txt[1:]) - 1] = v
            else:
                out[rs.parse_root(txt)] = v
        return cls(rs, out)

    @classmethod
    def parse(cls, rs: RootSystem, text: str) -> "Covector":
        """``"a4:1,a5:1"`` or ``"a1+a2:3/2; a3:1"``."""
        out = {}
        for part in text.replace(";", ",").split(","):
            part = part.strip()
            if not part:
                continue
            if ":" in part:
                r, v = part.rsplit(":", 1)
            else:
                r, v = part, "1"
            out[rs.parse_root(r.strip())] = Fraction(v.strip())
        return cls(rs, out)

    def __str__(self):
        return ", ".join(f"{k}:{v}" for k, v in self.to_json().items()) or "0"


@lru_cache(maxsize=None)
def build_constants(rs: RootSystem, verify: bool = True) -> ChevalleyAlgebra:
    """Build the algebra; Jacobi is checked on 1000 sampled triples unless ``verify`` is false."""
    alg = ChevalleyAlgebra(rs)
    if verify:
        alg.check_jacobi(alg.sample_triples(1000))
    return alg

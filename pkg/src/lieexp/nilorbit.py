"""Classification of nilpotent covectors and constructive normal forms.

A covector is classified twice.  The primary method compares the orbit
dimension (exact centralizer rank) of each simple component against the
dimensions of the minimal and next-to-minimal orbits of that component,
then combines components by the product rule.  When the support sits at
level 2 of some S_alpha, the covector is also reduced to a normal form by
Weyl moves and exponentials of nilpotents, and the two answers must agree.

D-type partitions come from the natural 2n-dimensional representation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from typing import Iterable, Sequence

from . import linalg
from .chevalley import AlgebraElement, ChevalleyAlgebra, Covector, build_constants
from .errors import LieExpError, NotInLevel2, NotMinimal, NotNtm
from .grading_parabolic import ABELIAN, classify_root, complement_levi, delta, is_nice
from .root_system import CartanElement, Levi, Root, RootSystem, add, height, is_positive, neg, sub
from .weyl import WeylWord, _bfs, _lex_least_word, conjugating_word, reflect_simple

ZERO = "zero"
MINIMAL = "minimal"
NTM = "ntm"
LARGER = "larger"

_BALA_CARTER = {ZERO: "0", MINIMAL: "A1", NTM: "2A1", LARGER: "other"}


# rank-two typing

def rank2_type(rs: RootSystem, eps: Root, other: Root) -> str:
    """Class of f_eps + f_other for distinct positive roots, read off their pairing."""
    if _proportional(eps, other):
        raise LieExpError("roots must not be proportional")
    p = rs.pairing(eps, other)
    if p > 0:
        return MINIMAL
    return NTM if p == 0 else LARGER


def _proportional(a: Root, b: Root) -> bool:
    return all(a[i] * b[j] == a[j] * b[i] for i in range(len(a)) for j in range(len(a)))


# labels

@dataclass(frozen=True)
class OrbitLabel:
    cls: str
    dim: int
    components: tuple[tuple[int, str, int], ...] = ()
    partition: str | None = None
    method: str = "dimension"

    @property
    def bala_carter(self) -> str:
        if self.cls == NTM and sum(1 for _, c, _ in self.components if c == MINIMAL) == 2:
            return "A1xA1"
        return _BALA_CARTER[self.cls]

    def to_json(self) -> dict:
        out = {"class": self.cls, "bala_carter": self.bala_carter, "dim": self.dim, "method": self.method}
        if self.partition is not None:
            out["partition"] = self.partition
        if len(self.components) > 1:
            out["components"] = [{"component": k + 1, "class": c, "dim": d} for k, c, d in self.components]
        return out


# orbit dimensions per simple component

def _restricted(phi: Covector, comp: Sequence[int]) -> Covector:
    cs = set(comp)
    return Covector(phi.rs, {k: v for k, v in phi.items() if all(k[i] == 0 for i in range(len(k)) if i not in cs)})


@lru_cache(maxsize=None)
def _component_dims(rs: RootSystem, k: int) -> tuple[int, frozenset]:
    """Minimal orbit dimension and next-to-minimal orbit dimensions of component k."""
    alg = build_constants(rs)
    comp = rs.component_indices[k]
    top = rs.highest_roots[k]
    dmin = alg.orbit_dim(alg.f(top))
    ntm = set()
    for i, j in combinations(comp, 2):
        if rs.cartan[i][j] == 0:
            x = alg.f(rs.simple_root(i)) + alg.f(rs.simple_root(j))
            ntm.add(alg.orbit_dim(x))
    return dmin, frozenset(ntm)


def _class_from_dim(rs: RootSystem, k: int, d: int) -> str:
    if d == 0:
        return ZERO
    dmin, dntm = _component_dims(rs, k)
    if d == dmin:
        return MINIMAL
    return NTM if d in dntm else LARGER


def combine(classes: Iterable[str]) -> str:
    """Product rule for orbits of a sum of simple ideals."""
    cs = [c for c in classes if c != ZERO]
    if not cs:
        return ZERO
    if len(cs) == 1:
        return cs[0]
    if len(cs) == 2 and cs == [MINIMAL, MINIMAL]:
        return NTM
    return LARGER


def classify(rs: RootSystem, phi: Covector, check: bool = True) -> OrbitLabel:
    alg = build_constants(rs)
    if not phi.is_negative_nilpotent():
        raise LieExpError("covector must be supported on positive roots")
    comps = []
    total = 0
    for k, comp in enumerate(rs.component_indices):
        part = _restricted(phi, comp)
        d = alg.orbit_dim(alg.dual_nilpotent(part)) if part else 0
        total += d
        comps.append((k, _class_from_dim(rs, k, d), d))
    cls = combine(c for _, c, _ in comps)
    method = "dimension"
    if check:
        verdicts = []
        for k, comp in enumerate(rs.component_indices):
            part = _restricted(phi, comp)
            if not part:
                continue
            alpha = _level_two_node(rs, part, comp)
            if alpha is None:
                verdicts = None
                break
            verdicts.append(_reduce(alg, part, alpha).cls)
        if verdicts is not None:
            by_form = combine(verdicts)
            if by_form != cls:
                raise AssertionError(f"classification disagrees: dimension says {cls}, normal form says {by_form}")
            method = "dimension+normal form"
    partition = None
    nonzero = [k for k, c, _ in comps if c != ZERO]
    if len(rs.component_indices) == 1 and rs.factors[0][0] == "D":
        partition = d_partition(rs, phi)
    elif len(nonzero) == 1 and rs.factors[nonzero[0]][0] == "D":
        partition = d_partition(rs, _restricted(phi, rs.component_indices[nonzero[0]]), nonzero[0])
    return OrbitLabel(cls, total, tuple(comps), partition, method)


def _level_two_node(rs: RootSystem, phi: Covector, comp: Sequence[int]) -> int | None:
    for a in comp:
        if all(r[a] == 1 for r in phi):
            return a
    return None


# transforms

@dataclass(frozen=True)
class Transform:
    """A replayable sequence of group elements acting on covectors.

    Steps are ``("weyl", i)`` for the representative exp(e_i) exp(-f_i) exp(e_i)
    of the simple reflection s_i, or ``("exp", X)`` for Exp(X).  Steps are
    applied in list order.
    """

    steps: tuple = ()

    def __len__(self):
        return len(self.steps)

    def then(self, other: "Transform") -> "Transform":
        return Transform(self.steps + other.steps)

    @classmethod
    def weyl(cls, w: WeylWord) -> "Transform":
        return cls(tuple(("weyl", i) for i in reversed(w.letters)))

    def weyl_part(self, rs: RootSystem) -> WeylWord:
        """The Weyl group component: the product of the reflection steps."""
        return WeylWord(rs, tuple(i for kind, i in reversed(self.steps) if kind == "weyl"))

    def apply(self, alg: ChevalleyAlgebra, phi: Covector) -> Covector:
        for kind, x in self.steps:
            if kind == "weyl":
                phi = weyl_rep_apply(alg, x, phi)
            else:
                phi = alg.exp_ad_apply(x, phi)
        return phi

    def to_json(self) -> list:
        out = []
        for kind, x in self.steps:
            out.append({"weyl": f"s{x + 1}"} if kind == "weyl" else {"exp": x.to_json()})
        return out

    @classmethod
    def from_json(cls, rs: RootSystem, data: list) -> "Transform":
        steps = []
        for item in data:
            if "weyl" in item:
                steps.append(("weyl", int(item["weyl"][1:]) - 1))
            else:
                steps.append(("exp", AlgebraElement.from_json(rs, item["exp"])))
        return cls(tuple(steps))


def weyl_rep_apply(alg: ChevalleyAlgebra, i: int, phi: Covector) -> Covector:
    a = alg.rs.simple_root(i)
    e, f = alg.e(a), alg.f(a)
    phi = alg.exp_ad_apply(e, phi)
    phi = alg.exp_ad_apply(-f, phi)
    return alg.exp_ad_apply(e, phi)


@dataclass(frozen=True)
class NormalForm:
    transform: Transform
    result: Covector
    cls: str
    beta: Root | None = None

    def to_json(self) -> dict:
        rs = self.result.rs
        out = {
            "class": self.cls,
            "result": self.result.to_json(),
            "transform": self.transform.to_json(),
            "weyl_part": str(self.transform.weyl_part(rs)),
        }
        if self.beta is not None:
            out["beta"] = rs.fmt(self.beta)
        return out


def _low(roots: Iterable[Root]) -> Root:
    return min(roots, key=lambda r: (height(r), r))


def _reduce(alg: ChevalleyAlgebra, phi: Covector, alpha: int, to_delta: bool = True) -> NormalForm:
    """Reduce a level-2 covector for S_alpha; the class is read off the end state."""
    rs = alg.rs
    a = rs.simple_root(alpha)
    if not phi:
        return NormalForm(Transform(), phi, ZERO)
    steps = Transform()
    levi = complement_levi(rs, alpha)
    # move a lowest support root onto alpha
    w = conjugating_word(rs, _low(phi.support), a, levi)
    if len(w):
        t = Transform.weyl(w)
        phi = t.apply(alg, phi)
        steps = steps.then(t)
    assert phi.get(a)
    # clear the roots pairing to 1 with alpha, lowest height first
    while True:
        bad = [r for r in phi if r != a and rs.pairing(r, a) == 1]
        if not bad:
            break
        eps = _low(bad)
        beta = sub(eps, a)
        fb = alg.f(beta)
        img = alg.ad(fb, alg.f(a).scale(phi[a])).coeffs.get(neg(eps), 0)
        t = Transform((("exp", fb.scale(-Fraction(phi[eps]) / img)),))
        phi = t.apply(alg, phi)
        steps = steps.then(t)
        assert eps not in phi
    if set(phi) == {a}:
        return NormalForm(steps, phi, MINIMAL)
    ortho = [r for r in phi if r != a and rs.pairing(r, a) == 0]
    if not ortho:
        return NormalForm(steps, phi, LARGER)
    beta = _low(ortho)
    Z = rs.coroot(a) + rs.coroot(beta) - rs.S(alpha)
    cand = [g for g in levi.roots]
    while True:
        rest = {r: v for r, v in phi.items() if r not in (a, beta)}
        if not rest:
            break
        degs = {r: -Z(r) for r in rest}
        d = min(degs.values())
        if d <= 0:
            return NormalForm(steps, phi, LARGER)
        target = {r: -v for r, v in rest.items() if degs[r] == d}
        phi0 = alg.dual_nilpotent(Covector(rs, {a: phi[a], beta: phi[beta]}))
        gens = [g for g in cand if Z(g) == d]
        cols = [alg.covector_of(alg.ad(AlgebraElement(rs, {g: 1}), phi0)) for g in gens]
        x = linalg.solve(cols, target)
        if x is None:
            return NormalForm(steps, phi, LARGER)
        X = AlgebraElement(rs, {g: c for g, c in zip(gens, x) if c})
        t = Transform((("exp", X),))
        phi = t.apply(alg, phi)
        steps = steps.then(t)
    if to_delta and is_nice(rs, alpha) and not (
        classify_root(rs, alpha) == ABELIAN and rs.pairing(a, rs.highest_root_of(alpha)) > 0
    ):
        d = delta(rs, alpha)
        if beta != d:
            step = lambda i, p: (reflect_simple(rs, i, p[0]), reflect_simple(rs, i, p[1]))
            dist = _bfs(rs, (a, beta), levi.simple, step)
            if (a, d) not in dist:
                raise AssertionError(f"no Weyl element of L_alpha moves {rs.fmt(beta)} to delta")
            w = _lex_least_word(rs, dist, [(a, d)], levi.simple, step)
            t = Transform.weyl(w)
            phi = t.apply(alg, phi)
            steps = steps.then(t)
            beta = d
    assert set(phi) == {a, beta}
    return NormalForm(steps, phi, NTM, beta)


def _check_level2(rs: RootSystem, phi: Covector, alpha: int):
    if not phi.is_negative_nilpotent():
        raise NotInLevel2("covector must be supported on positive roots")
    bad = [r for r in phi if r[alpha] != 1]
    if bad:
        raise NotInLevel2("not at level 2 of S_alpha: " + ", ".join(rs.fmt(r) for r in bad))


def normal_form_min(rs: RootSystem, phi: Covector, alpha: int) -> NormalForm:
    _check_level2(rs, phi, alpha)
    alg = build_constants(rs)
    label = classify(rs, phi, check=False)
    if label.cls != MINIMAL:
        raise NotMinimal(f"covector is {label.cls}, not minimal")
    nf = _reduce(alg, phi, alpha)
    if nf.cls != MINIMAL:
        raise AssertionError("normal form disagrees with the dimension count")
    assert nf.transform.apply(alg, phi) == nf.result
    return nf


def normal_form_ntm(rs: RootSystem, phi: Covector, alpha: int) -> NormalForm:
    _check_level2(rs, phi, alpha)
    alg = build_constants(rs)
    label = classify(rs, phi, check=False)
    if label.cls != NTM:
        raise NotNtm(f"covector is {label.cls}, not next-to-minimal")
    nf = _reduce(alg, phi, alpha)
    if nf.cls != NTM:
        raise AssertionError("normal form disagrees with the dimension count")
    assert nf.transform.apply(alg, phi) == nf.result
    return nf


# D-type partitions

def _mat_zero(n):
    return [[Fraction(0)] * n for _ in range(n)]


def _mat_mul(A, B):
    n = len(A)
    out = _mat_zero(n)
    for i in range(n):
        Ai = A[i]
        for k in range(n):
            if Ai[k]:
                Bk = B[k]
                for j in range(n):
                    if Bk[j]:
                        out[i][j] += Ai[k] * Bk[j]
    return out


def _mat_bracket(A, B):
    AB, BA = _mat_mul(A, B), _mat_mul(B, A)
    return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(AB, BA)]


def _mat_rows(A) -> list[dict]:
    return [{j: v for j, v in enumerate(row) if v} for row in A]


@lru_cache(maxsize=None)
def natural_representation(rs: RootSystem, k: int = 0) -> dict:
    """Matrices of the basis vectors of a D_n component in so(2n).

    Simple generators go to the standard root matrices; the other root
    vectors are obtained by bracketing, divided by the structure constant,
    so the map is a Lie algebra homomorphism for this Chevalley basis.
    """
    series, n = rs.factors[k]
    if series != "D":
        raise LieExpError("natural representation is only built for D_n components")
    comp = rs.component_indices[k]
    dim = 2 * n
    idx = lambda s: s - 1 if s > 0 else dim + s  # v_s for s = +-1..+-n

    def unit(p, q):
        m = _mat_zero(dim)
        m[idx(p)][idx(q)] = Fraction(1)
        return m

    def minus(A, B):
        return [[x - y for x, y in zip(r1, r2)] for r1, r2 in zip(A, B)]

    def root_mat(p, q):
        # root eps_p - eps_q, with negative indices meaning -eps
        return minus(unit(p, q), unit(-q, -p))

    gens_e, gens_f = {}, {}
    for t in range(n):
        if t < n - 1:
            i, j = t + 1, t + 2
            gens_e[t] = root_mat(i, j)
            gens_f[t] = root_mat(j, i)
        else:
            gens_e[t] = root_mat(n - 1, -n)
            gens_f[t] = root_mat(-n, n - 1)
    alg = build_constants(rs)
    img: dict = {}
    local = lambda r: tuple(r[i] for i in comp)
    pos = [r for r in rs.positive_roots if any(r[i] for i in comp)]
    for r in sorted(pos, key=height):
        lr = local(r)
        if height(r) == 1:
            t = lr.index(1)
            img[r], img[neg(r)] = gens_e[t], gens_f[t]
            continue
        for t in range(n):
            s = rs.simple_root(comp[t])
            rest = sub(r, s)
            if rs.is_root(rest) and is_positive(rest):
                img[r] = [[x / alg.N(s, rest) for x in row] for row in _mat_bracket(img[s], img[rest])]
                img[neg(r)] = [
                    [x / alg.N(neg(s), neg(rest)) for x in row] for row in _mat_bracket(img[neg(s)], img[neg(rest)])
                ]
                break
    for t in range(n):
        img[comp[t]] = _mat_bracket(gens_e[t], gens_f[t])
    return img


def _as_matrix(rs: RootSystem, x: AlgebraElement, k: int):
    img = natural_representation(rs, k)
    n = 2 * rs.factors[k][1]
    out = _mat_zero(n)
    for key, c in x.coeffs.items():
        m = img[key]
        for i in range(n):
            for j in range(n):
                if m[i][j]:
                    out[i][j] += c * m[i][j]
    return out


def jordan_type(M) -> tuple[int, ...]:
    """Partition of a nilpotent matrix from the ranks of its powers."""
    n = len(M)
    ranks = [n]
    P = [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    while ranks[-1] > 0:
        P = _mat_mul(P, M)
        r = linalg.rank(_mat_rows(P))
        if r == ranks[-1]:
            raise LieExpError("matrix is not nilpotent")
        ranks.append(r)
    at_least = [ranks[i] - ranks[i + 1] for i in range(len(ranks) - 1)]  # parts of size > i
    parts = []
    for size in range(len(at_least), 0, -1):
        bigger = at_least[size] if size < len(at_least) else 0
        parts += [size] * (at_least[size - 1] - bigger)
    return tuple(parts)


def _span_basis(vectors: list[list[Fraction]]) -> list[dict]:
    return list(linalg.echelon([{j: v for j, v in enumerate(vec) if v} for vec in vectors]).values())


def _intersect(A: list[dict], B: list[dict], n: int) -> list[dict]:
    if not A or not B:
        return []
    cols = {}
    for c, vec in enumerate(A + B):
        for j, v in vec.items():
            cols.setdefault(j, {})[c] = v if c < len(A) else -v
    out = []
    for sol in linalg.nullspace(list(cols.values()), list(range(len(A) + len(B)))):
        v: dict = {}
        for c, coef in sol.items():
            if c < len(A):
                for j, x in A[c].items():
                    v[j] = v.get(j, 0) + coef * x
        out.append(v)
    return list(linalg.echelon(out).values())


def _very_even_tag(M, n: int) -> str:
    """I or II by the family of the canonical Lagrangian sum of im f^m meet ker f^m."""
    dim = 2 * n
    pieces: list[dict] = []
    P = [[Fraction(int(i == j)) for j in range(dim)] for i in range(dim)]
    for _ in range(dim):
        P = _mat_mul(P, M)
        if not any(any(r) for r in P):
            break
        image = _span_basis([[P[i][j] for i in range(dim)] for j in range(dim)])
        kernel = linalg.nullspace(_mat_rows(P), list(range(dim)))
        pieces += _intersect(image, kernel, dim)
    lag = list(linalg.echelon(pieces).values())
    assert len(lag) == n
    ref = [{j: Fraction(1)} for j in range(n)]
    meet = len(_intersect(lag, ref, dim))
    return "I" if (meet - n) % 2 == 0 else "II"


def d_partition(rs: RootSystem, phi: Covector, k: int = 0) -> str:
    alg = build_constants(rs)
    M = _as_matrix(rs, alg.dual_nilpotent(phi), k)
    parts = jordan_type(M)
    tag = _very_even_tag(M, rs.factors[k][1]) if parts and all(p % 2 == 0 for p in parts) else None
    return format_partition(parts, tag)


def format_partition(parts: Sequence[int], tag: str | None = None) -> str:
    out = []
    for p in sorted(set(parts), reverse=True):
        m = list(parts).count(p)
        out.append(f"{p}" if m == 1 else f"{p}^{m}")
    text = "".join(out)
    return f"{text}_{tag}" if tag else text


# D_n catalog and closure order

@dataclass(frozen=True)
class DnOrbit:
    parts: tuple[int, ...]
    tag: str | None
    dim: int

    @property
    def name(self) -> str:
        return format_partition(self.parts, self.tag)


@dataclass(frozen=True)
class DnOrbitCatalog:
    n: int
    orbits: tuple[DnOrbit, ...]

    def by_name(self, name: str) -> DnOrbit:
        for o in self.orbits:
            if o.name == name:
                return o
        raise KeyError(name)


def _partitions(total: int, largest: int | None = None):
    if total == 0:
        yield ()
        return
    for p in range(min(total, largest or total), 0, -1):
        for rest in _partitions(total - p, p):
            yield (p,) + rest


def _transpose(parts: Sequence[int]) -> list[int]:
    return [sum(1 for p in parts if p > i) for i in range(parts[0])] if parts else []


def d_orbit_dim(n: int, parts: Sequence[int]) -> int:
    odd = sum(1 for p in parts if p % 2)
    return n * (2 * n - 1) - (sum(c * c for c in _transpose(parts)) - odd) // 2


def dn_catalog(n: int) -> DnOrbitCatalog:
    if n < 3:
        raise LieExpError("D_n catalog needs n >= 3")
    out = []
    for parts in _partitions(2 * n):
        if any(parts.count(p) % 2 for p in set(parts) if p % 2 == 0):
            continue
        d = d_orbit_dim(n, parts)
        if all(p % 2 == 0 for p in parts):
            out += [DnOrbit(parts, "I", d), DnOrbit(parts, "II", d)]
        else:
            out.append(DnOrbit(parts, None, d))
    out.sort(key=lambda o: (o.dim, o.name))
    return DnOrbitCatalog(n, tuple(out))


def _dominated(mu: Sequence[int], lam: Sequence[int]) -> bool:
    a = b = 0
    for i in range(max(len(mu), len(lam))):
        a += mu[i] if i < len(mu) else 0
        b += lam[i] if i < len(lam) else 0
        if a > b:
            return False
    return True


def _below(x: DnOrbit, y: DnOrbit) -> bool:
    if x == y or not _dominated(x.parts, y.parts):
        return False
    if x.tag and y.tag and x.tag != y.tag:
        return False
    return True


def hasse_edges(cat: DnOrbitCatalog) -> list[tuple[DnOrbit, DnOrbit]]:
    """Covering relations of the closure order (dominance; very-even I and II kept apart)."""
    edges = []
    for x in cat.orbits:
        for y in cat.orbits:
            if _below(x, y) and not any(_below(x, z) and _below(z, y) for z in cat.orbits):
                edges.append((x, y))
    return edges


def hasse_dot(cat: DnOrbitCatalog) -> str:
    lines = ["digraph {"]
    for o in cat.orbits:
        lines.append(f'  "{o.name}" [label="{o.name}\\n{o.dim}"];')
    for x, y in hasse_edges(cat):
        lines.append(f'  "{x.name}" -> "{y.name}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def hasse_json(cat: DnOrbitCatalog) -> dict:
    return {
        "type": f"D{cat.n}",
        "nodes": [{"partition": o.name, "dim": o.dim} for o in cat.orbits],
        "edges": [[x.name, y.name] for x, y in hasse_edges(cat)],
    }


# Levi restriction

def orbit_dim_in(rs: RootSystem, levi: Levi, x: AlgebraElement) -> int:
    """Dimension of the orbit of x under the Levi subgroup: rank of Y -> [Y, x], Y in l."""
    alg = build_constants(rs)
    keys = list(levi.roots) + list(range(rs.rank))
    rows = []
    for k in keys:
        row: dict = {}
        for kx, vx in x.coeffs.items():
            for kk, c in alg.bracket_basis(k, kx):
                j = alg.index[kk]
                row[j] = row.get(j, 0) + c * vx
        rows.append(row)
    return linalg.rank(rows)


@dataclass(frozen=True)
class Min2MinReport:
    checked: int
    failures: tuple[Root, ...] = ()

    @property
    def ok(self) -> bool:
        return not self.failures


def min2min_check(rs: RootSystem, levi: Levi, roots: Iterable[Root] | None = None) -> Min2MinReport:
    """Single-root covectors of the Levi that are minimal in g must be minimal in the Levi."""
    alg = build_constants(rs)
    roots = list(levi.positive_roots if roots is None else roots)
    fails = []
    for r in roots:
        if not classify(rs, Covector(rs, {r: 1}), check=False).cls == MINIMAL:
            continue
        k = levi.component_of(r)
        top = levi.highest_roots[k]
        if orbit_dim_in(rs, levi, alg.f(r)) != orbit_dim_in(rs, levi, alg.f(top)):
            fails.append(r)
    return Min2MinReport(len(roots), tuple(fails))


__all__ = [
    "LARGER",
    "MINIMAL",
    "NTM",
    "ZERO",
    "DnOrbitCatalog",
    "NormalForm",
    "OrbitLabel",
    "Transform",
    "classify",
    "combine",
    "d_partition",
    "dn_catalog",
    "hasse_dot",
    "hasse_edges",
    "hasse_json",
    "min2min_check",
    "normal_form_min",
    "normal_form_ntm",
    "rank2_type",
]

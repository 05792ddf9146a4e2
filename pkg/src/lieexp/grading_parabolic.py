"""Gradings by Cartan elements, maximal parabolics and coset descriptors.

The classification of a simple root alpha as abelian or Heisenberg is
computed from the bracket structure of the nilradical u_alpha and then
checked against the highest-root coefficient.  Distinguished root sets
(Phi, Psi, B) and the coset spaces that index sums in expansion terms
also live here.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import LieExpError, NotExtreme, NotHeisenberg, NotNice
from .root_system import CartanElement, Levi, Root, RootSystem, add, is_positive, neg, sub
from .weyl import WeylWord, _bfs, _lex_least_word, _view, apply, orbit, reflect_simple

ABELIAN = "abelian"
HEISENBERG = "Heisenberg"
NEITHER = "neither"


# gradings

@dataclass(frozen=True)
class GradedSubspace:
    """Roots of a view sorted by their eigenvalue under ad(S).

    The Cartan subalgebra sits at level 0 and is counted by ``cartan_dim``.
    """

    S: CartanElement
    levels: dict
    cartan_dim: int

    def level(self, q) -> tuple[Root, ...]:
        return self.levels.get(Fraction(q), ())

    def dim(self, q) -> int:
        q = Fraction(q)
        return len(self.level(q)) + (self.cartan_dim if q == 0 else 0)

    def roots_where(self, pred) -> tuple[Root, ...]:
        return tuple(r for q in sorted(self.levels) if pred(q) for r in self.levels[q])

    def to_json(self, rs: RootSystem) -> dict:
        return {
            "S": self.S.to_json(),
            "levels": {str(q): [rs.fmt(r) for r in self.levels[q]] for q in sorted(self.levels)},
        }


def grade(rs: RootSystem, S: CartanElement, within: Levi | None = None) -> GradedSubspace:
    view = _view(rs, within)
    levels: dict[Fraction, list[Root]] = {}
    for r in view.roots:
        levels.setdefault(S(r), []).append(r)
    return GradedSubspace(S, {q: tuple(v) for q, v in sorted(levels.items())}, view.rank)


def u_roots(rs: RootSystem, alpha: int, within: Levi | None = None) -> tuple[Root, ...]:
    """Roots of the nilradical u_alpha: positive roots of the view involving alpha."""
    view = _view(rs, within)
    _check_simple(view, alpha)
    return tuple(r for r in view.positive_roots if r[alpha] > 0)


def _check_simple(view: Levi, alpha: int):
    if alpha not in view.simple:
        raise LieExpError(f"a{alpha + 1} is not a simple root of {view.type_name()}")


def derived_roots(rs: RootSystem, roots: Iterable[Root]) -> set[Root]:
    """Roots occurring in [u, u] for the span u of root vectors."""
    roots = list(roots)
    out = set()
    for i, a in enumerate(roots):
        for b in roots[i + 1:]:
            s = add(a, b)
            if rs.is_root(s):
                out.add(s)
    return out


def _component_highest(rs: RootSystem, alpha: int, view: Levi) -> Root:
    return view.highest_roots[view.component_of(rs.simple_root(alpha))]


def classify_by_bracket(rs: RootSystem, alpha: int, within: Levi | None = None) -> str:
    d = derived_roots(rs, u_roots(rs, alpha, within))
    if not d:
        return ABELIAN
    return HEISENBERG if len(d) == 1 else NEITHER


def classify_by_highest_root(rs: RootSystem, alpha: int, within: Levi | None = None) -> str:
    view = _view(rs, within)
    _check_simple(view, alpha)
    top = _component_highest(rs, alpha, view)
    if top[alpha] == 1:
        return ABELIAN
    return HEISENBERG if rs.pairing(top, rs.simple_root(alpha)) > 0 else NEITHER


def classify_root(rs: RootSystem, alpha: int, within: Levi | None = None) -> str:
    """Abelian, Heisenberg or neither; both criteria are computed and must agree."""
    a = classify_by_bracket(rs, alpha, within)
    b = classify_by_highest_root(rs, alpha, within)
    if a != b:
        raise AssertionError(f"a{alpha + 1}: bracket test says {a}, highest root says {b}")
    return a


def is_quasi_abelian(rs: RootSystem, alpha: int, within: Levi | None = None) -> bool:
    return classify_root(rs, alpha, within) != NEITHER


def neighbours(rs: RootSystem, alpha: int, within: Levi | None = None) -> list[int]:
    view = _view(rs, within)
    return [j for j in view.simple if j != alpha and rs.cartan[alpha][j] != 0]


def neighbour(rs: RootSystem, alpha: int, within: Levi | None = None) -> int:
    """The unique simple root non-orthogonal to alpha; NotExtreme otherwise."""
    nb = neighbours(rs, alpha, within)
    if len(nb) != 1:
        raise NotExtreme(f"a{alpha + 1} has {len(nb)} neighbours")
    return nb[0]


def component_series(rs: RootSystem, alpha: int, within: Levi | None = None) -> tuple[str, int]:
    view = _view(rs, within)
    return view.component_types()[view.component_of(rs.simple_root(alpha))]


def is_nice(rs: RootSystem, alpha: int, within: Levi | None = None) -> bool:
    kind = classify_root(rs, alpha, within)
    if kind == ABELIAN:
        return True
    return kind == HEISENBERG and component_series(rs, alpha, within)[0] == "E"


# quasi-abelian enumerations

@dataclass(frozen=True)
class EnumerationReport:
    ok: bool
    steps: tuple[tuple[int, str], ...]

    @property
    def heisenberg_steps(self) -> list[int]:
        """1-based positions of the Heisenberg steps."""
        return [n + 1 for n, (_, k) in enumerate(self.steps) if k == HEISENBERG]

    @property
    def abelian(self) -> bool:
        return self.ok and all(k == ABELIAN for _, k in self.steps)

    def __bool__(self):
        return self.ok


def is_quasi_abelian_enumeration(rs: RootSystem, order: Sequence[int], within: Levi | None = None) -> EnumerationReport:
    """Classify beta_i inside the Levi on beta_1..beta_i for every i."""
    view = _view(rs, within)
    order = list(order)
    if sorted(order) != sorted(view.simple) or len(set(order)) != len(order):
        raise LieExpError("enumeration must be a permutation of the simple roots")
    steps = []
    for i, b in enumerate(order):
        steps.append((b, classify_root(rs, b, rs.levi(order[: i + 1]))))
    return EnumerationReport(all(k != NEITHER for _, k in steps), tuple(steps))


# distinguished root sets

def _component_positive(rs: RootSystem, alpha: int, view: Levi) -> list[Root]:
    comp = view.components[view.component_of(rs.simple_root(alpha))]
    cs = set(comp)
    return [r for r in view.positive_roots if all(r[i] == 0 for i in range(rs.rank) if i not in cs)]


def level_two_roots(rs: RootSystem, alpha: int, within: Levi | None = None) -> list[Root]:
    """Roots eps with eps(S_alpha) = 2."""
    view = _view(rs, within)
    _check_simple(view, alpha)
    return [r for r in view.positive_roots if r[alpha] == 1]


def phi_set(rs: RootSystem, alpha: int, within: Levi | None = None) -> list[Root]:
    a = rs.simple_root(alpha)
    return [r for r in level_two_roots(rs, alpha, within) if rs.pairing(r, a) == 0]


def psi_set(rs: RootSystem, alpha: int, within: Levi | None = None) -> list[Root]:
    a = rs.simple_root(alpha)
    return [r for r in level_two_roots(rs, alpha, within) if rs.pairing(r, a) <= 0]


def b_set(rs: RootSystem, alpha: int, within: Levi | None = None) -> list[Root]:
    """Positive roots pairing to 1 with a Heisenberg root alpha."""
    view = _view(rs, within)
    if classify_root(rs, alpha, view) != HEISENBERG:
        raise NotHeisenberg(f"a{alpha + 1} is not a Heisenberg root of {view.type_name()}")
    a = rs.simple_root(alpha)
    out = [r for r in view.positive_roots if rs.pairing(a, r) == 1]
    top = _component_highest(rs, alpha, view)
    # Heisenberg dimension law: u = g_alpha + B-part + centre
    assert len(u_roots(rs, alpha, view)) == 2 * len(out) + 1
    assert top in out
    return out


def delta(rs: RootSystem, alpha: int, within: Levi | None = None) -> Root:
    view = _view(rs, within)
    if not is_nice(rs, alpha, view):
        raise NotNice(f"a{alpha + 1} is not nice in {view.type_name()}")
    top = _component_highest(rs, alpha, view)
    if classify_root(rs, alpha, view) == ABELIAN:
        return top
    beta = neighbour(rs, alpha, view)
    d = sub(sub(top, rs.simple_root(alpha)), rs.simple_root(beta))
    if not rs.is_root(d):
        raise AssertionError(f"delta for a{alpha + 1} is not a root")
    return d


def psi_union_check(rs: RootSystem, alpha: int, within: Levi | None = None) -> bool:
    """For Heisenberg alpha: Psi = Phi together with alpha_max - alpha."""
    view = _view(rs, within)
    top = _component_highest(rs, alpha, view)
    extra = sub(top, rs.simple_root(alpha))
    return set(psi_set(rs, alpha, view)) == set(phi_set(rs, alpha, view)) | {extra}


def orthogonal_levi(rs: RootSystem, alpha: int, within: Levi | None = None) -> Levi:
    """M_alpha: the Levi on the simple roots orthogonal to alpha."""
    view = _view(rs, within)
    return rs.levi(j for j in view.simple if j != alpha and rs.cartan[alpha][j] == 0)


def complement_levi(rs: RootSystem, alpha: int, within: Levi | None = None) -> Levi:
    """L_alpha: the Levi on the other simple roots of the view."""
    view = _view(rs, within)
    return rs.levi(j for j in view.simple if j != alpha)


@dataclass(frozen=True)
class WeightReport:
    alpha: int
    beta: int
    weights: tuple[Root, ...]
    single_orbit: bool

    @property
    def dim(self) -> int:
        return len(self.weights)


def second_chevalley_weights(rs: RootSystem, alpha: int, within: Levi | None = None) -> WeightReport:
    """Roots at level 4 for S_beta, beta the neighbour of an extreme alpha, as M_alpha-weights."""
    view = _view(rs, within)
    beta = neighbour(rs, alpha, view)
    ws = tuple(r for r in _component_positive(rs, alpha, view) if r[beta] == 2)
    m = orthogonal_levi(rs, alpha, view)
    single = bool(ws) and orbit(rs, [ws[0]], m) == set(ws)
    return WeightReport(alpha, beta, ws, single)


# coset spaces

def tex_sub(x) -> str:
    """LaTeX subscript, braced only when longer than one character."""
    x = str(x)
    return f"_{x}" if len(x) == 1 else f"_{{{x}}}"


def tex_alpha(i: int) -> str:
    return f"\\alpha{tex_sub(i + 1)}"


@dataclass(frozen=True)
class BruhatCell:
    word: WeylWord
    unipotent_roots: tuple[Root, ...]

    def to_json(self, rs: RootSystem) -> dict:
        return {"word": str(self.word), "unipotent_roots": [rs.fmt(r) for r in self.unipotent_roots]}


@dataclass(frozen=True)
class CosetFactor:
    series: tuple[str, int]
    cells: int
    label: str

    def to_json(self) -> dict:
        return {"type": f"{self.series[0]}{self.series[1]}", "cells": self.cells, "label": self.label}


@dataclass(frozen=True)
class CosetDescriptor:
    """Symbolic (L cap Gamma)/(P cap Gamma) for the stabilizer P of some root lines.

    ``stabilizer`` lists the roots of P: roots of L pairing nonpositively
    with every stabilized root.  With one stabilized line P is a
    parabolic and ``cells`` is its Bruhat decomposition, written for the
    standard parabolic conjugate to P by ``conjugator``.  With two lines
    (the Lambda quotients) P is not parabolic; ``fixed_points`` lists the
    torus-fixed cosets instead.
    """

    kind: str
    symbol: str
    levi: Levi
    lines: tuple[Root, ...]
    stabilizer: tuple[Root, ...]
    cells: tuple[BruhatCell, ...] = ()
    conjugator: WeylWord | None = None
    factors: tuple[CosetFactor, ...] = ()
    fixed_points: tuple[WeylWord, ...] = ()
    multiplicity: Fraction = Fraction(1)
    note: str = ""

    @property
    def trivial(self) -> bool:
        return len(self.stabilizer) == len(self.levi.roots)

    def shape(self) -> str:
        if self.trivial:
            return "{1}"
        if not self.factors:
            return self.symbol
        labels = [f.label for f in self.factors]
        if len(set(labels)) == 1 and len(labels) > 1:
            return f"({labels[0]})^{len(labels)}"
        return " x ".join(labels)

    def to_json(self, rs: RootSystem) -> dict:
        out = {
            "kind": self.kind,
            "symbol": self.symbol,
            "levi": [rs.fmt(r) for r in self.levi.positive_roots],
            "levi_simple": [f"a{i + 1}" for i in self.levi.simple],
            "lines": [rs.fmt(r) for r in self.lines],
            "parabolic_nonpositive_coroot": [rs.fmt(r) for r in self.stabilizer],
            "bruhat_cells": [c.to_json(rs) for c in self.cells],
            "multiplicity": str(self.multiplicity),
            "shape": self.shape(),
        }
        if self.conjugator is not None and len(self.conjugator):
            out["conjugator"] = str(self.conjugator)
        if self.factors:
            out["factors"] = [f.to_json() for f in self.factors]
        if self.fixed_points:
            out["fixed_points"] = [str(w) for w in self.fixed_points]
        if self.note:
            out["note"] = self.note
        return out


def _stabilizer(rs: RootSystem, levi: Levi, lines: Sequence[Root]) -> tuple[Root, ...]:
    return tuple(r for r in levi.roots if all(rs.pairing(r, y) <= 0 for y in lines))


def _antidominant(rs: RootSystem, levi: Levi, y: Root) -> tuple[Root, WeylWord]:
    """The orbit element pairing nonpositively with every simple root of the
    Levi, with the shortest word carrying it to y."""
    step = lambda i, v: reflect_simple(rs, i, v)
    dist = _bfs(rs, y, levi.simple, step)
    anti = [x for x in dist if all(rs.pairing(x, rs.simple_root(i)) <= 0 for i in levi.simple)]
    assert len(anti) == 1
    back = _bfs(rs, anti[0], levi.simple, step)
    return anti[0], _lex_least_word(rs, back, [y], levi.simple, step)


def bruhat_cells(rs: RootSystem, levi: Levi, y: Root) -> tuple[tuple[BruhatCell, ...], WeylWord]:
    """Cells of L/P_y, P_y the roots pairing nonpositively with y."""
    y0, conj = _antidominant(rs, levi, y)
    step = lambda i, v: reflect_simple(rs, i, v)
    dist = _bfs(rs, y0, levi.simple, step)
    cells = []
    for x in sorted(dist, key=lambda v: (dist[v], v)):
        w = _lex_least_word(rs, dist, [x], levi.simple, step)
        u = tuple(neg(d) for d in levi.positive_roots if not is_positive(apply(w, d)))
        assert len(u) == len(w)
        cells.append(BruhatCell(w, u))
    cells.sort(key=lambda c: (len(c.word), c.word.letters))
    return tuple(cells), conj


def _factor_label(rs: RootSystem, comp: tuple[int, ...], y: Root) -> tuple[tuple[str, int], str]:
    from .root_system import identify

    series = identify(rs, comp)
    moved = [i for i in comp if rs.pairing(y, rs.simple_root(i)) != 0]
    if series[0] == "A" and len(moved) == 1:
        ends = [i for i in comp if sum(1 for j in comp if j != i and rs.cartan[i][j]) <= 1]
        if moved[0] in ends:
            return series, f"P^{series[1]}"
    return series, f"{series[0]}{series[1]}/P"


def coset_descriptor(
    rs: RootSystem,
    kind: str,
    levi: Levi,
    lines: Sequence[Root],
    symbol: str,
    multiplicity: Fraction = Fraction(1),
) -> CosetDescriptor:
    """Descriptor of the quotient of ``levi`` by the stabilizer of the given root lines."""
    lines = tuple(tuple(y) for y in lines)
    if not lines or len(lines) > 2:
        raise LieExpError("a coset descriptor needs one or two stabilized lines")
    for y in lines:
        if not rs.is_root(y):
            raise LieExpError(f"{y} is not a root")
    stab = _stabilizer(rs, levi, lines)
    if len(lines) == 1:
        y = lines[0]
        cells, conj = bruhat_cells(rs, levi, y)
        factors = []
        for comp in levi.components:
            if any(rs.pairing(y, rs.simple_root(i)) for i in comp):
                series, label = _factor_label(rs, comp, y)
                sub_levi = rs.levi(comp)
                n = len(orbit(rs, [y], sub_levi))
                factors.append(CosetFactor(series, n, label))
        total = 1
        for f in factors:
            total *= f.cells
        assert total == len(cells)
        return CosetDescriptor(kind, symbol, levi, lines, stab, cells, conj, tuple(factors), (), Fraction(multiplicity))
    step = lambda i, p: (reflect_simple(rs, i, p[0]), reflect_simple(rs, i, p[1]))
    dist = _bfs(rs, lines, levi.simple, step)
    points = tuple(
        _lex_least_word(rs, dist, [p], levi.simple, step) for p in sorted(dist, key=lambda p: (dist[p], p))
    )
    return CosetDescriptor(
        kind, symbol, levi, lines, stab, (), None, (), points, Fraction(multiplicity),
        note="stabilizer of two lines; not a parabolic, so torus-fixed points are listed instead of cells",
    )


def gamma_prev(rs: RootSystem, order: Sequence[int], i: int) -> CosetDescriptor:
    """Gamma_{i-1} for an enumeration (1-based i): L_{i-1} modulo the stabilizer of beta_i."""
    levi = rs.levi(order[: i - 1])
    return coset_descriptor(rs, "Gamma_{i-1}", levi, [rs.simple_root(order[i - 1])], f"\\Gamma{tex_sub(i - 1)}")


def gamma_alpha(rs: RootSystem, alpha: int, within: Levi | None = None, symbol: str | None = None) -> CosetDescriptor:
    levi = complement_levi(rs, alpha, within)
    return coset_descriptor(rs, "Gamma_alpha", levi, [rs.simple_root(alpha)], symbol or f"\\Gamma_{{{tex_alpha(alpha)}}}")


def lambda_alpha(rs: RootSystem, alpha: int, within: Levi | None = None, symbol: str | None = None) -> CosetDescriptor:
    levi = complement_levi(rs, alpha, within)
    d = delta(rs, alpha, within)
    return coset_descriptor(
        rs, "Lambda_alpha", levi, [rs.simple_root(alpha), d],
        symbol or f"\\Lambda_{{{tex_alpha(alpha)}}}", Fraction(1, 2),
    )


def m_alpha(rs: RootSystem, alpha: int, within: Levi | None = None, symbol: str | None = None) -> CosetDescriptor:
    levi = orthogonal_levi(rs, alpha, within)
    d = delta(rs, alpha, within)
    return coset_descriptor(rs, "M_alpha", levi, [d], symbol or f"\\mathcal{{M}}_{{{tex_alpha(alpha)}}}")


def gamma_prime(rs: RootSystem, order: Sequence[int], j: int, symbol: str | None = None) -> CosetDescriptor:
    """Gamma'_{j-1}: the Levi on beta_k (k < j, beta_k orthogonal to beta_n) modulo the stabilizer of beta_j."""
    n = order[-1]
    ks = [order[k] for k in range(j - 1) if rs.cartan[order[k]][n] == 0]
    return coset_descriptor(
        rs, "Gamma'_{j-1}", rs.levi(ks), [rs.simple_root(order[j - 1])], symbol or f"\\Gamma'{tex_sub(j - 1)}"
    )


__all__ = [
    "ABELIAN",
    "HEISENBERG",
    "NEITHER",
    "BruhatCell",
    "CosetDescriptor",
    "EnumerationReport",
    "GradedSubspace",
    "b_set",
    "classify_root",
    "coset_descriptor",
    "delta",
    "grade",
    "is_nice",
    "is_quasi_abelian_enumeration",
    "neighbour",
    "phi_set",
    "psi_set",
    "second_chevalley_weights",
    "u_roots",
]

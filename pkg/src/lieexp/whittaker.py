"""Whittaker pairs, neutrality, domination and the V-domains of integral formulas.

A Whittaker pair (S, phi) couples a rational Cartan element S with a
covector phi whose support sits at S-level 2.  Its unipotent n_{S,phi}
consists of the roots at level > 1 together with the part of level 1 that
centralizes phi.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import linalg
from .chevalley import AlgebraElement, Covector, build_constants
from .errors import NotDominating, NotOrthogonalSupport, NotWeightMinusTwo
from .root_system import CartanElement, Levi, Root, RootSystem, is_positive
from .weyl import WeylWord, _view, apply


@dataclass(frozen=True)
class WhittakerPair:
    rs: RootSystem
    S: CartanElement
    phi: Covector

    @property
    def standard(self) -> bool:
        """n_{S,phi} is the full positive unipotent."""
        return set(n_pair(self).roots) == set(self.rs.positive_roots)

    def to_json(self) -> dict:
        return {"S": self.S.to_json(), "phi": self.phi.to_json()}

    @classmethod
    def from_json(cls, rs: RootSystem, data: dict) -> "WhittakerPair":
        return make_pair(rs, CartanElement.from_json(data["S"], rs.rank), Covector.from_json(rs, data["phi"]))


def make_pair(rs: RootSystem, S: CartanElement, phi: Covector) -> WhittakerPair:
    bad = [k for k in phi if not isinstance(k, tuple) or S(k) != 2]
    if bad:
        names = ", ".join(rs.fmt(k) if isinstance(k, tuple) else f"h{k + 1}" for k in bad)
        raise NotWeightMinusTwo(f"support not at S-level 2: {names}")
    return WhittakerPair(rs, S, phi)


@dataclass(frozen=True)
class NSubspace:
    """n_{S,phi}: roots above level 1 plus the centralizer of phi inside level 1."""

    upper: tuple[Root, ...]
    level_one: tuple[AlgebraElement, ...]
    level_one_roots: tuple[Root, ...]

    @property
    def roots(self) -> tuple[Root, ...]:
        return self.upper + self.level_one_roots

    @property
    def dim(self) -> int:
        return len(self.upper) + len(self.level_one)


def _centralizer_in(rs: RootSystem, phi: Covector, roots: Sequence[Root]) -> list[AlgebraElement]:
    """Basis of {X in span(roots) : [X, f_phi] = 0}."""
    if not roots:
        return []
    alg = build_constants(rs)
    f = alg.dual_nilpotent(phi)
    cols: dict = {}
    for j, r in enumerate(roots):
        img = alg.ad(AlgebraElement(rs, {r: 1}), f)
        for k, v in img.coeffs.items():
            cols.setdefault(k, {})[j] = v
    basis = linalg.nullspace(list(cols.values()), list(range(len(roots))))
    return [AlgebraElement(rs, {roots[j]: v for j, v in vec.items()}) for vec in basis]


def n_pair(p: WhittakerPair) -> NSubspace:
    rs, S = p.rs, p.S
    upper = tuple(r for r in rs.roots if S(r) > 1)
    ones = [r for r in rs.roots if S(r) == 1]
    cent = _centralizer_in(rs, p.phi, ones)
    # a level-1 root counts as a root of n when its own vector centralizes phi
    alg = build_constants(rs)
    f = alg.dual_nilpotent(p.phi)
    single = tuple(r for r in ones if not alg.ad(alg.e(r) if is_positive(r) else alg.f(r), f))
    return NSubspace(upper, tuple(cent), single)


def is_neutral(rs: RootSystem, h: CartanElement, phi: Covector) -> bool:
    """Whether h completes to an sl2-triple (e, h, f_phi)."""
    if not phi:
        return all(c == 0 for c in h.coords)
    if any(not isinstance(k, tuple) or h(k) != 2 for k in phi):
        return False
    alg = build_constants(rs)
    f = alg.dual_nilpotent(phi)
    hx = AlgebraElement(rs, {i: _coroot_coord(rs, h, i) for i in range(rs.rank)})
    level2 = [r for r in rs.roots if h(r) == 2]
    cols = [alg.ad(alg.e(r) if is_positive(r) else alg.f(r), f).coeffs for r in level2]
    return linalg.solve(cols, hx.coeffs) is not None


def _coroot_coord(rs: RootSystem, h: CartanElement, i: int) -> Fraction:
    """Coefficient of h_i when h is written in the coroot basis."""
    # h = sum_j c_j alpha_j^vee; h(alpha_k) = sum_j c_j C[j][k]
    cols = [{k: rs.cartan[j][k] for k in range(rs.rank) if rs.cartan[j][k]} for j in range(rs.rank)]
    c = linalg.solve(cols, {k: h.coords[k] for k in range(rs.rank)})
    assert c is not None
    return c[i]


def neutral_pair(rs: RootSystem, phi: Covector) -> WhittakerPair:
    """(sum of support coroots, phi), certified by an explicit sl2-triple."""
    if not phi:
        raise NotOrthogonalSupport("support must be nonempty")
    alg = build_constants(rs)
    alg.sl2_triple(phi)
    h = rs.zero_cartan()
    for r in phi:
        h = h + rs.coroot(r)
    return make_pair(rs, h, phi)


def dominates(rs: RootSystem, H: CartanElement, phi: Covector, S: CartanElement) -> bool:
    """g_phi cap g^H_{>=1} is contained in g^{S-H}_{>=0}."""
    make_pair(rs, H, phi)
    make_pair(rs, S, phi)
    D = S - H
    # g_phi is graded by H and S, so checking the support of a basis is exact
    for x in _centralizer_in(rs, phi, [r for r in rs.roots if H(r) >= 1]):
        if any(D(r) < 0 for r in x.coeffs):
            return False
    return True


@dataclass(frozen=True)
class IntTransDomain:
    roots: tuple[Root, ...]
    applicable: bool


def inttrans_domain(rs: RootSystem, H: CartanElement, S: CartanElement, phi: Covector) -> IntTransDomain:
    """v = g^H_{>1} cap g^S_{<1}; applicable when neither grading has a level-1 part."""
    if not dominates(rs, H, phi, S):
        raise NotDominating("H does not dominate S for this covector")
    v = tuple(r for r in rs.roots if H(r) > 1 and S(r) < 1)
    flag = not any(H(r) == 1 or S(r) == 1 for r in rs.roots)
    return IntTransDomain(v, flag)


def v_gamma(rs: RootSystem, w: WeylWord, S: CartanElement, within: Levi | None = None) -> tuple[Root, ...]:
    """Negative roots eps with S(w^{-1} eps) > 1, sorted by height then coordinates."""
    view = _view(rs, within)
    inv = w.inverse()
    out = [e for e in view.roots if not is_positive(e) and S(apply(inv, e)) > 1]
    return tuple(sorted(out, key=lambda r: (-sum(r), tuple(-x for x in r))))


__all__ = [
    "IntTransDomain",
    "NSubspace",
    "WhittakerPair",
    "dominates",
    "inttrans_domain",
    "is_neutral",
    "make_pair",
    "n_pair",
    "neutral_pair",
    "v_gamma",
]

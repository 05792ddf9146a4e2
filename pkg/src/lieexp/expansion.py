"""Fourier expansions of small automorphic functions as term trees.

Each generator returns an :class:`ExpansionTree` whose terms record every
summation domain concretely: coset spaces as descriptors, characters as
roots, Weyl-group translates as words and integration domains as root
lists.  Nothing here evaluates an integral; constant terms stay symbolic
and carry the expansion of their Levi as children where one is known.

Term variants:

``constant``
    F_{S,0} along the nilradical of S, or W_0 when the Levi is the torus.
``whittaker``
    Sums of Whittaker coefficients W over cosets and characters.
``fourier``
    Sums of Fourier coefficients F_{S,phi} over cosets and characters.
``integrated``
    A Whittaker coefficient integrated over a unipotent V.
``heisenberg``
    A sum over Omega wrapped around child terms.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import nilorbit
from .chevalley import Covector
from .errors import LevelMismatch, LieExpError, NotHeisenberg, NotNice, NotQuasiAbelian
from .grading_parabolic import (
    ABELIAN,
    HEISENBERG,
    CosetDescriptor,
    b_set,
    classify_root,
    coset_descriptor,
    delta,
    is_nice,
    is_quasi_abelian_enumeration,
    level_two_roots,
    orthogonal_levi,
    psi_set,
    tex_alpha,
    tex_sub,
)
from .root_system import CartanElement, Root, RootSystem, build, is_positive, neg
from .weyl import WeylWord, apply, pair_to_simple, reduced, reflect, reflection_word
from .whittaker import v_gamma

HALF = Fraction(1, 2)


# tree nodes

@dataclass(frozen=True)
class Sum:
    """One summation: over a coset space, the nonzero vectors of a root line,
    the group Omega, or a direct sum of root spaces."""

    kind: str
    var: str
    symbol: str
    roots: tuple[Root, ...] = ()
    coset: CosetDescriptor | None = None


@dataclass(frozen=True)
class Fixed:
    """A character that is held fixed rather than summed."""

    var: str
    roots: tuple[Root, ...]


@dataclass(frozen=True)
class Conj:
    """Ad*(g) applied to the summed character, g a Weyl representative."""

    symbol: str
    word: WeylWord
    targets: tuple[int, ...]


@dataclass(frozen=True)
class Integral:
    symbol: str
    roots: tuple[Root, ...]


@dataclass(frozen=True)
class Term:
    variant: str
    label: str
    coefficient: str = "W"
    S: CartanElement | None = None
    sums: tuple[Sum, ...] = ()
    fixed: tuple[Fixed, ...] = ()
    conj: Conj | None = None
    integral: Integral | None = None
    translate: tuple[str, ...] = ()
    words: tuple[tuple[str, WeylWord], ...] = ()
    multiplicity: Fraction = Fraction(1)
    levi: tuple[int, ...] | None = None
    children: tuple["Term", ...] = ()
    note: str = ""

    def char_roots(self) -> list[Root]:
        out = [r for f in self.fixed for r in f.roots]
        out += [s.roots[0] for s in self.sums if s.kind == "char"]
        return out

    def cosets(self) -> list[CosetDescriptor]:
        return [s.coset for s in self.sums if s.kind == "coset"]


@dataclass(frozen=True)
class ExpansionTree:
    rs: RootSystem
    theorem: str
    lhs: str
    terms: tuple[Term, ...] = ()
    meta: tuple[tuple[str, str], ...] = ()

    @property
    def is_zero(self) -> bool:
        return not self.terms

    def labels(self) -> list[str]:
        return [t.label for t in self.terms]


def leaves(terms: Iterable[Term]) -> list[Term]:
    """Terms after expanding constants with known children and opening Heisenberg blocks."""
    out = []
    for t in terms:
        if t.children:
            out += leaves(t.children)
        else:
            out.append(t)
    return out


def flatten(tree: ExpansionTree) -> ExpansionTree:
    """Replace every constant term that has children by its children, recursively."""

    def go(terms):
        out = []
        for t in terms:
            if t.variant == "constant" and t.children:
                out += go(t.children)
            else:
                out.append(t)
        return out

    return replace(tree, terms=tuple(go(tree.terms)))


# building blocks

@lru_cache(maxsize=None)
def _coset(rs: RootSystem, kind: str, simple: tuple[int, ...], lines: tuple[Root, ...], symbol: str,
           multiplicity: Fraction = Fraction(1)) -> CosetDescriptor:
    return coset_descriptor(rs, kind, rs.levi(simple), lines, symbol, multiplicity)


def root_tex(rs: RootSystem, r: Root) -> str:
    parts = []
    for i, c in enumerate(r):
        if c:
            parts.append(("" if c == 1 else str(c)) + tex_alpha(i))
    return "+".join(parts)


def _line(root_symbol: str) -> str:
    inner = f"({root_symbol})" if "+" in root_symbol else root_symbol
    return f"\\mathfrak{{g}}^\\times_{{-{inner}}}"


def _char(rs: RootSystem, var: str, r: Root, symbol: str | None = None) -> Sum:
    return Sum("char", var, _line(symbol or root_tex(rs, r)), (tuple(r),))


def _coset_sum(var: str, desc: CosetDescriptor) -> Sum:
    return Sum("coset", var, desc.symbol, coset=desc)


def _omega(rs: RootSystem, symbol: str, roots: Sequence[Root]) -> Sum:
    return Sum("omega", "\\omega", symbol, tuple(tuple(r) for r in roots))


def _gamma_prev(rs: RootSystem, order: Sequence[int], i: int) -> CosetDescriptor:
    return _coset(rs, "Gamma_{i-1}", tuple(sorted(order[: i - 1])), (rs.simple_root(order[i - 1]),),
                  f"\\Gamma{tex_sub(i - 1)}")


def _gamma_prime(rs: RootSystem, order: Sequence[int], j: int) -> CosetDescriptor:
    n = order[-1]
    ks = tuple(sorted(order[k] for k in range(j - 1) if rs.cartan[order[k]][n] == 0))
    return _coset(rs, "Gamma'_{j-1}", ks, (rs.simple_root(order[j - 1]),), f"\\Gamma'{tex_sub(j - 1)}")


def _lambda(rs: RootSystem, beta: int, within: tuple[int, ...], symbol: str) -> CosetDescriptor:
    levi = tuple(j for j in within if j != beta)
    d = delta(rs, beta, rs.levi(within))
    return _coset(rs, "Lambda_alpha", levi, (rs.simple_root(beta), d), symbol, HALF)


def _m_alpha(rs: RootSystem, beta: int, within: tuple[int, ...], symbol: str) -> CosetDescriptor:
    view = rs.levi(within)
    m = orthogonal_levi(rs, beta, view)
    return _coset(rs, "M_alpha", m.simple, (delta(rs, beta, view),), symbol)


def _gamma_alpha(rs: RootSystem, alpha: int, symbol: str) -> CosetDescriptor:
    levi = tuple(j for j in range(rs.rank) if j != alpha)
    return _coset(rs, "Gamma_alpha", levi, (rs.simple_root(alpha),), symbol)


def switch_word(rs: RootSystem, beta: int, within: tuple[int, ...]) -> WeylWord:
    """Reduced word for s_beta s_top s_beta, which swaps beta and the highest root top."""
    view = rs.levi(within)
    a = rs.simple_root(beta)
    top = view.highest_roots[view.component_of(a)]
    w = reflection_word(rs, reflect(rs, top, a))
    assert apply(w, a) == top and apply(w, top) == a
    return w


def _constant(rs: RootSystem, S_index: int, levi: Sequence[int], children: Sequence[Term] = (), note: str = "") -> Term:
    levi = tuple(sorted(levi))
    label = "W_0" if not levi else f"F_{S_index + 1},0"
    return Term("constant", label, "F", rs.S(S_index), levi=levi, children=tuple(children), note=note)


def _check_enumeration(rs: RootSystem, order: Sequence[int], within=None):
    try:
        rep = is_quasi_abelian_enumeration(rs, order, within)
    except LieExpError as e:
        raise NotQuasiAbelian(str(e)) from None
    if not rep.ok:
        bad = [n + 1 for n, (_, k) in enumerate(rep.steps) if k not in (ABELIAN, HEISENBERG)]
        raise NotQuasiAbelian(f"steps {bad} are neither abelian nor Heisenberg")
    return rep


def _order_text(order: Sequence[int]) -> str:
    return ",".join(f"a{i + 1}" for i in order)


# minimal expansions

def _a_term(rs: RootSystem, order: Sequence[int], i: int, label: str, fixed: tuple[Fixed, ...] = (),
            extra_translate: tuple[str, ...] = (), extra_words=()) -> Term:
    beta = order[i - 1]
    sums = (_coset_sum("\\gamma", _gamma_prev(rs, order, i)), _char(rs, "\\varphi", rs.simple_root(beta)))
    return Term("whittaker", label, "W", rs.S_all(), sums, fixed, translate=("\\gamma",) + extra_translate,
                words=tuple(extra_words))


def _b_term(rs: RootSystem, order: Sequence[int], i: int, label: str, fixed: tuple[Fixed, ...] = (),
            extra_translate: tuple[str, ...] = (), extra_words=()) -> Term:
    beta = order[i - 1]
    within = tuple(sorted(order[:i]))
    B = b_set(rs, beta, rs.levi(within))
    gsym = f"\\gamma{tex_sub(i)}"
    sums = (_omega(rs, f"\\Omega{tex_sub(i)}", [neg(r) for r in B]), _char(rs, "\\varphi", rs.simple_root(beta)))
    return Term("whittaker", label, "W", rs.S_all(), sums, fixed, translate=("\\omega", gsym) + extra_translate,
                words=((gsym, switch_word(rs, beta, within)),) + tuple(extra_words))


def _min_terms(rs: RootSystem, order: Sequence[int], kinds, recursive: bool) -> list[Term]:
    n = len(order)
    out = []
    if n == 0:
        return out
    children = _min_terms(rs, order[:-1], kinds, recursive) if recursive else []
    out.append(_constant(rs, order[-1], order[:-1], children))
    out.append(_a_term(rs, order, n, f"A_{n}"))
    if kinds[n - 1] == HEISENBERG:
        out.append(_b_term(rs, order, n, f"B_{n}"))
    return out


def expand_min(rs: RootSystem, order: Sequence[int] | None = None, recursive: bool = True) -> ExpansionTree:
    """Whittaker expansion of a minimal automorphic function along an enumeration."""
    order = list(range(rs.rank)) if order is None else list(order)
    rep = _check_enumeration(rs, order)
    kinds = [k for _, k in rep.steps]
    terms = _min_terms(rs, order, kinds, recursive)
    return ExpansionTree(rs, "B", "\\eta_{\\mathrm{min}}(g)", tuple(terms), (("enumeration", _order_text(order)),))


def _level_check(rs: RootSystem, alpha: int, phi: Covector):
    bad = [k for k in phi if not isinstance(k, tuple) or rs.S(alpha)(k) != 2]
    if bad:
        raise LevelMismatch("covector not at level 2 of S_a%d: %s" % (
            alpha + 1, ", ".join(rs.fmt(k) if isinstance(k, tuple) else f"h{k + 1}" for k in bad)))


def _fourier_lhs(alpha: int, var: str = "\\varphi") -> str:
    return f"\\mathcal{{F}}_{{S_{{{tex_alpha(alpha)}}},{var}}}[\\eta](g)"


def fourier_coeff_min(rs: RootSystem, alpha: int, phi: Covector | str) -> ExpansionTree:
    """One Fourier coefficient F_{S_alpha, phi} of a minimal automorphic function."""
    if isinstance(phi, Covector):
        _level_check(rs, alpha, phi)
        cls = nilorbit.classify(rs, phi).cls
    else:
        cls = phi
    lhs = _fourier_lhs(alpha)
    meta = (("alpha", f"a{alpha + 1}"), ("class", cls))
    if cls == nilorbit.ZERO:
        levi = [j for j in range(rs.rank) if j != alpha]
        t = _constant(rs, alpha, levi, note="restriction to L_alpha is minimal or trivial")
        return ExpansionTree(rs, "A", _fourier_lhs(alpha, "0"), (t,), meta)
    if cls != nilorbit.MINIMAL:
        return ExpansionTree(rs, "A", lhs, (), meta)
    words = ()
    note = "gamma_0 in L_alpha conjugates phi into the root line of -alpha"
    if isinstance(phi, Covector):
        nf = nilorbit.normal_form_min(rs, phi, alpha)
        words = (("\\gamma_0", nf.transform.weyl_part(rs)),)
        note = "gamma_0 = " + json.dumps(nf.transform.to_json(), sort_keys=True)
    t = Term("whittaker", "W", "W", rs.S_all(), (), (Fixed("\\varphi'", (rs.simple_root(alpha),)),),
             translate=("\\gamma_0",), words=words, note=note)
    return ExpansionTree(rs, "A", lhs, (t,), meta)


# next-to-minimal coefficients

def orthogonal_enumeration(rs: RootSystem, alpha: int) -> list[int]:
    """A quasi-abelian enumeration of the simple roots orthogonal to alpha.

    Depth-first in Bourbaki order: the smallest root that keeps the prefix
    quasi-abelian is taken first, backtracking when a prefix dead-ends.
    """
    pool = sorted(j for j in range(rs.rank) if j != alpha and rs.cartan[alpha][j] == 0)

    def extend(prefix):
        if len(prefix) == len(pool):
            return prefix
        for j in pool:
            if j in prefix:
                continue
            if classify_root(rs, j, rs.levi(prefix + [j])) in (ABELIAN, HEISENBERG):
                got = extend(prefix + [j])
                if got is not None:
                    return got
        return None

    found = extend([])
    if found is None:
        raise NotQuasiAbelian(f"no quasi-abelian enumeration of the roots orthogonal to a{alpha + 1}")
    _check_enumeration(rs, found, rs.levi(found))
    return found


def pair_choices(rs: RootSystem, eps: Root, delta_: Root, within=None) -> list[tuple[WeylWord, int, int]]:
    """For every pair of orthogonal simple roots reachable from (eps, delta), the shortest word."""
    from .weyl import _bfs, _lex_least_word, _view, reflect_simple

    view = _view(rs, within)
    step = lambda i, p: (reflect_simple(rs, i, p[0]), reflect_simple(rs, i, p[1]))
    dist = _bfs(rs, (tuple(eps), tuple(delta_)), view.simple, step)
    simple = {rs.simple_root(i): i for i in view.simple}
    out = []
    for p in sorted((p for p in dist if p[0] in simple and p[1] in simple), key=lambda p: (simple[p[0]], simple[p[1]])):
        out.append((_lex_least_word(rs, dist, [p], view.simple, step), simple[p[0]], simple[p[1]]))
    return out


def fourier_coeff_ntm(rs: RootSystem, alpha: int, phi: Covector, enumeration: Sequence[int] | None = None,
                      choice: tuple[int, int] | None = None) -> ExpansionTree:
    """One Fourier coefficient F_{S_alpha, phi} of a next-to-minimal automorphic function.

    ``enumeration`` overrides the automatic enumeration of the roots
    orthogonal to alpha; ``choice`` picks the target simple pair in the
    next-to-minimal case (any reachable pair gives a valid formula).
    """
    _level_check(rs, alpha, phi)
    label = nilorbit.classify(rs, phi)
    lhs = _fourier_lhs(alpha)
    meta = [("alpha", f"a{alpha + 1}"), ("class", label.cls)]
    if label.cls == nilorbit.ZERO:
        levi = [j for j in range(rs.rank) if j != alpha]
        t = _constant(rs, alpha, levi, note="restriction to L_alpha is trivial, minimal or next-to-minimal")
        return ExpansionTree(rs, "C", _fourier_lhs(alpha, "0"), (t,), tuple(meta))
    if label.cls == nilorbit.LARGER:
        return ExpansionTree(rs, "C", lhs, (), tuple(meta))
    if label.cls == nilorbit.MINIMAL:
        nf = nilorbit.normal_form_min(rs, phi, alpha)
        g0 = ("\\gamma_0", nf.transform.weyl_part(rs))
        order = list(enumeration) if enumeration is not None else orthogonal_enumeration(rs, alpha)
        if sorted(order) != sorted(orthogonal_levi(rs, alpha).simple):
            raise LieExpError("enumeration must list exactly the simple roots orthogonal to alpha")
        rep = _check_enumeration(rs, order, rs.levi(order))
        psi = (Fixed("\\psi", (rs.simple_root(alpha),)),)
        terms = [Term("whittaker", "W_psi", "W", rs.S_all(), (), psi, translate=("\\gamma_0",), words=(g0,),
                      note="gamma_0 = " + json.dumps(nf.transform.to_json(), sort_keys=True))]
        for i in range(1, len(order) + 1):
            terms.append(_a_term(rs, order, i, f"A_{i}^psi", psi, ("\\gamma_0",), (g0,)))
            if rep.steps[i - 1][1] == HEISENBERG:
                terms.append(_b_term(rs, order, i, f"B_{i}^psi", psi, ("\\gamma_0",), (g0,)))
        meta.append(("enumeration", _order_text(order)))
        return ExpansionTree(rs, "C", lhs, tuple(terms), tuple(meta))
    nf = nilorbit.normal_form_ntm(rs, phi, alpha)
    a = rs.simple_root(alpha)
    options = pair_choices(rs, a, nf.beta)
    if not options:
        raise AssertionError("no Weyl element moves the normal form onto simple roots")
    if choice is None:
        w, i, j = pair_to_simple(rs, a, nf.beta)
    else:
        picked = [o for o in options if set(o[1:]) == set(choice)]
        if not picked:
            raise LieExpError(f"pair {choice} is not reachable; options: {[(o[1] + 1, o[2] + 1) for o in options]}")
        w, i, j = picked[0]
    g0 = reduced(w * nf.transform.weyl_part(rs))
    v = v_gamma(rs, w, rs.S(alpha))
    assert v == v_gamma(rs, g0, rs.S(alpha))
    t = Term(
        "integrated", "W_psi", "W", rs.S_all(), (),
        (Fixed("\\psi", (rs.simple_root(i), rs.simple_root(j))),),
        integral=Integral("V_{\\gamma_0}", v),
        translate=("v", "\\gamma_0"),
        words=(("\\gamma_0", g0),),
        note="gamma_0 = " + json.dumps([str(w)] + nf.transform.to_json(), sort_keys=True),
    )
    meta.append(("pair", f"a{i + 1},a{j + 1}"))
    return ExpansionTree(rs, "C", lhs, (t,), tuple(meta))


# theorem for nice roots

def _heis_children_symbol(alpha: int) -> str:
    return f"\\gamma_{{{tex_alpha(alpha)}}}"


def theorem_d(rs: RootSystem, alpha: int) -> ExpansionTree:
    """Expansion of a next-to-minimal function through Fourier coefficients along a nice root."""
    if not is_nice(rs, alpha):
        raise NotNice(f"a{alpha + 1} is not nice in {rs.name}")
    kind = classify_root(rs, alpha)
    a = rs.simple_root(alpha)
    top = rs.highest_root_of(alpha)
    comp = rs.component_indices[rs.component_of(a)]
    S = rs.S(alpha)
    ta = tex_alpha(alpha)
    levi = [j for j in range(rs.rank) if j != alpha]
    terms = [
        _constant(rs, alpha, levi),
        Term("fourier", "A'", "F", S, (_coset_sum("\\gamma", _gamma_alpha(rs, alpha, f"\\Gamma_{{{ta}}}")),
                                       _char(rs, "\\varphi", a)), translate=("\\gamma",)),
    ]
    easy = kind == ABELIAN and rs.pairing(a, top) > 0
    meta = (("alpha", f"a{alpha + 1}"), ("case", "i" if easy else ("ii" if kind == ABELIAN else "iii")))
    if easy:
        return ExpansionTree(rs, "D", "\\eta_{\\mathrm{ntm}}(g)", tuple(terms), meta)
    d = delta(rs, alpha)
    dsym = f"\\delta_{{{ta}}}"
    lam = _lambda(rs, alpha, tuple(range(rs.rank)), f"\\Lambda_{{{ta}}}")
    terms.append(Term("fourier", "Lambda", "F", S, (_coset_sum("\\gamma", lam), _char(rs, "\\varphi", a),
                                                  _char(rs, "\\psi", d, dsym)),
                      translate=("\\gamma",), multiplicity=HALF))
    if kind == HEISENBERG:
        gsym = _heis_children_symbol(alpha)
        word = switch_word(rs, alpha, comp)
        B = b_set(rs, alpha)
        m = _m_alpha(rs, alpha, tuple(range(rs.rank)), f"\\mathcal{{M}}_{{{ta}}}")
        kids = (
            Term("fourier", "Omega", "F", S, (_char(rs, "\\varphi", a),), translate=("\\omega", gsym)),
            Term("fourier", "Omega_M", "F", S, (_coset_sum("\\gamma", m), _char(rs, "\\varphi", a),
                                                _char(rs, "\\psi", d, dsym)),
                 translate=("\\gamma", "\\omega", gsym)),
        )
        terms.append(Term("heisenberg", "Heisenberg", "F", S, (_omega(rs, f"\\Omega_{{{ta}}}", [neg(r) for r in B]),),
                          words=((gsym, word),), children=kids))
    return ExpansionTree(rs, "D", "\\eta_{\\mathrm{ntm}}(g)", tuple(terms), meta)


def heisenberg_decomposition(rs: RootSystem, alpha: int) -> ExpansionTree:
    """Split along a Heisenberg root into the abelian block and the Omega block."""
    if classify_root(rs, alpha) != HEISENBERG:
        raise NotHeisenberg(f"a{alpha + 1} is not a Heisenberg root of {rs.name}")
    a = rs.simple_root(alpha)
    comp = rs.component_indices[rs.component_of(a)]
    S = rs.S(alpha)
    ta = tex_alpha(alpha)
    gsym = _heis_children_symbol(alpha)
    level2 = tuple(level_two_roots(rs, alpha))
    psi = tuple(psi_set(rs, alpha))
    abelian = Term("fourier", "abelian", "F", S,
                   (Sum("space", "\\varphi", f"(\\mathfrak{{g}}^*)^{{S_{{{ta}}}}}_{{-2}}", level2),))
    child = Term("fourier", "non-abelian", "F", S,
                 (_char(rs, "\\varphi", a),
                  Sum("space", "\\psi", f"\\bigoplus_{{\\varepsilon\\in\\Psi_{{{ta}}}}}\\mathfrak{{g}}^*_{{-\\varepsilon}}", psi)),
                 translate=("\\omega", gsym))
    B = b_set(rs, alpha)
    block = Term("heisenberg", "Heisenberg", "F", S, (_omega(rs, f"\\Omega_{{{ta}}}", [neg(r) for r in B]),),
                 words=((gsym, switch_word(rs, alpha, comp)),), children=(child,))
    return ExpansionTree(rs, "Heis", "\\eta(g)", (abelian, block), (("alpha", f"a{alpha + 1}"),))


# next-to-minimal expansions

def _check_ntm_enumeration(rs: RootSystem, order: Sequence[int]):
    rep = _check_enumeration(rs, order)
    steps = [k for _, k in rep.steps]
    if any(k != ABELIAN for k in steps[:-1]):
        bad = [n + 1 for n, k in enumerate(steps[:-1]) if k != ABELIAN]
        raise NotQuasiAbelian(f"steps {bad} must be abelian for the Levi of the first n-1 roots")
    if not is_nice(rs, order[-1], rs.levi(order)):
        raise NotQuasiAbelian(f"last root a{order[-1] + 1} is not nice")
    return steps


def _aii_term(rs: RootSystem, order: Sequence[int], i: int, kind: str) -> Term | None:
    beta = order[i - 1]
    within = tuple(sorted(order[:i]))
    view = rs.levi(within)
    b = rs.simple_root(beta)
    top = view.highest_roots[view.component_of(b)]
    if kind == ABELIAN and rs.pairing(b, top) > 0:
        return None
    d = delta(rs, beta, view)
    w, p, q = pair_to_simple(rs, b, d, view)
    gsym = f"g{tex_sub(i)}"
    v = v_gamma(rs, w, rs.S(beta), view)
    lam = _lambda(rs, beta, within, f"\\Lambda_{{{tex_alpha(beta)}}}")
    return Term(
        "integrated", f"A_{i}{i}", "W", rs.S_all(),
        (_coset_sum("\\tilde\\gamma", lam), _char(rs, "\\varphi", b), _char(rs, "\\psi", d, f"\\delta{tex_sub(i)}")),
        conj=Conj(gsym, w, (p, q)),
        integral=Integral(f"V_{{{gsym}}}", v),
        translate=("v", gsym, "\\tilde\\gamma"),
        words=((gsym, w),),
        multiplicity=HALF,
    )


def _aij_term(rs: RootSystem, order: Sequence[int], i: int, j: int) -> Term:
    return Term(
        "whittaker", f"A_{i}{j}", "W", rs.S_all(),
        (_coset_sum("\\gamma'", _gamma_prev(rs, order, i)), _char(rs, "\\varphi", rs.simple_root(order[i - 1])),
         _coset_sum("\\gamma", _gamma_prev(rs, order, j)), _char(rs, "\\psi", rs.simple_root(order[j - 1]))),
        translate=("\\gamma", "\\gamma'"),
    )


def _b_family(rs: RootSystem, order: Sequence[int]) -> list[Term]:
    n = len(order)
    beta = order[-1]
    within = tuple(sorted(order))
    view = rs.levi(within)
    b = rs.simple_root(beta)
    B = b_set(rs, beta, view)
    gsym = f"\\gamma{tex_sub(n)}"
    gword = switch_word(rs, beta, within)
    omega = _omega(rs, f"\\Omega{tex_sub(n)}", [neg(r) for r in B])
    out = [Term("whittaker", f"B_{n}", "W", rs.S_all(), (omega, _char(rs, "\\varphi", b)),
                translate=("\\omega", gsym), words=((gsym, gword),))]
    d = delta(rs, beta, view)
    w, p, q = pair_to_simple(rs, b, d, view)
    g = f"g{tex_sub(n)}"
    v = v_gamma(rs, w, rs.S(beta), view)
    m = _m_alpha(rs, beta, within, f"\\mathcal{{M}}_{{{tex_alpha(beta)}}}")
    out.append(Term(
        "integrated", f"B_{n}{n}", "W", rs.S_all(),
        (omega, _coset_sum("\\tilde\\gamma", m), _char(rs, "\\varphi", b), _char(rs, "\\psi", d, f"\\delta{tex_sub(n)}")),
        conj=Conj(g, w, (p, q)),
        integral=Integral(f"V_{{{g}}}", v),
        translate=("v", g, "\\tilde\\gamma", "\\omega", gsym),
        words=((g, w), (gsym, gword)),
    ))
    for j in range(1, n):
        if rs.cartan[order[j - 1]][beta] == 0:
            out.append(Term(
                "whittaker", f"B_{n}{j}", "W", rs.S_all(),
                (omega, _char(rs, "\\varphi", b), _coset_sum("\\gamma", _gamma_prime(rs, order, j)),
                 _char(rs, "\\psi", rs.simple_root(order[j - 1]))),
                translate=("\\gamma", "\\omega", gsym), words=((gsym, gword),),
            ))
    return out


def _ntm_terms(rs: RootSystem, order: Sequence[int], steps: Sequence[str], recursive: bool, top: bool) -> list[Term]:
    n = len(order)
    if n == 0:
        return []
    children = _ntm_terms(rs, order[:-1], steps, recursive, False) if recursive else []
    out = [_constant(rs, order[-1], order[:-1], children)]
    out.append(_a_term(rs, order, n, f"A_{n}"))
    for j in range(1, n):
        if rs.cartan[order[j - 1]][order[-1]] == 0:
            out.append(_aij_term(rs, order, n, j))
    aii = _aii_term(rs, order, n, steps[n - 1])
    if aii is not None:
        out.append(aii)
    if top and steps[-1] == HEISENBERG:
        out += _b_family(rs, order)
    return out


def expand_ntm(rs: RootSystem, order: Sequence[int] | None = None, recursive: bool = True) -> ExpansionTree:
    """Whittaker expansion of a next-to-minimal automorphic function."""
    order = list(range(rs.rank)) if order is None else list(order)
    steps = _check_ntm_enumeration(rs, order)
    terms = _ntm_terms(rs, order, steps, recursive, True)
    return ExpansionTree(rs, "E", "\\eta_{\\mathrm{ntm}}(g)", tuple(terms), (("enumeration", _order_text(order)),))


def expand_ntm_bourbaki(rs: RootSystem) -> ExpansionTree:
    """Bourbaki enumeration of a simple system with the constant term left symbolic."""
    if len(rs.factors) != 1:
        raise LieExpError("the Bourbaki form needs a simple root system")
    tree = expand_ntm(rs, list(range(rs.rank)), recursive=False)
    return replace(tree, theorem="F")


# support audit

@dataclass(frozen=True)
class AuditEntry:
    label: str
    coefficient: str
    support: tuple[Root, ...]
    symbolic: bool = False


@dataclass(frozen=True)
class AuditReport:
    entries: tuple[AuditEntry, ...]
    failures: tuple[tuple[str, str], ...]

    @property
    def ok(self) -> bool:
        return not self.failures

    def to_json(self, rs: RootSystem) -> dict:
        return {
            "ok": self.ok,
            "entries": [
                {"label": e.label, "coefficient": e.coefficient, "support": [rs.fmt(r) for r in e.support],
                 **({"symbolic": True} if e.symbolic else {})}
                for e in self.entries
            ],
            "failures": [{"label": l, "reason": r} for l, r in self.failures],
        }


def audit_supports(tree: ExpansionTree) -> AuditReport:
    """Every Whittaker character must live on at most two orthogonal simple roots.

    Supports of Whittaker leaves are read after the recorded conjugation;
    Fourier leaves must sit at level 2 of their S with orthogonal support.
    """
    rs = tree.rs
    simple = set(rs.simple_roots)
    entries, fails = [], []
    for t in leaves(tree.terms):
        if t.variant == "constant":
            continue
        roots = t.char_roots()
        spaces = [s for s in t.sums if s.kind == "space"]
        if t.conj is not None:
            roots = [apply(t.conj.word, r) for r in roots]
            if sorted(roots) != sorted(rs.simple_root(k) for k in t.conj.targets):
                fails.append((t.label, "conjugated support differs from the recorded targets"))
        entries.append(AuditEntry(t.label, t.coefficient, tuple(roots), bool(spaces)))
        if len(roots) > 2:
            fails.append((t.label, "more than two roots"))
        if len(roots) == 2 and rs.pairing(roots[0], roots[1]) != 0:
            fails.append((t.label, "roots are not orthogonal"))
        if t.coefficient == "W":
            if spaces:
                fails.append((t.label, "Whittaker leaf sums over a space"))
            if any(r not in simple for r in roots):
                fails.append((t.label, "support is not on simple roots"))
        else:
            if any(t.S(r) != 2 for r in roots) or any(t.S(r) != 2 for s in spaces for r in s.roots):
                fails.append((t.label, "support not at level 2"))
            if len(roots) == 2:
                pair_to_simple(rs, roots[0], roots[1])
    return AuditReport(tuple(entries), tuple(fails))


# rendering

def _char_expr(t: Term) -> str:
    names = [f.var for f in t.fixed] + [s.var for s in t.sums if s.kind in ("char", "space")]
    expr = "+".join(names)
    if t.conj is not None:
        return f"\\operatorname{{Ad}}^*({t.conj.symbol})({expr})"
    return expr


def _sub(x: str) -> str:
    return f"_{x}" if (len(x) == 1 or (x.startswith("\\") and x[1:].isalpha())) else f"_{{{x}}}"


def render_term(t: Term, collapse: bool = True) -> str:
    """LaTeX for one term, without its label."""
    if t.variant == "constant":
        if not t.levi:
            return "\\mathcal{W}_0[\\eta](g)"
        i = next(k for k, c in enumerate(t.S.coords) if c)
        return f"\\mathcal{{F}}_{{S_{{{tex_alpha(i)}}},0}}[\\eta](g)"
    parts = []
    if t.multiplicity != 1:
        parts.append(f"\\frac{{{t.multiplicity.numerator}}}{{{t.multiplicity.denominator}}}")
    dropped = set()
    for s in t.sums:
        if collapse and s.kind == "coset" and s.coset.trivial:
            dropped.add(s.var)
            continue
        parts.append(f"\\sum_{{{s.var}\\in {s.symbol}}}" if s.kind == "space" and s.symbol.startswith("(")
                     else f"\\sum_{{{s.var}\\in{s.symbol}}}")
    if t.variant == "heisenberg":
        inner = " + ".join(render_term(c, collapse) for c in t.children)
        return "".join(parts) + f"\\Bigl({inner}\\Bigr)"
    if t.integral is not None:
        parts.append(f"\\int_{{{t.integral.symbol}}}")
    expr = _char_expr(t)
    if t.coefficient == "W":
        head = f"\\mathcal{{W}}{_sub(expr)}"
    else:
        i = next(k for k, c in enumerate(t.S.coords) if c)
        head = f"\\mathcal{{F}}_{{S_{{{tex_alpha(i)}}},{expr}}}"
    args = " ".join([x for x in t.translate if x not in dropped] + ["g"])
    body = f"{head}[\\eta]({args})"
    if t.integral is not None:
        body += "\\,dv"
    return "".join(parts) + body


def _label_tex(label: str) -> str:
    base, _, rest = label.partition("_")
    if not rest:
        return f"\\text{{{label}}}" if label.isalpha() else label
    sup = ""
    if "^" in rest:
        rest, sup = rest.split("^", 1)
        sup = "^\\" + sup
    return f"{base}{tex_sub(rest)}{sup}"


def render_latex(tree: ExpansionTree, standalone: bool = False, labels: bool = True, collapse: bool = True) -> str:
    if tree.is_zero:
        body = f"{tree.lhs} &= 0"
    else:
        lines = []
        for n, t in enumerate(tree.terms):
            x = render_term(t, collapse)
            if labels and t.variant != "constant" and not t.label.startswith("W"):
                x = f"\\underbrace{{{x}}}_{{{_label_tex(t.label)}}}"
            lines.append(("" if n == 0 else "&\\quad + ") + x)
        body = f"{tree.lhs} &= " + " \\\\\n".join(lines)
    frag = "\\begin{align*}\n" + body + "\n\\end{align*}\n"
    if not standalone:
        return frag
    return (
        "\\documentclass{article}\n\\usepackage{amsmath,amssymb}\n\\allowdisplaybreaks\n"
        "\\begin{document}\n" + frag + "\\end{document}\n"
    )


def _word_json(w: WeylWord) -> str:
    return str(w)


def _coset_json(rs: RootSystem, d: CosetDescriptor) -> dict:
    return d.to_json(rs)


def term_to_json(rs: RootSystem, t: Term) -> dict:
    out: dict = {"variant": t.variant, "label": t.label, "coefficient": t.coefficient,
                 "multiplicity": str(t.multiplicity)}
    if t.S is not None:
        out["S"] = t.S.to_json()
    chars = [rs.fmt(r) for r in t.char_roots()]
    if chars:
        out["chars"] = chars
    cosets = t.cosets()
    if cosets:
        out["coset"] = _coset_json(rs, cosets[0])
    if t.sums:
        out["sums"] = []
        for s in t.sums:
            d = {"kind": s.kind, "var": s.var, "symbol": s.symbol}
            if s.roots:
                d["roots"] = [rs.fmt(r) for r in s.roots]
            if s.coset is not None:
                full = _coset_json(rs, s.coset)
                d["coset"] = {k: full[k] for k in ("kind", "symbol", "levi_simple", "lines", "multiplicity")}
            out["sums"].append(d)
    if t.fixed:
        out["fixed"] = [{"var": f.var, "roots": [rs.fmt(r) for r in f.roots]} for f in t.fixed]
    if t.conj is not None:
        out["conj"] = {"symbol": t.conj.symbol, "word": _word_json(t.conj.word),
                       "targets": [f"a{k + 1}" for k in t.conj.targets]}
    if t.integral is not None:
        out["integral"] = {"symbol": t.integral.symbol, "roots": [rs.fmt(r) for r in t.integral.roots]}
    if t.translate:
        out["translate"] = list(t.translate)
    if t.words:
        out["words"] = [{"symbol": s, "word": _word_json(w)} for s, w in t.words]
    if t.levi is not None:
        out["levi"] = [f"a{k + 1}" for k in t.levi]
    if t.children:
        out["children"] = [term_to_json(rs, c) for c in t.children]
    if t.note:
        out["note"] = t.note
    return out


def to_json(tree: ExpansionTree) -> dict:
    return {
        "theorem": tree.theorem,
        "type": tree.rs.name,
        "lhs": tree.lhs,
        "meta": {k: v for k, v in tree.meta},
        "terms": [term_to_json(tree.rs, t) for t in tree.terms],
    }


def render(tree: ExpansionTree, fmt: str = "json", **opts) -> str:
    if fmt == "json":
        return json.dumps(to_json(tree), indent=2, sort_keys=False) + "\n"
    if fmt == "latex":
        return render_latex(tree, **opts)
    if fmt == "text":
        return render_text(tree)
    raise LieExpError(f"unknown format {fmt!r}")


def render_text(tree: ExpansionTree) -> str:
    if tree.is_zero:
        return "0\n"
    out = []

    def walk(terms, depth):
        for t in terms:
            desc = [t.label, t.variant]
            if t.multiplicity != 1:
                desc.append(f"x{t.multiplicity}")
            for s in t.sums:
                if s.kind == "coset":
                    desc.append(f"{s.var}:{s.coset.shape()}[{len(s.coset.cells) or len(s.coset.fixed_points)}]")
                elif s.kind == "char":
                    desc.append(f"-{tree.rs.fmt(s.roots[0])}")
                else:
                    desc.append(f"{s.kind}[{len(s.roots)}]")
            if t.integral is not None:
                desc.append("V=" + "{" + ", ".join(tree.rs.fmt(r) for r in t.integral.roots) + "}")
            for sym, w in t.words:
                desc.append(f"{sym}={w}")
            out.append("  " * depth + " ".join(desc))
            walk(t.children, depth + 1)

    walk(tree.terms, 0)
    return "\n".join(out) + "\n"


# parsing

def _parse_word(rs: RootSystem, text: str) -> WeylWord:
    return WeylWord.parse(rs, text)


def _parse_term(rs: RootSystem, d: dict) -> Term:
    sums = []
    for s in d.get("sums", []):
        roots = tuple(rs.parse_root(r) for r in s.get("roots", []))
        coset = None
        if "coset" in s:
            c = s["coset"]
            coset = _coset(rs, c["kind"], tuple(sorted(int(x[1:]) - 1 for x in c["levi_simple"])),
                           tuple(rs.parse_root(r) for r in c["lines"]), c["symbol"], Fraction(c["multiplicity"]))
        sums.append(Sum(s["kind"], s["var"], s["symbol"], roots, coset))
    fixed = tuple(Fixed(f["var"], tuple(rs.parse_root(r) for r in f["roots"])) for f in d.get("fixed", []))
    conj = None
    if "conj" in d:
        c = d["conj"]
        conj = Conj(c["symbol"], _parse_word(rs, c["word"]), tuple(int(x[1:]) - 1 for x in c["targets"]))
    integral = None
    if "integral" in d:
        integral = Integral(d["integral"]["symbol"], tuple(rs.parse_root(r) for r in d["integral"]["roots"]))
    return Term(
        d["variant"], d["label"], d["coefficient"],
        CartanElement.from_json(d["S"], rs.rank) if "S" in d else None,
        tuple(sums), fixed, conj, integral,
        tuple(d.get("translate", [])),
        tuple((w["symbol"], _parse_word(rs, w["word"])) for w in d.get("words", [])),
        Fraction(d["multiplicity"]),
        tuple(int(x[1:]) - 1 for x in d["levi"]) if "levi" in d else None,
        tuple(_parse_term(rs, c) for c in d.get("children", [])),
        d.get("note", ""),
    )


def parse(text: str | dict, rs: RootSystem | None = None) -> ExpansionTree:
    d = json.loads(text) if isinstance(text, str) else text
    rs = rs or build(d["type"])
    return ExpansionTree(rs, d["theorem"], d["lhs"], tuple(_parse_term(rs, t) for t in d["terms"]),
                         tuple(d.get("meta", {}).items()))


__all__ = [
    "ExpansionTree",
    "Term",
    "audit_supports",
    "expand_min",
    "expand_ntm",
    "expand_ntm_bourbaki",
    "flatten",
    "fourier_coeff_min",
    "fourier_coeff_ntm",
    "heisenberg_decomposition",
    "orthogonal_enumeration",
    "pair_choices",
    "parse",
    "render",
    "render_term",
    "theorem_d",
]

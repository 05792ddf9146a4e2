"""Invariant suites run by ``lieexp verify``.

Every suite yields :class:`Case` records with a stable identifier; reports
are sorted by identifier so output is deterministic.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations
from typing import Callable, Iterable, Sequence

from . import expansion, nilorbit
from .chevalley import Covector
from .errors import LieExpError
from .grading_parabolic import (
    ABELIAN,
    HEISENBERG,
    b_set,
    classify_by_bracket,
    classify_by_highest_root,
    classify_root,
    delta,
    derived_roots,
    is_nice,
    level_two_roots,
    neighbours,
    orthogonal_levi,
    phi_set,
    psi_union_check,
    second_chevalley_weights,
    u_roots,
)
from .root_system import RootSystem, build, is_positive, parse_type
from .weyl import apply, involution_switch, orbit, word
from .whittaker import v_gamma


@dataclass(frozen=True)
class Case:
    id: str
    ok: bool
    detail: str = ""


DEFAULT_TYPES = {
    "table1": "A1..A8,D4..D8,E6,E7,E8",
    "minuscule": "A1..A6,D4,D5,E6,E7",
    "phi-transitivity": "D5,E6,E7,E8",
    "psi-union": "D4..D8,E6,E7,E8",
    "rank2": "A3,D4,D5",
    "wla": "E6,E7,E8",
}


def expand_types(text: str) -> list[str]:
    """Expand "A1..A3,E6" to ["A1", "A2", "A3", "E6"]."""
    out = []
    for part in (p.strip() for p in text.split(",")):
        if not part:
            continue
        m = re.fullmatch(r"([A-Za-z])(\d+)\.\.([A-Za-z])?(\d+)", part)
        if m:
            s, lo, s2, hi = m.group(1).upper(), int(m.group(2)), (m.group(3) or m.group(1)).upper(), int(m.group(4))
            if s2 != s:
                raise LieExpError(f"range {part!r} mixes series")
            out += [f"{s}{n}" for n in range(lo, hi + 1)]
        else:
            parse_type(part)
            out.append(part.upper())
    return out


# abelian and Heisenberg simple roots per simple factor, 1-based
def table1_expected(series: str, n: int) -> dict[int, str]:
    if series == "A":
        return {i: ABELIAN for i in range(1, n + 1)}
    if series == "D":
        return {1: ABELIAN, n - 1: ABELIAN, n: ABELIAN, 2: HEISENBERG}
    return {
        6: {1: ABELIAN, 6: ABELIAN, 2: HEISENBERG},
        7: {7: ABELIAN, 1: HEISENBERG},
        8: {8: HEISENBERG},
    }[n]


def suite_table1(types: Sequence[str]) -> list[Case]:
    out = []
    for t in types:
        rs = build(t)
        for k, comp in enumerate(rs.component_indices):
            series, n = rs.factors[k]
            exp = table1_expected(series, n)
            for pos, i in enumerate(comp, start=1):
                a, b = classify_by_bracket(rs, i), classify_by_highest_root(rs, i)
                want = exp.get(pos, "neither")
                ok = a == b and a.lower() == want.lower()
                out.append(Case(f"table1/{t}/a{i + 1}", ok, "" if ok else f"bracket={a} highest={b} table={want}"))
    return out


def suite_minuscule(types: Sequence[str]) -> list[Case]:
    """W(L_alpha) is transitive on the level-2 roots of S_alpha for abelian alpha."""
    out = []
    for t in types:
        rs = build(t)
        for i in range(rs.rank):
            if classify_root(rs, i) != ABELIAN:
                continue
            levi = rs.levi(j for j in range(rs.rank) if j != i)
            lvl = set(level_two_roots(rs, i))
            orb = orbit(rs, [rs.simple_root(i)], levi)
            ok = orb == lvl
            out.append(Case(f"minuscule/{t}/a{i + 1}", ok, f"orbit {len(orb)} level-2 {len(lvl)}"))
    return out


def suite_phi_transitivity(types: Sequence[str]) -> list[Case]:
    """W(M_alpha) is transitive on Phi_alpha for nice extreme alpha."""
    out = []
    for t in types:
        rs = build(t)
        for i in range(rs.rank):
            if not is_nice(rs, i) or len(neighbours(rs, i)) != 1:
                continue
            phi = set(phi_set(rs, i))
            m = orthogonal_levi(rs, i)
            rep = second_chevalley_weights(rs, i)
            orb = orbit(rs, [min(phi)], m) if phi else set()
            ok = orb == phi and set(rep.weights) == phi and rep.single_orbit
            out.append(Case(f"phi-transitivity/{t}/a{i + 1}", ok, f"|Phi|={len(phi)} orbit={len(orb)}"))
    return out


def suite_psi_union(types: Sequence[str]) -> list[Case]:
    out = []
    for t in types:
        rs = build(t)
        for i in range(rs.rank):
            if classify_root(rs, i) != HEISENBERG:
                continue
            u = u_roots(rs, i)
            B = b_set(rs, i)
            ok = psi_union_check(rs, i) and len(derived_roots(rs, u)) == 1 and len(B) == (len(u) - 1) // 2
            out.append(Case(f"psi-union/{t}/a{i + 1}", ok, f"dim u={len(u)} |B|={len(B)}"))
    return out


def suite_rank2(types: Sequence[str]) -> list[Case]:
    """Pairing criterion against centralizer-dimension classification, all root pairs."""
    out = []
    for t in types:
        rs = build(t)
        bad = []
        n = 0
        for e, d in combinations(rs.positive_roots, 2):
            n += 1
            want = nilorbit.rank2_type(rs, e, d)
            got = nilorbit.classify(rs, Covector(rs, {e: 1, d: 1}), check=False).cls
            if want != got:
                bad.append(f"({rs.fmt(e)}, {rs.fmt(d)}): pairing says {want}, dimension says {got}")
        out.append(Case(f"rank2/{t}", not bad, f"{n} pairs" if not bad else "; ".join(bad[:5])))
    return out


def suite_wla(types: Sequence[str]) -> list[Case]:
    out = []
    for t in types:
        rs = build(t)
        for i in range(rs.rank):
            if not is_nice(rs, i):
                continue
            w = involution_switch(rs, i)
            ok = all(apply(w, apply(w, r)) == r for r in rs.roots) and apply(w, rs.simple_root(i)) == delta(rs, i)
            ok = ok and apply(w, delta(rs, i)) == rs.simple_root(i)
            out.append(Case(f"wla/{t}/a{i + 1}", ok, str(w) if len(w) < 20 else f"length {len(w)}"))
    return out


# fixtures from the worked examples

def _roots(rs: RootSystem, texts: Iterable[str]) -> set:
    return {rs.parse_root(x) for x in texts}


def _fx_d4_min(out: list[Case]):
    rs = build("D4")
    omega = _roots(rs, ["a1+a2", "a2+a3", "a2+a4", "a1+2a2+a3+a4"])
    out.append(Case("fixtures/d4-omega", set(b_set(rs, 1)) == omega))
    expected = word(rs, 1, 3, 2, 4, 2, 1, 3)
    top = rs.highest_roots[0]
    out.append(Case("fixtures/d4-gamma4-word", apply(expected, rs.simple_root(1)) == top))
    tree = expansion.flatten(expansion.expand_min(rs, [0, 2, 3, 1]))
    b4 = next(t for t in tree.terms if t.label == "B_4")
    omega_neg = {tuple(-x for x in r) for r in b4.sums[0].roots}
    out.append(Case("fixtures/d4-B4-omega-negated", omega_neg == omega))
    out.append(Case("fixtures/d4-B4-gamma4", dict(b4.words)["\\gamma_4"].letters == expected.letters,
                    str(dict(b4.words)["\\gamma_4"])))
    shapes = [t.sums[0].coset.shape() for t in tree.terms if t.label.startswith("A_")]
    out.append(Case("fixtures/d4-gamma-shapes", shapes == ["{1}", "{1}", "{1}", "(P^1)^3"], str(shapes)))


def _fx_v_domains(out: list[Case]):
    rs = build("D5")
    got = set(v_gamma(rs, word(rs, 2, 1), rs.S(0)))
    out.append(Case("fixtures/d5-v-s2s1", got == _roots(rs, ["-a2", "-a1-a2"])))
    table = {
        (1, 3): ["00010", "01000", "01110", "01111"],
        (1, 4): ["01000", "01100", "01101"],
        (1, 5): ["00100", "00110", "01100", "01110", "01211"],
        (2, 4): ["00100", "00101"],
        (2, 5): ["00100", "10000", "00110", "11100", "11110", "11211"],
    }
    choices = expansion.pair_choices(rs, rs.simple_root(4), rs.highest_roots[0])
    for (i, j), rows in table.items():
        want = {tuple(-int(c) for c in r) for r in rows}
        hits = [set(v_gamma(rs, w, rs.S(4))) for w, p, q in choices if {p + 1, q + 1} == {i, j}]
        ok = len(hits) == 2 and all(h == want for h in hits)
        out.append(Case(f"fixtures/d5-vij/a{i},a{j}", ok))
    rs4 = build("D4")
    phi = Covector(rs4, {rs4.parse_root("a1+a2+a3"): 1, rs4.parse_root("a1+a2+a4"): 1})
    t = expansion.fourier_coeff_ntm(rs4, 0, phi)
    out.append(Case("fixtures/d4-ntm-v", set(t.terms[0].integral.roots) == _roots(rs4, ["-a2", "-a1-a2"])))


def _fx_d5_fourier(out: list[Case]):
    rs = build("D5")
    phi = Covector(rs, {rs.parse_root("a1+a2"): 1})
    t = expansion.fourier_coeff_ntm(rs, 0, phi, enumeration=[4, 3, 2])
    shapes = [s.coset.shape() for x in t.terms for s in x.sums if s.kind == "coset"]
    out.append(Case("fixtures/d5-min-cosets", shapes == ["{1}", "{1}", "(P^1)^2"], str(shapes)))
    phi = Covector(rs, {rs.parse_root("a1"): 1, rs.highest_roots[0]: 1})
    t = expansion.fourier_coeff_ntm(rs, 0, phi)
    want = _roots(rs, ["-a3", "-a2-a3", "-a1-a2-a3"])
    out.append(Case("fixtures/d5-ntm-rank2", set(t.terms[0].integral.roots) == want
                    and dict(t.meta)["pair"] == "a4,a5"))
    rs4 = build("D4")
    t = expansion.fourier_coeff_ntm(rs4, 1, Covector(rs4, {rs4.parse_root("a1+a2"): 1}))
    out.append(Case("fixtures/d4-a2-min-bare", t.labels() == ["W_psi"]))


def _fx_orbits(out: list[Case]):
    rs = build("D5")
    for text, dim, part in [("a4:1,a5:1", 16, "31^7"), ("a1:1,a3:1", 20, "2^41^2")]:
        lab = nilorbit.classify(rs, Covector.parse(rs, text))
        out.append(Case(f"fixtures/d5-orbit/{text}", lab.cls == nilorbit.NTM and lab.dim == dim and lab.partition == part,
                        f"{lab.cls} {lab.dim} {lab.partition}"))
    cat = nilorbit.dn_catalog(5)
    edges = nilorbit.hasse_edges(cat)
    out.append(Case("fixtures/d5-hasse", len(cat.orbits) == 16 and len(edges) == 19,
                    f"{len(cat.orbits)} nodes {len(edges)} edges"))


def _fx_e8(out: list[Case]):
    rs = build("E8")
    u = u_roots(rs, 7)
    out.append(Case("fixtures/e8-heisenberg-dim", len(u) == 57 and len(derived_roots(rs, u)) == 1))
    out.append(Case("fixtures/e8-phi-27", len(phi_set(rs, 7)) == 27 and second_chevalley_weights(rs, 7).dim == 27))
    out.append(Case("fixtures/e8-psi-union", psi_union_check(rs, 7)))
    top = rs.highest_roots[0]
    want = tuple(a - b - c for a, b, c in zip(top, rs.simple_root(7), rs.simple_root(6)))
    out.append(Case("fixtures/e8-delta", delta(rs, 7) == want))
    m = expansion.expand_min(rs, list(range(8)), recursive=False)
    out.append(Case("fixtures/e8-min-shape", m.labels() == ["F_8,0", "A_8", "B_8"]))
    n = expansion.expand_ntm_bourbaki(rs)
    want_labels = ["F_8,0", "A_8"] + [f"A_8{j}" for j in range(1, 7)] + ["A_88", "B_8", "B_88"] + [f"B_8{j}" for j in range(1, 7)]
    out.append(Case("fixtures/e8-ntm-shape", n.labels() == want_labels))
    a8 = expansion.render_term(m.terms[1])
    target = r"\sum_{\gamma\in\Gamma_7}\sum_{\varphi\in\mathfrak{g}^\times_{-\alpha_8}}\mathcal{W}_\varphi[\eta](\gamma g)"
    out.append(Case("fixtures/e8-A8-latex", "".join(a8.split()) == "".join(target.split())))


def _fx_switch(out: list[Case]):
    rs = build("E7")
    w = involution_switch(rs, 6)
    out.append(Case("fixtures/e7-a7-switch", apply(w, rs.simple_root(6)) == rs.highest_roots[0]))
    rs = build("E8")
    w = involution_switch(rs, 7)
    out.append(Case("fixtures/e8-a8-switch", apply(w, rs.simple_root(7)) == delta(rs, 7)))


def suite_fixtures(types: Sequence[str] = ()) -> list[Case]:
    out: list[Case] = []
    for fx in (_fx_d4_min, _fx_v_domains, _fx_d5_fourier, _fx_orbits, _fx_e8, _fx_switch):
        try:
            fx(out)
        except Exception as e:  # a crashing fixture is a failure, not a usage error
            out.append(Case(f"fixtures/{fx.__name__[4:]}", False, f"{type(e).__name__}: {e}"))
    return out


SUITES: dict[str, Callable[[Sequence[str]], list[Case]]] = {
    "table1": suite_table1,
    "minuscule": suite_minuscule,
    "phi-transitivity": suite_phi_transitivity,
    "psi-union": suite_psi_union,
    "rank2": suite_rank2,
    "wla": suite_wla,
    "fixtures": suite_fixtures,
}


def run(suite: str, types: Sequence[str] | None = None) -> list[Case]:
    if suite == "all":
        cases = []
        for name in SUITES:
            cases += run(name, types)
        return sorted(cases, key=lambda c: c.id)
    if suite not in SUITES:
        raise LieExpError(f"unknown suite {suite!r}; choose from {', '.join(list(SUITES) + ['all'])}")
    if types is None:
        types = expand_types(DEFAULT_TYPES.get(suite, ""))
    return sorted(SUITES[suite](types), key=lambda c: c.id)

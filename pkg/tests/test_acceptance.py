"""The ten acceptance criteria, one test each.

Each test records its verdict; the terminal summary prints one PASS/FAIL
line per criterion.  Run this file directly for the same report without
pytest.
"""

from __future__ import annotations

import json
import random
import sys
import time
from collections import Counter
from fractions import Fraction
from itertools import combinations
from pathlib import Path

import pytest

HERE = Path(__file__).parent
sys.path.insert(0, str(HERE))

import make_goldens  # noqa: E402
import worked_examples as P  # noqa: E402
from conftest import ACCEPTANCE  # noqa: E402
from test_properties import COEFFS, check_covector  # noqa: E402

from lieexp import expansion, nilorbit, verify  # noqa: E402
from lieexp.chevalley import Covector, build_constants  # noqa: E402
from lieexp.errors import LieExpError  # noqa: E402
from lieexp.grading_parabolic import (  # noqa: E402
    ABELIAN,
    HEISENBERG,
    b_set,
    classify_by_bracket,
    classify_by_highest_root,
    classify_root,
    derived_roots,
    gamma_prev,
    is_nice,
    level_two_roots,
    phi_set,
    psi_set,
    second_chevalley_weights,
    u_roots,
)
from lieexp.root_system import build  # noqa: E402
from lieexp.weyl import WeylWord, apply, word  # noqa: E402
from lieexp.whittaker import v_gamma  # noqa: E402

ORACLES = json.loads((HERE / "data" / "oracles.json").read_text())
SIMPLE_TYPES = [("A", n) for n in range(1, 9)] + [("D", n) for n in range(4, 9)] + [("E", n) for n in (6, 7, 8)]

TITLES = {
    1: "quasi-abelian table, two criteria agree root by root",
    2: "D4 minimal example: Omega_4, gamma_4, Gamma shapes",
    3: "D5 V-domains",
    4: "D5 next-to-minimal orbit dimensions and partitions",
    5: "D5 Hasse diagram",
    6: "E8 Heisenberg data",
    7: "expansion goldens",
    8: "geometric property suites",
    9: "Chevalley basis soundness",
    10: "support audit over every generator, rank <= 8",
}


class Check:
    """Collects failures so a criterion reports all of them at once."""

    def __init__(self):
        self.failures: list[str] = []

    def __call__(self, ok, what):
        if not ok:
            self.failures.append(what)


def _roots(rs, texts):
    return {rs.parse_root(t) for t in texts}


def criterion_1(c: Check):
    for series, n in SIMPLE_TYPES:
        rs = build(f"{series}{n}")
        ab, he = P.quasi_abelian_table(series, n)
        for i in range(n):
            a, b = classify_by_bracket(rs, i), classify_by_highest_root(rs, i)
            c(a == b, f"{series}{n} a{i + 1}: bracket {a} vs highest root {b}")
            want = ABELIAN if i + 1 in ab else HEISENBERG if i + 1 in he else None
            c(a == want if want else a not in (ABELIAN, HEISENBERG), f"{series}{n} a{i + 1}: got {a}")


def criterion_2(c: Check):
    rs = build("D4")
    c(set(b_set(rs, 1)) == _roots(rs, P.D4_OMEGA), "Omega_4 roots")
    given = word(rs, *P.D4_GAMMA4)
    c(apply(given, rs.simple_root(1)) == rs.highest_roots[0], "gamma_4 word sends a2 to the highest root")
    tree = expansion.flatten(expansion.expand_min(rs, [0, 2, 3, 1]))
    b4 = next(t for t in tree.terms if t.label == "B_4")
    c({tuple(-x for x in r) for r in b4.sums[0].roots} == _roots(rs, P.D4_OMEGA), "B_4 sums over -Omega_4")
    c(dict(b4.words)["\\gamma_4"].letters == given.letters, "B_4 records the same gamma_4 word")
    order = [0, 2, 3, 1]
    shapes = [gamma_prev(rs, order, i).shape() for i in range(1, 5)]
    c(shapes == P.D4_GAMMA_SHAPES, f"Gamma shapes {shapes}")
    g3 = gamma_prev(rs, order, 4)
    c(len(g3.factors) == 3 and all(f.cells == 2 for f in g3.factors), "Gamma_3 is three rank-one factors")


def criterion_3(c: Check):
    rs = build("D5")
    c(set(v_gamma(rs, word(rs, 2, 1), rs.S(0))) == _roots(rs, P.D5_V_S2S1), "v_gamma(s2 s1, S_a1)")
    seen: dict = {}
    for w, i, j in expansion.pair_choices(rs, rs.simple_root(4), rs.highest_roots[0]):
        seen.setdefault(tuple(sorted((i + 1, j + 1))), set()).add(frozenset(v_gamma(rs, w, rs.S(4))))
    for key, rows in P.D5_VIJ.items():
        c(seen.get(key) == {frozenset(P.vij_roots(rows))}, f"V row {key}")
    c(set(seen) == set(P.D5_VIJ), f"reachable pairs {sorted(seen)}")


def criterion_4(c: Check):
    rs = build("D5")
    for text, dim, part, oracle in [("a4:1,a5:1", 16, "31^7", "D5/a4,a5"), ("a1:1,a3:1", 20, "2^41^2", "D5/a1,a3")]:
        lab = nilorbit.classify(rs, Covector.parse(rs, text))
        c(lab.cls == nilorbit.NTM, f"{text} class {lab.cls}")
        c(lab.dim == dim == ORACLES["so_orbits"][oracle]["dim"], f"{text} dim {lab.dim}")
        want = nilorbit.format_partition(ORACLES["so_orbits"][oracle]["partition"])
        c(lab.partition == part == want, f"{text} partition {lab.partition}")


def criterion_5(c: Check):
    cat = nilorbit.dn_catalog(5)
    names = [o.name for o in cat.orbits]
    c(sorted(names) == sorted(P.D5_NODES), f"nodes {names}")
    index = {n: k + 1 for k, n in enumerate(P.D5_NODES)}
    edges = {(index[x.name], index[y.name]) for x, y in nilorbit.hasse_edges(cat)}
    c(edges == P.D5_EDGES, f"edges differ: {sorted(edges ^ P.D5_EDGES)}")


def criterion_6(c: Check):
    rs = build("E8")
    u = u_roots(rs, 7)
    c(len(u) == P.E8_HEISENBERG_DIM, f"dim u = {len(u)}")
    c(len(derived_roots(rs, u)) == 1, "one-dimensional derived algebra")
    phi = phi_set(rs, 7)
    c(len(phi) == P.E8_PHI_SIZE, f"|Phi| = {len(phi)}")
    rep = second_chevalley_weights(rs, 7)
    c(rep.dim == P.E8_PHI_SIZE and set(rep.weights) == set(phi) and rep.single_orbit, "27-dimensional weights")
    extra = tuple(t - a for t, a in zip(rs.highest_roots[0], rs.simple_root(7)))
    c(set(psi_set(rs, 7)) == set(phi) | {extra}, "Psi = Phi with alpha_max - alpha_8")


def _squash(s):
    return "".join(s.split())


def criterion_7(c: Check):
    trees = make_goldens.trees()
    golden = HERE / "golden"
    for name, tree in trees.items():
        c(json.loads(expansion.render(tree, "json")) == json.loads((golden / f"{name}.json").read_text()),
          f"{name} JSON")
        c(_squash(expansion.render(tree, "latex")) == _squash((golden / f"{name}.tex").read_text()), f"{name} LaTeX")
    c(Counter(trees["e8_min"].labels()) == Counter(["F_8,0", "A_8", "B_8"]), "E8 minimal term multiset")
    c(Counter(trees["e8_ntm"].labels()) == Counter(P.e8_ntm_labels()), "E8 next-to-minimal term multiset")
    c(trees["d4_min"].labels() == ["W_0", "A_1", "A_2", "A_3", "A_4", "B_4"], "D4 minimal terms")
    c(trees["d4_fourier_min_a2"].labels() == ["W_psi"], "empty orthogonal set collapses to one term")
    shapes = [s.coset.shape() for t in trees["d5_fourier_min"].terms for s in t.sums if s.kind == "coset"]
    c(shapes == P.D5_MIN_COSETS, f"D5 minimal coefficient cosets {shapes}")
    d5 = build("D5")
    c(set(trees["d5_fourier_ntm"].terms[0].integral.roots) == _roots(d5, P.D5_NTM_RANK2_V), "D5 rank-two V-domain")


def random_level_two(count: int, seed: int):
    rng = random.Random(seed)
    for k in range(count):
        rs = build(["D4", "D5", "E6"][k % 3])
        alpha = rng.randrange(rs.rank)
        pool = level_two_roots(rs, alpha)
        support = rng.sample(pool, rng.randint(1, min(3, len(pool))))
        yield rs, alpha, Covector(rs, {r: rng.choice(COEFFS) for r in support})


def criterion_8(c: Check):
    for name, suite in [("rank2", "a"), ("minuscule", "b"), ("phi-transitivity", "c"), ("wla", "d")]:
        cases = verify.run(name)
        bad = [x.id for x in cases if not x.ok]
        c(cases and not bad, f"({suite}) {name}: {bad or 'no cases'}")
    wla = {x.id for x in verify.run("wla")}
    for t in ("E6", "E7", "E8"):
        rs = build(t)
        want = {f"wla/{t}/a{i + 1}" for i in range(rs.rank) if is_nice(rs, i)}
        c(want <= wla, f"(d) nice roots of {t} covered")
    seen = Counter()
    for rs, alpha, phi in random_level_two(500, seed=2024):
        try:
            seen[check_covector(rs, alpha, phi)] += 1
        except (AssertionError, LieExpError) as e:
            c(False, f"(e) {rs.name} a{alpha + 1} {phi}: {type(e).__name__} {e}")
    c(seen[nilorbit.MINIMAL] and seen[nilorbit.NTM] and seen[nilorbit.LARGER], f"(e) class mix {dict(seen)}")


def criterion_9(c: Check):
    for t in ("A2", "A3", "D4"):
        alg = build_constants(build(t), verify=False)
        try:
            alg.check_jacobi(alg.all_triples())
        except AssertionError as e:
            c(False, f"Jacobi {t}: {e}")
    e8 = build_constants(build("E8"), verify=False)
    try:
        c(e8.check_jacobi(e8.sample_triples(1000, seed=0)) == 1000, "E8 sample size")
    except AssertionError as e:
        c(False, f"Jacobi E8: {e}")
    rng = random.Random(99)
    for k in range(100):
        rs = build(["D4", "D5", "E6", "E7"][k % 4])
        alg = build_constants(rs)
        phi = Covector(rs, {r: rng.choice(COEFFS) for r in rng.sample(rs.positive_roots, rng.randint(1, 3))})
        w = WeylWord(rs, tuple(rng.randrange(rs.rank) for _ in range(rng.randint(1, 12))))
        moved = nilorbit.Transform.weyl(w).apply(alg, phi)
        d0 = alg.orbit_dim(alg.dual_nilpotent(phi))
        d1 = alg.orbit_dim(alg.dual_nilpotent(moved))
        c(d0 == d1, f"orbit_dim not Weyl invariant: {rs.name} {phi} under {w}")


def all_trees(rs):
    """Every tree each generator produces for this root system."""
    out = [expansion.expand_min(rs), expansion.expand_min(rs, recursive=False), expansion.expand_ntm(rs)]
    if len(rs.factors) == 1:
        out.append(expansion.expand_ntm_bourbaki(rs))
    for a in range(rs.rank):
        if is_nice(rs, a):
            out.append(expansion.theorem_d(rs, a))
        if classify_root(rs, a) == HEISENBERG:
            out.append(expansion.heisenberg_decomposition(rs, a))
        out += [expansion.fourier_coeff_min(rs, a, cls) for cls in (nilorbit.ZERO, nilorbit.MINIMAL)]
        lvl = level_two_roots(rs, a)
        singles = lvl[:3]
        pairs = [(p, q) for p, q in combinations(lvl, 2) if rs.pairing(p, q) == 0][:3]
        for r in singles:
            phi = Covector(rs, {r: 1})
            out += [expansion.fourier_coeff_min(rs, a, phi), expansion.fourier_coeff_ntm(rs, a, phi)]
        for p, q in pairs:
            out.append(expansion.fourier_coeff_ntm(rs, a, Covector(rs, {p: 1, q: 1})))
    return out


AUDIT_TYPES = [f"{s}{n}" for s, n in SIMPLE_TYPES] + ["A1xA1", "A2xD4", "A3xA3", "D4xD4", "A1xE7"]


def criterion_10(c: Check):
    for t in AUDIT_TYPES:
        rs = build(t)
        for tree in all_trees(rs):
            rep = expansion.audit_supports(tree)
            c(rep.ok, f"{t} {tree.theorem} {dict(tree.meta)}: {rep.failures}")


CRITERIA = {n: globals()[f"criterion_{n}"] for n in range(1, 11)}


def evaluate(n: int) -> Check:
    c = Check()
    try:
        CRITERIA[n](c)
    except Exception as e:  # a crash is a failed criterion, reported with the rest
        c(False, f"crashed: {type(e).__name__}: {e}")
    ACCEPTANCE[n] = (TITLES[n], not c.failures)
    return c


@pytest.mark.parametrize("n", range(1, 11), ids=[f"criterion_{n}" for n in range(1, 11)])
def test_criterion(n):
    c = evaluate(n)
    assert not c.failures, "\n".join(c.failures[:20])


if __name__ == "__main__":
    failed = 0
    for n in range(1, 11):
        t0 = time.time()
        c = evaluate(n)
        failed += bool(c.failures)
        print(f"criterion {n:2d}: {'PASS' if not c.failures else 'FAIL'}  {TITLES[n]}  ({time.time() - t0:.1f}s)")
        for f in c.failures[:5]:
            print(f"    {f}")
    sys.exit(1 if failed else 0)

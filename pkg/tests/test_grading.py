from fractions import Fraction

import pytest

from lieexp.errors import NotHeisenberg, NotNice
from lieexp.grading_parabolic import (
    ABELIAN,
    HEISENBERG,
    b_set,
    bruhat_cells,
    classify_by_bracket,
    classify_by_highest_root,
    coset_descriptor,
    delta,
    derived_roots,
    gamma_alpha,
    gamma_prev,
    grade,
    is_nice,
    is_quasi_abelian_enumeration,
    lambda_alpha,
    level_two_roots,
    phi_set,
    psi_set,
    psi_union_check,
    second_chevalley_weights,
    u_roots,
)
from lieexp.root_system import build
from lieexp.weyl import orbit
from worked_examples import quasi_abelian_table

_expected = quasi_abelian_table


TYPES = [("A", n) for n in range(1, 9)] + [("D", n) for n in range(4, 9)] + [("E", n) for n in (6, 7, 8)]


@pytest.mark.parametrize("series,n", TYPES)
def test_classification_table(series, n):
    rs = build(f"{series}{n}")
    ab, he = _expected(series, n)
    for i in range(n):
        a, b = classify_by_bracket(rs, i), classify_by_highest_root(rs, i)
        assert a == b
        want = ABELIAN if i + 1 in ab else HEISENBERG if i + 1 in he else a
        assert a == want
        if i + 1 not in ab | he:
            assert a not in (ABELIAN, HEISENBERG)


@pytest.mark.parametrize("name,alpha,dim", [("D5", 1, 13), ("D8", 1, 25), ("E6", 1, 21), ("E7", 0, 33), ("E8", 7, 57)])
def test_heisenberg_dimensions(name, alpha, dim):
    rs = build(name)
    u = u_roots(rs, alpha)
    assert len(u) == dim
    assert derived_roots(rs, u) == {rs.highest_roots[0]}
    assert len(b_set(rs, alpha)) == (dim - 1) // 2


def test_abelian_derived_algebra_is_zero():
    rs = build("E7")
    assert derived_roots(rs, u_roots(rs, 6)) == set()
    assert len(u_roots(rs, 6)) == 27


def test_e8_phi_psi():
    rs = build("E8")
    phi = phi_set(rs, 7)
    assert len(phi) == 27
    assert second_chevalley_weights(rs, 7).dim == 27
    top = rs.highest_roots[0]
    extra = tuple(t - a for t, a in zip(top, rs.simple_root(7)))
    assert set(psi_set(rs, 7)) == set(phi) | {extra}
    assert psi_union_check(rs, 7)


def test_delta():
    rs = build("E8")
    top = rs.highest_roots[0]
    assert delta(rs, 7) == tuple(t - a - b for t, a, b in zip(top, rs.simple_root(7), rs.simple_root(6)))
    d5 = build("D5")
    assert delta(d5, 0) == d5.highest_roots[0]
    with pytest.raises(NotNice):
        delta(d5, 1)


def test_nice():
    assert [is_nice(build("D5"), i) for i in range(5)] == [True, False, False, True, True]
    assert [is_nice(build("E6"), i) for i in range(6)] == [True, True, False, False, False, True]


def test_b_set_rejects_abelian():
    with pytest.raises(NotHeisenberg):
        b_set(build("D5"), 0)


def test_grade():
    rs = build("D5")
    g = grade(rs, rs.S(0))
    assert g.dim(0) == 5 + 2 * 12
    assert g.dim(2) == len(level_two_roots(rs, 0)) == 8
    assert g.dim(4) == 0


def test_enumeration_report():
    rs = build("D5")
    rep = is_quasi_abelian_enumeration(rs, [0, 1, 2, 3, 4])
    assert rep.ok and rep.abelian and rep.heisenberg_steps == []
    rep = is_quasi_abelian_enumeration(rs, [0, 2, 3, 4, 1])
    assert rep.ok and not rep.abelian and rep.heisenberg_steps == [5]
    # the branch node of E8 last is neither abelian nor Heisenberg
    rep = is_quasi_abelian_enumeration(build("E8"), [0, 1, 2, 4, 5, 6, 7, 3])
    assert not rep.ok


@pytest.mark.parametrize("name", ["D5", "E6", "E7"])
def test_bruhat_cells_count_orbit(name):
    rs = build(name)
    for i in range(rs.rank):
        levi = rs.levi(j for j in range(rs.rank) if j != i)
        cells, _ = bruhat_cells(rs, levi, rs.simple_root(i))
        assert len(cells) == len(orbit(rs, [rs.simple_root(i)], levi))
        assert cells[0].word.letters == ()


def test_d4_gamma_shapes():
    rs = build("D4")
    order = [0, 2, 3, 1]
    assert [gamma_prev(rs, order, i).shape() for i in range(1, 5)] == ["{1}", "{1}", "{1}", "(P^1)^3"]


def test_projective_space_factor():
    rs = build("A4")
    d = gamma_alpha(rs, 0)
    assert d.shape() == "P^3"
    assert sorted(len(c.word) for c in d.cells) == [0, 1, 2, 3]


def test_lambda_lists_fixed_points():
    rs = build("D5")
    d = lambda_alpha(rs, 0)
    assert d.multiplicity == Fraction(1, 2)
    assert not d.cells and d.fixed_points
    assert d.to_json(rs)["multiplicity"] == "1/2"


def test_descriptor_rejects_bad_lines():
    from lieexp.errors import LieExpError

    rs = build("D4")
    with pytest.raises(LieExpError):
        coset_descriptor(rs, "x", rs.full, [], "X")

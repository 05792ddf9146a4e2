import pytest
from hypothesis import given, strategies as st

from lieexp.chevalley import Covector
from lieexp.errors import NotDominating, NotOrthogonalSupport, NotWeightMinusTwo
from lieexp.root_system import build, is_positive
from lieexp.weyl import WeylWord, apply, word
from lieexp.whittaker import dominates, inttrans_domain, is_neutral, make_pair, n_pair, neutral_pair, v_gamma


def _roots(rs, texts):
    return {rs.parse_root(t) for t in texts}


def test_v_gamma_d5_s2s1():
    rs = build("D5")
    assert set(v_gamma(rs, word(rs, 2, 1), rs.S(0))) == _roots(rs, ["-a2", "-a1-a2"])


def test_v_gamma_identity_is_empty():
    rs = build("E6")
    assert v_gamma(rs, WeylWord(rs), rs.S(0)) == ()


@given(st.lists(st.integers(0, 4), max_size=10), st.integers(0, 4))
def test_v_gamma_forward_image(letters, alpha):
    # the same set read forwards: images w(d) that turn negative, for d above level 1
    rs = build("D5")
    w = WeylWord(rs, tuple(letters))
    S = rs.S(alpha)
    forward = {apply(w, d) for d in rs.roots if S(d) > 1 and not is_positive(apply(w, d))}
    assert set(v_gamma(rs, w, S)) == forward


def test_standard_pair():
    rs = build("D4")
    phi = Covector(rs, {rs.simple_root(0): 1, rs.simple_root(2): 1})
    p = make_pair(rs, rs.S_all(), phi)
    assert p.standard
    assert n_pair(p).dim == len(rs.positive_roots)


def test_make_pair_rejects_wrong_level():
    rs = build("D4")
    with pytest.raises(NotWeightMinusTwo):
        make_pair(rs, rs.S(1), Covector(rs, {rs.simple_root(0): 1}))


def test_neutral():
    rs = build("D5")
    phi = Covector(rs, {rs.simple_root(0): 1, rs.highest_roots[0]: 1})
    p = neutral_pair(rs, phi)
    assert is_neutral(rs, p.S, phi)
    assert not is_neutral(rs, rs.S_all(), phi)
    with pytest.raises(NotOrthogonalSupport):
        neutral_pair(rs, Covector(rs))


def test_neutral_dominates_itself_and_standard():
    rs = build("D4")
    phi = Covector(rs, {rs.simple_root(0): 1, rs.simple_root(2): 1})
    H = neutral_pair(rs, phi).S
    assert dominates(rs, H, phi, H)
    assert dominates(rs, H, phi, rs.S_all())


def test_inttrans_domain():
    rs = build("D4")
    phi = Covector(rs, {rs.simple_root(0): 1})
    H = neutral_pair(rs, phi).S
    dom = inttrans_domain(rs, H, rs.S_all(), phi)
    assert all(H(r) > 1 and rs.S_all()(r) < 1 for r in dom.roots)


def test_not_dominating():
    rs = build("D4")
    phi = Covector(rs, {rs.simple_root(0): 1})
    H = neutral_pair(rs, phi).S
    assert dominates(rs, H, phi, rs.S(0))
    assert not dominates(rs, rs.S(0), phi, H)
    with pytest.raises(NotDominating):
        inttrans_domain(rs, rs.S(0), H, phi)

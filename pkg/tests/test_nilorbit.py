from fractions import Fraction
from itertools import combinations

import pytest

from lieexp.chevalley import Covector, build_constants
from lieexp.errors import LieExpError, NotInLevel2, NotMinimal, NotNtm
from lieexp.nilorbit import (
    LARGER,
    MINIMAL,
    NTM,
    ZERO,
    classify,
    combine,
    d_orbit_dim,
    dn_catalog,
    format_partition,
    hasse_dot,
    hasse_edges,
    hasse_json,
    normal_form_min,
    normal_form_ntm,
    rank2_type,
)
from lieexp.root_system import build
from worked_examples import D5_EDGES, D5_NODES

def _phi(rs, text):
    return Covector.parse(rs, text)


def test_matches_matrix_model(oracles):
    for key, want in oracles["so_orbits"].items():
        name, sup = key.split("/")
        rs = build(name)
        lab = classify(rs, _phi(rs, ",".join(s + ":1" for s in sup.split(","))))
        assert lab.dim == want["dim"], key
        assert lab.partition.split("_")[0] == format_partition(want["partition"]), key


def test_d5_next_to_minimal_pair():
    rs = build("D5")
    a = classify(rs, _phi(rs, "a4:1,a5:1"))
    b = classify(rs, _phi(rs, "a1:1,a3:1"))
    assert (a.cls, a.dim, a.partition) == (NTM, 16, "31^7")
    assert (b.cls, b.dim, b.partition) == (NTM, 20, "2^41^2")
    # a4 and a5 share no level-2 node, so only the dimension count applies
    assert a.method == "dimension"
    c = classify(rs, _phi(rs, "a1:1,a1+2a2+2a3+a4+a5:1"))
    assert (c.cls, c.method) == (NTM, "dimension+normal form")


def test_d4_very_even_labels():
    rs = build("D4")
    p13 = classify(rs, _phi(rs, "a1:1,a3:1")).partition
    p14 = classify(rs, _phi(rs, "a1:1,a4:1")).partition
    assert {p13, p14} == {"2^4_I", "2^4_II"}


def test_zero_and_larger():
    rs = build("D5")
    assert classify(rs, Covector(rs)).cls == ZERO
    assert classify(rs, _phi(rs, "a1:1,a2:1")).cls == LARGER
    with pytest.raises(LieExpError):
        classify(rs, Covector(rs, {(-1, 0, 0, 0, 0): 1}))


def test_products():
    rs = build("A1xA1")
    lab = classify(rs, _phi(rs, "a1:1,a2:1"))
    assert lab.cls == NTM and lab.bala_carter == "A1xA1"
    assert combine([MINIMAL, ZERO]) == MINIMAL
    assert combine([MINIMAL, NTM]) == LARGER


@pytest.mark.parametrize("name", ["A3", "D4"])
def test_rank2_type_matches_dimension(name):
    rs = build(name)
    for e, d in combinations(rs.positive_roots, 2):
        assert rank2_type(rs, e, d) == classify(rs, Covector(rs, {e: 1, d: 1}), check=False).cls


def test_rank2_rejects_proportional():
    rs = build("A2")
    with pytest.raises(LieExpError):
        rank2_type(rs, rs.simple_root(0), rs.simple_root(0))


def test_normal_form_min_replays():
    rs = build("E6")
    alg = build_constants(rs)
    lvl = [r for r in rs.positive_roots if r[0] == 1]
    phi = Covector(rs, {lvl[3]: 2})
    nf = normal_form_min(rs, phi, 0)
    assert nf.result == Covector(rs, {rs.simple_root(0): nf.result[rs.simple_root(0)]})
    assert nf.transform.apply(alg, phi) == nf.result


def test_normal_form_ntm_reaches_delta():
    rs = build("D5")
    alg = build_constants(rs)
    phi = _phi(rs, "a1+a2:1,a1+a2+2a3+a4+a5:-1/2")
    assert rs.pairing(*phi) == 0
    nf = normal_form_ntm(rs, phi, 0)
    assert set(nf.result) == {rs.simple_root(0), rs.highest_roots[0]}
    assert nf.beta == rs.highest_roots[0]
    assert nf.transform.apply(alg, phi) == nf.result


def test_normal_form_errors():
    rs = build("D5")
    with pytest.raises(NotInLevel2):
        normal_form_min(rs, _phi(rs, "a2:1"), 0)
    with pytest.raises(NotMinimal):
        normal_form_min(rs, _phi(rs, "a1:1,a1+2a2+2a3+a4+a5:1"), 0)
    with pytest.raises(NotNtm):
        normal_form_ntm(rs, _phi(rs, "a1:1"), 0)


def test_d5_hasse_edges():
    cat = dn_catalog(5)
    assert sorted(o.name for o in cat.orbits) == sorted(D5_NODES)
    index = {name: k + 1 for k, name in enumerate(D5_NODES)}
    edges = {(index[x.name], index[y.name]) for x, y in hasse_edges(cat)}
    assert edges == D5_EDGES


def test_catalog_dimensions_agree_with_algebra():
    cat = dn_catalog(5)
    by = {o.name: o.dim for o in cat.orbits}
    assert by["2^21^6"] == 14 and by["31^7"] == 16 and by["2^41^2"] == 20 and by["91"] == 40
    assert d_orbit_dim(5, (9, 1)) == 40


def test_very_even_in_d4_catalog():
    names = [o.name for o in dn_catalog(4).orbits]
    assert "2^4_I" in names and "2^4_II" in names


def test_hasse_output_formats():
    cat = dn_catalog(5)
    dot = hasse_dot(cat)
    assert dot.startswith("digraph") and dot.count("->") == 19
    data = hasse_json(cat)
    assert len(data["nodes"]) == 16 and len(data["edges"]) == 19

import pytest

from lieexp import verify
from lieexp.errors import LieExpError


def test_expand_types():
    assert verify.expand_types("A1..A3,E6") == ["A1", "A2", "A3", "E6"]
    assert verify.expand_types("D4..D5") == ["D4", "D5"]
    with pytest.raises(LieExpError):
        verify.expand_types("A1..D4")


@pytest.mark.parametrize("suite", ["table1", "minuscule", "phi-transitivity", "psi-union", "rank2", "wla", "fixtures"])
def test_suite_green(suite):
    cases = verify.run(suite)
    assert cases
    assert [c.id for c in cases if not c.ok] == []
    assert [c.id for c in cases] == sorted(c.id for c in cases)


def test_suite_sizes():
    assert len(verify.run("table1")) == sum(range(1, 9)) + sum(range(4, 9)) + 6 + 7 + 8
    assert len(verify.run("fixtures")) == 27


def test_unknown_suite():
    with pytest.raises(LieExpError):
        verify.run("nope")


def test_fixture_crash_is_a_failure(monkeypatch):
    def boom(out):
        raise RuntimeError("broken")

    boom.__name__ = "_fx_e8"
    monkeypatch.setattr(verify, "_fx_e8", boom)
    cases = verify.suite_fixtures()
    assert any(c.id == "fixtures/e8" and not c.ok for c in cases)

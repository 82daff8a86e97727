import pytest

from cslrank.demos import DEMOS, run_demo, spec_from_layout, a4_lattice, A4_SOURCE


@pytest.mark.parametrize("name", list(DEMOS))
def test_demo_succeeds(name):
    res = run_demo(name)
    assert res.ok, res.report()


@pytest.mark.parametrize("name", list(DEMOS))
def test_demo_is_deterministic(name):
    assert run_demo(name).report() == run_demo(name).report()


def test_unknown_demo():
    with pytest.raises(KeyError):
        run_demo("nope")


def test_layout_needs_every_letter():
    L = a4_lattice()
    with pytest.raises(ValueError):
        spec_from_layout(L, L, A4_SOURCE, ["a 0 0 0", "0 0 0 0", "0 0 0 0", "0 0 0 0"])


def test_ainf_reports_components():
    res = run_demo("ainf-diag")
    assert "chain components: 1" in res.report()


def test_nest_shift_reports_non_surjectivity():
    assert "not onto" in run_demo("nest-shift").report()

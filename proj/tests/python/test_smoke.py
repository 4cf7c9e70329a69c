import math

import pytest

import unimap


def square():
    return unimap.Map(0, 1, 0, 0, "t^2")


def test_parse_and_differentiate():
    e = unimap.parse("t^3")
    assert e(-2.0) == -8.0
    assert e.dual(1.0) == [1.0, 3.0]
    assert unimap.parse(str(e))(1.5) == e(1.5)
    with pytest.raises(unimap.ParseError):
        unimap.parse("sin(t")
    with pytest.raises(unimap.EvalError):
        unimap.parse("1/t")(0.0)
    assert issubclass(unimap.ParseError, unimap.UnimapError)


def test_validate_c1():
    assert unimap.validate_c1("t^2", -1, 1, 101)["pass"]
    report = unimap.validate_c1("abs(t)", -1, 1, 101)
    assert not report["pass"]
    assert report["non_differentiable"] == [0.0]


def test_map_apply_inverse():
    m = square()
    assert m.apply([1, 2]) == [5, 2]
    assert m.inverse([5, 2]) == [1, 2]
    assert m.jacobian([0, 1]) == [[1, 2], [0, 1]]
    assert m.spectrum([3, 4]) == [1, 1]
    shifted = unimap.Map(0, 1, 0, 0, "t^2+1")
    assert shifted.c == 1.0
    assert unimap.load_map(m.to_json()).apply([1, 2]) == [5, 2]


def test_unipotency():
    report = unimap.verify_unipotent(unimap.Map(0, 1, 0, 0, "t^3"), [-5, 5, -5, 5], 50)
    assert report["verdict"] == "pass"
    assert report["max_deviation"] <= 1e-9


def test_normal_form():
    nf = unimap.reduce(unimap.Map(3, 4, 0, 0, "sin(t)"))
    assert abs(nf.alpha - 0.6) < 1e-12
    assert abs(nf.beta - 0.8) < 1e-12
    assert nf.psi(0.3) == pytest.approx(5 * math.sin(1.5))
    assert nf.to_normal([1, 0]) == pytest.approx([0.8, 0.6])
    cls = unimap.classify(unimap.Map(0, 1, -1, 0, "t^2"))
    assert cls["classification"] == "NonlinearWithFixedPoints"


def test_dynamics():
    m = square()
    rows = unimap.iterate(m, [0, 1], 3)
    assert rows[-1] == [3, 3, 1]
    assert unimap.iterate_closed_form(unimap.Map(0, 1, 1, 1, "t^2"), [0, 0], 2) == [3, 2]
    fs = unimap.fixed_set(m)
    assert fs["kind"] == "Lines"
    assert len(fs["lines"]) == 1
    assert unimap.periodic_search(unimap.Map(0, 1, 0, 0, "t^3"), grid=21, p_max=16)["candidates"] == []
    disk = unimap.disk_test(m, [0, 3], 0.5)
    assert disk["premise"] == "holds"
    assert disk["all_disjoint"]


def test_conjugacy():
    h = unimap.Conjugacy(unimap.Map(0, 1, 0, 1, "t^2"))
    assert h.branch == "D_nonzero"
    assert h.apply([0, 2]) == [2, -1]
    assert h.inverse([2, -1]) == [0, 2]
    assert h.verify()["conjugacy_sup"] <= 1e-8
    with pytest.raises(unimap.UnimapError):
        unimap.Conjugacy(square())


def test_bifurcation():
    pm = unimap.family_member(square(), 0.5)
    assert pm.lam == 0.5
    assert pm.geometric_sum_iterate([1, 1], 2) == [1.0, 0.25]
    assert pm.inverse(pm.apply([1, 1])) == pytest.approx([1, 1])
    assert pm.lemma_bound_check(1.0)["holds"]
    rows = unimap.stability_sweep(unimap.Map(0, 1, 0, 0, "t^3"), [0.1, -0.1, 0.0], [[1, 1], [-3, 2]])
    assert [r["verdict"] for r in rows] == ["GlobalRepellor", "Unipotent", "GlobalAttractor"]
    with pytest.raises(unimap.UnimapError):
        unimap.family_member(unimap.Map(0, 0, 1, 0, "t"), 0.1)

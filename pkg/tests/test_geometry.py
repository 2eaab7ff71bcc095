from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cqlearn import LinearConcept, RationalVector, affine_concept, evaluate, label_of, lift, margin_report
from cqlearn.errors import DegeneratePool, DimensionMismatch
from cqlearn.geometry import integer_points, primitive
from cqlearn.instances import gen_lb_margin

rationals = st.fractions(min_value=-20, max_value=20, max_denominator=12)
positive = st.fractions(min_value=Fraction(1, 12), max_value=50, max_denominator=12)


def vectors(d):
    return st.lists(rationals, min_size=d, max_size=d).map(RationalVector)


def test_eval_examples():
    assert evaluate(LinearConcept((1, -1)), (2, 2)) == 0
    assert evaluate(LinearConcept((Fraction(41, 40), Fraction(-1, 20), Fraction(-1, 2))), (1, 0, 1)) == Fraction(21, 40)
    assert evaluate(LinearConcept((0, 0)), (7, -3)) == 0


def test_eval_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        evaluate(LinearConcept((1, 2)), (1, 2, 3))
    with pytest.raises(DimensionMismatch):
        label_of(LinearConcept((1,)), (1, 2))


def test_label_examples():
    assert label_of(LinearConcept((1, -1)), (2, 2)) == 1
    assert label_of(LinearConcept((1, 0)), (-3, 5)) == -1
    assert label_of(LinearConcept((2, 2)), (1, 1)) == label_of(LinearConcept((1, 1)), (1, 1)) == 1


def test_vectors_are_exact_and_reject_floats():
    v = RationalVector(["1/3", 2, Fraction(1, 6)])
    assert v + v == RationalVector([Fraction(2, 3), 4, Fraction(1, 3)])
    assert v.dot(v) == Fraction(1, 9) + 4 + Fraction(1, 36)
    with pytest.raises(TypeError):
        RationalVector([0.5])
    with pytest.raises(TypeError):
        RationalVector([True])
    with pytest.raises(ValueError):
        RationalVector([])


def test_lift_examples():
    assert lift((5,)) == (5, 1)
    assert lift((1, 2)) == (1, 2, 1)
    thr = affine_concept((1,), -2)
    assert thr.w == (1, -2)
    for x in range(-5, 6):
        assert thr(lift((x,))) == (1 if x - 2 >= 0 else -1)


def test_margin_report_examples():
    for d in (1, 2, 3, 5):
        basis = [RationalVector.basis(d, i) for i in range(d)]
        w = LinearConcept([(-1) ** i for i in range(d)])
        rep = margin_report(w, basis)
        assert rep.eta == 1 and rep.gamma_over_rho_sq == Fraction(1, d)
    rep = margin_report(LinearConcept((1, 0)), [(1, 0)])
    assert rep.eta == 1 and rep.gamma_over_rho_sq == 1
    wit = gen_lb_margin(5)
    for c in wit.concepts:
        assert margin_report(c, wit.pool).gamma_over_rho_sq >= Fraction(1, 64)


def test_margin_report_degenerate():
    with pytest.raises(DegeneratePool):
        margin_report(LinearConcept((0, 0)), [(1, 2)])
    with pytest.raises(ValueError):
        margin_report(LinearConcept((1, 0)), [])


@settings(max_examples=1000)
@given(vectors(3), vectors(3), positive)
def test_label_scale_invariance(w, x, lam):
    c = LinearConcept(w)
    assert label_of(c.scaled(lam), x) == label_of(c, x)


@given(st.integers(1, 4).flatmap(lambda d: st.tuples(vectors(d), st.lists(vectors(d), min_size=1, max_size=6))),
       positive)
def test_margin_properties(data, lam):
    w, pool = data
    c = LinearConcept(w)
    if all(evaluate(c, x) == 0 for x in pool):
        return
    rep = margin_report(c, pool)
    assert 0 <= rep.eta <= 1
    assert margin_report(c.scaled(lam), pool).eta == rep.eta
    assert rep.gamma_over_rho_sq <= rep.eta ** 2


@given(st.integers(1, 3).flatmap(lambda d: st.tuples(vectors(d), rationals, vectors(d))))
def test_lift_preserves_labels(data):
    a, b, x = data
    direct = 1 if RationalVector(a).dot(x) + b >= 0 else -1
    assert affine_concept(a, b)(lift(x)) == direct


@given(st.lists(st.lists(rationals, min_size=2, max_size=2), min_size=1, max_size=5))
def test_integer_points_scale_uniformly(pts):
    pts = [RationalVector(p) for p in pts]
    ints = integer_points(pts)
    ratio = {Fraction(i) / c for p, q in zip(pts, ints) for c, i in zip(p, q) if c != 0}
    assert len(ratio) <= 1 and all(r > 0 for r in ratio)


def test_primitive():
    assert primitive((4, -6, 0)) == (2, -3, 0)
    assert primitive((0, 0)) == (0, 0)

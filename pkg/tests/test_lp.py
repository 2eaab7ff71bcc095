import random
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqlearn.errors import DimensionMismatch
from cqlearn.lp import ConstraintSystem, RowSystem, feasible
from oracles import brute_feasible


def system(dim, nonstrict=(), strict=()):
    return ConstraintSystem(dim, tuple(nonstrict), tuple(strict))


def check_certificate(sys_, res):
    """Infeasibility certificates combine the forms to zero with strict weight > 0."""
    total = [Fraction(0)] * sys_.dim
    strict_weight = Fraction(0)
    for (kind, i), y in res.certificate.items():
        assert y > 0
        form = sys_.nonstrict[i] if kind == "nonstrict" else sys_.strict[i]
        total = [t + y * c for t, c in zip(total, form)]
        if kind == "strict":
            strict_weight += y
    assert all(t == 0 for t in total) and strict_weight > 0


def test_vacuous_system():
    res = feasible(system(3))
    assert res.feasible and res.witness == (0, 0, 0)


def test_contradictory_pair():
    s = system(1, strict=[(1,), (-1,)])
    res = feasible(s)
    assert not res
    check_certificate(s, res)


def test_sign_addition():
    s = system(2, nonstrict=[(1, 0), (0, 1)], strict=[(-1, -1)])
    res = feasible(s)
    assert not res.feasible
    check_certificate(s, res)
    s2 = system(2, nonstrict=[(1, -1)], strict=[(0, 1)])
    res2 = feasible(s2)
    assert res2.feasible and s2.is_satisfied_by(res2.witness)
    assert s2.is_satisfied_by((1, 1))


def test_nonstrict_only_is_feasible_at_zero():
    assert feasible(system(2, nonstrict=[(1, 0), (-1, 0), (3, 4)])).witness == (0, 0)


def test_validation():
    with pytest.raises(ValueError):
        ConstraintSystem(0)
    with pytest.raises(DimensionMismatch):
        system(2, nonstrict=[(1, 2, 3)])


def test_rational_forms_and_certificate_scaling():
    s = system(2, nonstrict=[(Fraction(1, 3), 0)], strict=[(Fraction(-2, 7), 0)])
    res = feasible(s)
    assert not res
    check_certificate(s, res)


def random_system(rng, d, m, coef=5):
    rows = [tuple(rng.randint(-coef, coef) for _ in range(d)) for _ in range(m)]
    kinds = [rng.random() < 0.5 for _ in range(m)]
    return ([r for r, k in zip(rows, kinds) if not k], [r for r, k in zip(rows, kinds) if k])


def test_oracle_agreement_sample():
    rng = random.Random(2024)
    for _ in range(1500):
        d = rng.randint(1, 3)
        ns, st_ = random_system(rng, d, rng.randint(0, 6))
        s = system(d, ns, st_)
        res = feasible(s)
        assert res.feasible == brute_feasible(d, ns, st_), (d, ns, st_)
        if res:
            assert s.is_satisfied_by(res.witness)
        else:
            check_certificate(s, res)


def test_constraint_generation_matches_full_solve():
    # many rows trigger the working-set path
    rng = random.Random(5)
    for _ in range(30):
        d = 3
        rows = [tuple(rng.randint(-9, 9) for _ in range(d)) for _ in range(200)]
        w = (rng.randint(-5, 5), rng.randint(-5, 5), rng.randint(-5, 5))
        strict = []
        kept = []
        for r in rows:
            v = sum(a * b for a, b in zip(r, w))
            if v != 0:
                kept.append(r if v > 0 else tuple(-c for c in r))
                strict.append(rng.random() < 0.5)
        rs = RowSystem(kept, strict, d)
        assert len(rs.working) < len(kept)
        ok, wit = rs.solve()
        assert ok and rs.satisfied_by(wit)
        bad = kept + [tuple(-c for c in kept[0])]
        ok2, cert = RowSystem(bad, strict + [True], d).solve()
        assert not ok2 and cert


coef = st.integers(-4, 4)


@st.composite
def systems(draw):
    d = draw(st.integers(1, 3))
    form = st.lists(coef, min_size=d, max_size=d)
    return d, draw(st.lists(form, max_size=4)), draw(st.lists(form, max_size=4))


@given(systems(), st.lists(coef, min_size=3, max_size=3), st.booleans())
def test_monotonicity(sys_, extra, strict):
    d, ns, s = sys_
    extra = extra[:d]
    base = feasible(system(d, ns, s)).feasible
    more = feasible(system(d, ns + ([] if strict else [extra]), s + ([extra] if strict else []))).feasible
    assert not (more and not base)


@given(systems(), st.fractions(min_value=Fraction(1, 9), max_value=9, max_denominator=9), st.data())
def test_scaling_invariance(sys_, lam, data):
    d, ns, s = sys_
    rows = ns + s
    if not rows:
        return
    k = data.draw(st.integers(0, len(rows) - 1))
    scaled = [[lam * c for c in r] if i == k else r for i, r in enumerate(rows)]
    assert feasible(system(d, ns, s)).feasible == feasible(system(d, scaled[:len(ns)], scaled[len(ns):])).feasible

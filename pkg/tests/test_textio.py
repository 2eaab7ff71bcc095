from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from cqlearn import (Instance, LinearConcept, ParseError, WitnessInstance, format_instance, format_witness,
                     gen_grid, gen_lb_margin, gen_lb_r3, gen_margin, gen_plane, parse_instance_file)


def test_minimal_file():
    inst = parse_instance_file("2 1\n1/2 3\nw: 1 -1\n")
    assert isinstance(inst, Instance)
    assert inst.pool == ((Fraction(1, 2), 3),)
    assert inst.hidden == LinearConcept((1, -1))


def test_comments_and_blank_lines():
    inst = parse_instance_file("# a comment\n\n1 2\n  4 \n# mid\n-7/3\n")
    assert inst.pool == ((4,), (Fraction(-7, 3),)) and inst.hidden is None


@pytest.mark.parametrize("make", [
    lambda: gen_grid(6, 3, 25, 1),
    lambda: gen_margin(2, 12, Fraction(1, 3), 2),
    lambda: gen_plane(10, 3),
])
def test_instance_round_trip(make):
    inst = make()
    text = format_instance(inst)
    back = parse_instance_file(text)
    assert back == inst
    assert format_instance(back) == text


@pytest.mark.parametrize("gen", [gen_lb_r3, gen_lb_margin])
def test_witness_round_trip(gen):
    w = gen(6)
    text = format_witness(w)
    back = parse_instance_file(text)
    assert isinstance(back, WitnessInstance) and back == w
    assert format_witness(back) == text


def test_labels_line_round_trip():
    inst = Instance(((1, 2), (-1, 0)), LinearConcept((1, 1)), labels=(1, -1))
    assert parse_instance_file(format_instance(inst)) == inst


@pytest.mark.parametrize("text,line,msg", [
    ("", 1, "header"),
    ("# only comments\n", 1, "header"),
    ("2\n", 1, "header"),
    ("1 1\n1/0\n", 2, "malformed rational"),
    ("1 1\nabc\n", 2, "malformed rational"),
    ("2 2\n1 2\n3\n", 3, "coordinates"),
    ("2 2\n1 2\n", 3, "expected 2 points"),
    ("2 1\n1 2\nw: 1\n", 3, "weights"),
    ("1 2\n1\n2\nw: 1\nw: 2\n", 5, "'w:' lines"),
    ("1 3\n1\n2\n3\nw: 1\nw: 1\n", 6, "'w:' lines"),
    ("1 1\n1\nz: 3\n", 3, "unexpected"),
    ("1 2\n1\n2\ny: +1\n", 4, "labels"),
])
def test_parse_errors(text, line, msg):
    with pytest.raises(ParseError) as e:
        parse_instance_file(text)
    assert e.value.line == line
    assert msg in e.value.message


rat = st.fractions(min_value=-100, max_value=100, max_denominator=1000)


@given(st.integers(1, 4).flatmap(lambda d: st.lists(st.lists(rat, min_size=d, max_size=d), min_size=1, max_size=6)),
       st.booleans())
def test_round_trip_property(points, with_w):
    d = len(points[0])
    hidden = LinearConcept(points[0]) if with_w else None
    inst = Instance(tuple(tuple(p) for p in points), hidden)
    assert parse_instance_file(format_instance(inst)) == inst

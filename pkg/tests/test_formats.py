import pytest
from hypothesis import given

from tsbridge.core import TAU, Action, InvalidSystemError, make_ks, make_lts
from tsbridge.formats import FormatError, emit_aut, emit_ks, format_of, parse_aut, parse_ks
from tsbridge.oracle import random_ks, random_lts, random_reversible_ks, random_reversible_lts

from conftest import specs


def test_single_loop_aut():
    t = parse_aut('des (0,1,1)\n(0,"a",0)\n')
    assert t == make_lts(1, [(0, "a", 0)])


def test_example_lts_serialises_to_two_lines():
    left = make_lts(1, [(0, "bottom", 0), (0, "{a}", 0)])
    assert emit_aut(left) == 'des (0,2,1)\n(0,"bottom",0)\n(0,"{a}",0)\n'


def test_reserved_labels_parse_as_tokens():
    t = parse_aut('des (0,1,1)\n(0,"tau",0)\n')
    ((_, a, _),) = t.transitions
    assert a == TAU
    t = parse_aut('des (0,2,1)\n(0,"{p,q}",0)\n(0,"bottom",0)\n')
    assert Action.labelset({"p", "q"}) in t.alphabet


def test_aut_errors_carry_line_numbers():
    with pytest.raises(FormatError) as info:
        parse_aut('des (0,1,1)\n(0,a,0)\n')
    assert info.value.line == 2
    with pytest.raises(FormatError):
        parse_aut("des 0 1 1\n")
    with pytest.raises(FormatError):
        parse_aut('des (0,2,1)\n(0,"a",0)\n')
    with pytest.raises(FormatError):
        parse_aut('des (0,1,1)\n(0,"a",3)\n')


def test_aut_totality_is_validated():
    with pytest.raises(InvalidSystemError):
        parse_aut('des (0,1,2)\n(0,"a",1)\n')
    assert parse_aut('des (0,1,2)\n(0,"a",1)\n', validate=False).n_states == 2


def test_single_loop_ks_is_three_lines():
    text = emit_ks(make_ks([{"p"}], [(0, 0)]))
    assert text == "ks 1 1\nstate 0 {p}\nedge 0 0\n"
    assert parse_ks(text) == make_ks([{"p"}], [(0, 0)])


def test_ks_errors():
    with pytest.raises(FormatError) as info:
        parse_ks("ks 2 1\nstate 0 {p}\nedge 0 0\n")
    assert "missing state line for 1" in str(info.value)
    with pytest.raises(FormatError):
        parse_ks("ks 1 1\nstate 0 {p}\nstate 0 {p}\nedge 0 0\n")
    with pytest.raises(FormatError):
        parse_ks("ks 1 1\nstate 3 {p}\nedge 0 0\n")
    with pytest.raises(InvalidSystemError):
        parse_ks("ks 2 1\nstate 0 {}\nstate 1 {}\nedge 0 1\n")


def test_format_inference():
    assert format_of("x.aut") == "aut" and format_of("y.KS") == "ks"
    with pytest.raises(FormatError):
        format_of("z.txt")


@given(specs(8))
def test_round_trips_are_byte_identical(spec):
    for k in (random_ks(spec), random_reversible_ks(spec)):
        text = emit_ks(k)
        assert emit_ks(parse_ks(text)) == text
        assert parse_ks(text).labels == k.labels and parse_ks(text).edges == k.edges
    for t in (random_lts(spec), random_reversible_lts(spec)):
        text = emit_aut(t)
        assert emit_aut(parse_aut(text)) == text
        assert parse_aut(text).transitions == t.transitions

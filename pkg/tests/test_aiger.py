import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from safetysynth.aiger import AigerError, load_spec, parse_aag, partition_inputs, to_safety_spec, write_aag
from safetysynth.bench import AigBuilder, gen_cnt, random_game
from safetysynth.verify import explicit_attractor

import random


def test_minimal_circuit():
    c = parse_aag("aag 1 1 0 1 0\n2\n2\ni0 controllable_c\n")
    assert c.inputs == [2] and c.outputs == [2]
    part = partition_inputs(c)
    assert part.controllable == [2] and part.uncontrollable == []


def test_missing_latch_line_reports_line():
    with pytest.raises(AigerError) as ei:
        parse_aag("aag 3 1 2 1 0\n2\n4 2\n")
    assert ei.value.line == 4


@pytest.mark.parametrize("text,line", [
    ("aig 1 1 0 1 0\n", 1),
    ("aag 1 1\n", 1),
    ("aag 2 1 1 1 0\n2\n4 2 1\n4\n", 3),          # nonzero latch init
    ("aag 1 1 0 1 0\n3\n3\n", 2),                   # odd input literal
    ("aag 2 2 0 1 0\n2\n2\n2\n", 3),                # defined twice
    ("aag 3 1 0 1 1\n2\n6\n6 8 2\n", 4),            # not topological
    ("aag 2 1 0 1 0\n2\n4\n", 3),                   # dangling output
    ("aag 1 1 0 0 0\n2\n", 1),                      # no output
    ("aag 1 1 0 1 0\n2\n2\nx0 foo\n", 4),           # bad symbol line
])
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(AigerError) as ei:
        parse_aag(text)
    assert ei.value.line == line


def test_generated_counter_reparses():
    c = gen_cnt(4)
    d = parse_aag(write_aag(c))
    assert len(d.latches) == 5
    assert d.structure() == c.structure()
    assert d.input_names == c.input_names


def test_partition_rules():
    c = parse_aag("aag 2 2 0 1 0\n2\n4\n2\ni0 controllable_c0\ni1 i0\n")
    p = partition_inputs(c)
    assert p.controllable == [2] and p.uncontrollable == [4]
    c = parse_aag("aag 2 2 0 1 0\n2\n4\n2\n")
    assert partition_inputs(c).controllable == []
    c = parse_aag("aag 1 1 0 1 0\n2\n2\ni0 Controllable_x\n")
    assert partition_inputs(c).controllable == []


def test_one_latch_translation():
    s = to_safety_spec(parse_aag("aag 2 1 1 1 0\n2\n4 2\n4\ni0 controllable_c0\n"))
    (x0,), (c0,) = s.x, s.c
    assert s.next_fn == [c0]
    assert [set(cl) for cl in s.P] == [{-x0}]
    assert set(s.init) == {-x0}


def _error_reads_input(controllable: bool):
    b = AigBuilder(simplify=False)
    i = b.input("controllable_c0" if controllable else "i0")
    x = b.latch("l0")
    b.set_next(x, b.AND(x, i))
    return b.circuit(i, "err_is_input")


def _explicit_error_latch(controllable: bool):
    b = AigBuilder(simplify=False)
    i = b.input("controllable_c0" if controllable else "i0")
    x = b.latch("l0")
    e = b.latch("err")
    b.set_next(x, b.AND(x, i))
    b.set_next(e, b.OR(e, i))
    return b.circuit(e, "err_latch")


@pytest.mark.parametrize("controllable", [True, False])
def test_error_on_input_gains_latch(controllable):
    s = to_safety_spec(_error_reads_input(controllable))
    assert len(s.x) == 2  # one latch plus the error latch
    ref = to_safety_spec(_explicit_error_latch(controllable))
    assert explicit_attractor(s).realizable == explicit_attractor(ref).realizable == controllable


def test_constant_false_error_is_always_safe():
    s = to_safety_spec(parse_aag("aag 2 1 1 1 0\n2\n4 2\n0\n"))
    assert len(s.P) == 0
    assert explicit_attractor(s).realizable


def test_constant_true_error_is_lost():
    s = to_safety_spec(parse_aag("aag 2 1 1 1 0\n2\n4 2\n1\n"))
    assert not explicit_attractor(s).realizable


def test_multiple_outputs_rejected():
    with pytest.raises(AigerError):
        to_safety_spec(parse_aag("aag 1 1 0 2 0\n2\n2\n3\n"))


def test_load_spec_names(tmp_path):
    p = tmp_path / "cnt3.aag"
    p.write_text(write_aag(gen_cnt(3)))
    s = load_spec(str(p))
    assert s.name == "cnt3" and s.sizes == (4, 1, 1)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 4), st.integers(0, 3), st.integers(0, 3))
def test_write_parse_round_trip(seed, nx, ni, nc):
    c = random_game(random.Random(seed), nx, ni, nc)
    d = parse_aag(write_aag(c))
    assert d.structure() == c.structure()
    assert write_aag(d) == write_aag(c)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6))
def test_translation_matches_simulation(seed):
    rng = random.Random(seed)
    s = to_safety_spec(random_game(rng, rng.randint(1, 4), rng.randint(0, 2), rng.randint(0, 2)))
    s.check_deterministic(samples=20, seed=seed)

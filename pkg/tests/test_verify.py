import json

import numpy as np
import pytest

from corpus import always_safe, one_latch, small_corpus
from safetysynth.aiger import to_safety_spec
from safetysynth.bench import gen_cnt
from safetysynth.formula import Cnf
from safetysynth.learning import learn_sat
from safetysynth.verify import (Mode, OracleLimit, check_winning_region, compare_regions, eval_cnf_states,
                                explicit_attractor, report_json)


def test_strict_pass():
    s = one_latch(True)
    rep = check_winning_region(s, Cnf([[-s.x[0]]]), Mode.STRICT)
    assert rep.ok and rep.summary() == "PASS PASS PASS"


def test_true_region_is_unsafe():
    s = one_latch(True)
    rep = check_winning_region(s, Cnf())
    assert not rep.safe and rep.initial
    assert rep.witness["safe"] == {s.vm.name(s.x[0]): True}


def test_false_region_misses_init():
    s = one_latch(True)
    rep = check_winning_region(s, Cnf([[]]))
    assert not rep.initial


def test_step_failure_on_lost_game():
    s = one_latch(False)
    rep = check_winning_region(s, s.P)
    assert rep.initial and rep.safe and not rep.step
    assert "step" in json.loads(report_json(rep))["witness"]


def test_region_must_be_over_state_vars():
    s = one_latch(True)
    with pytest.raises(ValueError):
        check_winning_region(s, Cnf([[s.c[0]]]))


def test_oracle_one_latch():
    ex = explicit_attractor(one_latch(True))
    assert ex.realizable and ex.states() == [0]
    ex = explicit_attractor(one_latch(False))
    assert not ex.realizable and ex.iterations == 1


def test_oracle_all_safe():
    ex = explicit_attractor(always_safe())
    assert ex.realizable and ex.iterations == 0 and ex.region.all()


def test_oracle_limit():
    with pytest.raises(OracleLimit):
        explicit_attractor(to_safety_spec(gen_cnt(4)), limit=5)


def test_oracle_regions_pass_strict_check():
    for name, s in small_corpus():
        ex = explicit_attractor(s)
        if ex.realizable:
            assert check_winning_region(s, ex.region_cnf(s)).ok, name
            assert np.array_equal(eval_cnf_states(s, ex.region_cnf(s)), ex.region)


def test_oracle_fixpoint_by_simulation():
    """Cross-check the vectorized fixpoint against plain simulation on the counter."""
    s = to_safety_spec(gen_cnt(2))
    ex = explicit_attractor(s)
    import itertools
    nx = len(s.x)
    win = {k for k in range(1 << nx) if s.safe([(k >> j) & 1 == 1 for j in range(nx)])}
    changed = True
    while changed:
        changed = False
        for k in list(win):
            st = [(k >> j) & 1 == 1 for j in range(nx)]
            ok = all(any(sum(b << j for j, b in enumerate(s.step(st, list(i), list(c)))) in win
                         for c in itertools.product((False, True), repeat=len(s.c)))
                     for i in itertools.product((False, True), repeat=len(s.i)))
            if not ok:
                win.discard(k)
                changed = True
    assert set(ex.states()) == win


def test_compare_regions():
    s = one_latch(True)
    x0 = s.x[0]
    assert compare_regions(Cnf([[-x0]]), Cnf([[-x0, -x0]]), s.vm).equivalent
    r = compare_regions(Cnf([[-x0]]), Cnf(), s.vm)
    assert not r.equivalent and r.witness == {x0: True}


def test_learned_matches_oracle_on_cnt4():
    s = to_safety_spec(gen_cnt(4))
    v = learn_sat(s)
    assert compare_regions(v.region, explicit_attractor(s).region_cnf(s), s.vm).equivalent


def test_rg_and_rc_modes_accept_strict_regions():
    s = to_safety_spec(gen_cnt(3))
    W = explicit_attractor(s).region_cnf(s)
    for mode in Mode:
        assert check_winning_region(s, W, mode).ok

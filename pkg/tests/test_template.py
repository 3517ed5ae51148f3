import random

import pytest

from corpus import one_latch
from safetysynth.aiger import to_safety_spec
from safetysynth.bench import gen_add, gen_cnt, gen_mult, gen_unreal
from safetysynth.formula import Clause, Cnf, Group, VarManager
from safetysynth.learning import Status
from safetysynth.sat import Session
from safetysynth.template import (TemplateOptions, antagonist_dual, build_template, synth_template, tseitin)
from safetysynth.verify import check_winning_region, compare_regions


def test_parameter_count():
    vm = VarManager()
    xs = vm.block(Group.STATE, 2)
    assert len(build_template(xs, 1, vm).params) == 5
    assert len(build_template(xs, 3, vm).params) == 3 * (2 * 2 + 1)


def test_instantiation_examples():
    vm = VarManager()
    x1, x2 = vm.block(Group.STATE, 2)
    t = build_template([x1, x2], 1, vm)
    assert len(t.instantiate({})) == 0
    k = {t.kc[0]: True, t.kv[0][0]: True, t.kn[0][0]: True}
    assert list(t.instantiate(k)) == [Clause([-x1])]


def test_rejects_empty_template():
    vm = VarManager()
    with pytest.raises(ValueError):
        build_template(vm.block(Group.STATE, 1), 0, vm)


def test_circuit_evaluate_instantiate_agree():
    rng = random.Random(4)
    for _ in range(40):
        vm = VarManager()
        xs = vm.block(Group.STATE, 3)
        t = build_template(xs, rng.randint(1, 3), vm)
        k = {p: rng.random() < 0.5 for p in t.params}
        f = t.instantiate(k)
        defs, w = t.circuit(xs, vm)
        s = Session()
        s.add_cnf(defs)
        for bits in range(8):
            st = {v: bool((bits >> j) & 1) for j, v in enumerate(xs)}
            assert t.evaluate(k, st) == f.holds(st)
            lits = [v if st[v] else -v for v in xs] + [p if k[p] else -p for p in t.params]
            assert s.solve(lits + [w]) == f.holds(st)
            assert s.solve(lits + [-w]) != f.holds(st)


def test_tseitin_is_equivalent():
    vm = VarManager()
    xs = vm.block(Group.STATE, 3)
    f = Cnf([[xs[0], -xs[1]], [xs[2]]])
    defs, out = tseitin(f, vm)
    s = Session()
    s.add_cnf(defs)
    for bits in range(8):
        lits = [v if (bits >> j) & 1 else -v for j, v in enumerate(xs)]
        val = f.holds({abs(l): l > 0 for l in lits})
        assert s.solve(lits + [out]) == val and s.solve(lits + [-out]) != val


def test_one_latch_at_n1():
    s = one_latch(True)
    v = synth_template(s)
    assert v.status is Status.REALIZABLE and v.stats["N"] == 1
    assert compare_regions(v.region, Cnf([[-s.x[0]]]), s.vm).equivalent


def test_unrealizable_hits_the_cap():
    v = synth_template(one_latch(False))
    assert v.status is Status.FAIL and "2^|x|" in v.detail


def test_practical_cap():
    v = synth_template(to_safety_spec(gen_cnt(3)), TemplateOptions(max_n=1))
    assert v.status is Status.FAIL and "practical cap" in v.detail


@pytest.mark.parametrize("gen,bits", [(gen_add, 2), (gen_mult, 2), (gen_add, 3)])
def test_arithmetic_needs_at_most_two_clauses(gen, bits):
    s = to_safety_spec(gen(bits))
    v = synth_template(s)
    assert v.status is Status.REALIZABLE and v.stats["N"] <= 2
    assert check_winning_region(s, v.region).ok


def test_counter_region_verifies():
    s = to_safety_spec(gen_cnt(2))
    v = synth_template(s)
    assert v.realizable and check_winning_region(s, v.region).ok


def test_dual_unrealizable_at_n1():
    v = antagonist_dual(one_latch(False))
    assert v.status is Status.UNREALIZABLE and v.stats["dual_n"] == 1


def test_dual_is_sound_on_realizable():
    assert antagonist_dual(one_latch(True)).status is Status.UNKNOWN


def test_dual_deeper_attractor():
    v = antagonist_dual(to_safety_spec(gen_unreal(1)))
    assert v.status is Status.UNREALIZABLE


def test_dual_through_synth_template():
    v = synth_template(one_latch(False), TemplateOptions(dual=True))
    assert v.status is Status.UNREALIZABLE

import random

import pytest

from oracles import brute_ea, random_ea_case, witness_ok
from safetysynth.formula import Cnf, Group, VarManager, cnf_negate
from safetysynth.qesolve import EAProblem, EAResult, EASolver, check_witness, solve_ea, to_qdimacs


def problem(E, A, clauses, vm):
    prop = Cnf(clauses)
    return EAProblem(exists=E, forall=A, prop=prop, nprop=cnf_negate(prop, vm))


@pytest.fixture
def vm():
    return VarManager()


def test_e_true_dominates(vm):
    e = vm.new(Group.STATE)
    a = vm.new(Group.INPUT)
    r = solve_ea(problem([e], [a], [[e, a], [e, -a]], vm))
    assert r.sat and r.witness[e] is True


def test_equivalence_is_unsat(vm):
    e = vm.new(Group.STATE)
    a = vm.new(Group.INPUT)
    r = solve_ea(problem([e], [a], [[-e, a], [e, -a]], vm))
    assert r.status is EAResult.UNSAT


def test_two_existentials(vm):
    e1, e2 = vm.new(Group.STATE), vm.new(Group.STATE)
    a = vm.new(Group.INPUT)
    p = problem([e1, e2], [a], [[-a, e1], [a, e2]], vm)
    r = solve_ea(p)
    assert r.sat and r.witness[e1] and r.witness[e2]
    # the brute-force oracle agrees that this is the only candidate
    assert brute_ea([e1, e2], [a], [], p.prop)


def test_inner_existential(vm):
    e = vm.new(Group.STATE)
    a = vm.new(Group.INPUT)
    c = vm.new(Group.CONTROL)
    # ∃e ∀a ∃c: c ↔ a, and e free
    prop = Cnf([[-c, a], [c, -a]])
    r = solve_ea(EAProblem(exists=[e], forall=[a], inner=[c], prop=prop, nprop=cnf_negate(prop, vm)))
    assert r.sat


def test_defs_are_functional(vm):
    e = vm.new(Group.STATE)
    a = vm.new(Group.INPUT)
    g = vm.new(Group.TEMP)
    defs = Cnf([[-g, e], [-g, a], [g, -e, -a]])  # g = e ∧ a
    prop = Cnf([[-g]])
    p = EAProblem(exists=[e], forall=[a], defs=defs, prop=prop, nprop=cnf_negate(prop, vm))
    r = solve_ea(p)
    assert r.sat and r.witness[e] is False and check_witness(p, r.witness)


def test_budget(vm):
    rng = random.Random(5)
    for _ in range(50):
        p, truth = random_ea_case(rng)
        r = solve_ea(p, budget=0)
        assert r.status in (EAResult.BUDGET, EAResult.SAT, EAResult.UNSAT)
        if r.status is not EAResult.BUDGET:
            assert r.sat == truth


def test_incremental_assumptions(vm):
    e1, e2 = vm.new(Group.STATE), vm.new(Group.STATE)
    a = vm.new(Group.INPUT)
    prop = Cnf([[e1, a], [e1, -a]])
    s = EASolver(EAProblem(exists=[e1, e2], forall=[a], prop=prop, nprop=cnf_negate(prop, vm)))
    assert s.solve([e2]).sat
    assert not s.solve([-e1]).sat
    assert s.solve([-e2]).sat


def test_random_against_brute_force():
    rng = random.Random(2024)
    for _ in range(300):
        p, truth = random_ea_case(rng)
        r = solve_ea(p)
        assert r.sat == truth
        if r.sat:
            assert witness_ok(p, r.witness)


def test_qdimacs_prefix(vm):
    e = vm.new(Group.STATE)
    a = vm.new(Group.INPUT)
    text = to_qdimacs(problem([e], [a], [[e, a]], vm))
    lines = text.splitlines()
    assert lines[0].startswith("p cnf")
    assert lines[1] == f"e {e} 0" and lines[2] == f"a {a} 0"

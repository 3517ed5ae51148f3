"""Reachability strengthenings of the learning queries.

RG restricts the generalization check to states that are initial or have a
predecessor in ``G ∧ ¬xg``; RC restricts the counterexample query to states
that are initial or have a *different* predecessor in F.  Both are expressed
as an outer constraint over the previous-state block x*, i*, c* with
selector variables, so the resulting skeletons run on the ∃∀ engine or plain
SAT sessions alike.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

from .formula import Cnf, Group, cnf_negate, negate_cube
from .game import QuerySkeleton, SafetySpec


@dataclass
class PrevBlock:
    x: list[int]
    i: list[int]
    c: list[int]
    T: Cnf

    @classmethod
    def of(cls, spec: SafetySpec) -> "PrevBlock":
        pb = spec.prev_block()
        return cls(pb["x"], pb["i"], pb["c"], pb["T"])


def reach_constraint(spec: SafetySpec, G: Cnf, exclude: Iterable[int] | None = None,
                     disequal: bool = False, guard: int | None = None) -> tuple[Cnf, list[int]]:
    """CNF of ``I(x) ∨ (G(x*) ∧ ¬exclude(x*) ∧ [x* ≠ x] ∧ T(x*, i*, c*, x))``.

    Returns the clauses and the auxiliary variables they introduce.  With
    ``guard`` every clause is weakened by ``¬guard`` so the constraint can be
    switched on per query inside one incremental session.
    """
    vm = spec.vm
    pb = PrevBlock.of(spec)
    s_init = vm.new(Group.TEMP, "s_init")
    s_pred = vm.new(Group.TEMP, "s_pred")
    aux = [s_init, s_pred]
    out = Cnf()
    g = [-guard] if guard is not None else []
    out.add(g + [s_init, s_pred])
    for l in spec.init:
        out.add(g + [-s_init, l])
    for c in spec.on_prev(G):
        out.add(g + [-s_pred, *c])
    if exclude is not None:
        out.add(g + [-s_pred, *negate_cube(spec.cube_to_prev(exclude))])
    for c in pb.T:
        out.add(g + [-s_pred, *c])
    if disequal:
        ds = []
        for xv, xs in zip(spec.x, pb.x):
            d = vm.new(Group.TEMP, "d")
            ds.append(d)
            out.add(g + [-d, xv, xs])
            out.add(g + [-d, -xv, -xs])
        aux.extend(ds)
        out.add(g + [-s_pred, *ds])
    return out, aux


def prev_vars(spec: SafetySpec) -> list[int]:
    pb = spec.prev_block()
    return pb["x"] + pb["i"] + pb["c"]


def counterexample_query(spec: SafetySpec, F: Cnf, rc: bool = False) -> QuerySkeleton:
    """∃x,i ∀c: F(x) ∧ T ∧ ¬F(x'), optionally with the RC reachability disjunct."""
    Fn = spec.prime(F)
    outer = F.copy()
    exists = list(spec.x) + list(spec.i)
    if rc:
        rcon, _ = reach_constraint(spec, F, disequal=True)
        outer.extend(rcon)
        exists += prev_vars(spec)
    return QuerySkeleton(exists=exists, forall=list(spec.c), inner=[], defs=spec.T,
                         prop=cnf_negate(Fn, spec.vm), nprop=Fn, outer=outer,
                         tag="rc_counterexample" if rc else "counterexample")


def rc_counterexample_query(F: Cnf, spec: SafetySpec) -> QuerySkeleton:
    return counterexample_query(spec, F, rc=True)


def generalization_query(spec: SafetySpec, G: Cnf, xt: Iterable[int], rg: bool = False) -> QuerySkeleton:
    """∃x ∀i ∃c: xt ∧ G ∧ T ∧ G(x'); Unsat means every state of xt loses w.r.t. G."""
    xt = list(xt)
    Gn = spec.prime(G)
    outer = G.copy()
    for l in xt:
        outer.add((l,))
    exists = list(spec.x)
    if rg:
        rcon, _ = reach_constraint(spec, G, exclude=xt)
        outer.extend(rcon)
        exists += prev_vars(spec)
    return QuerySkeleton(exists=exists, forall=list(spec.i), inner=list(spec.c), defs=spec.T,
                         prop=Gn, nprop=cnf_negate(Gn, spec.vm), outer=outer,
                         tag="rg_generalization" if rg else "generalization")


def rg_generalization_query(G: Cnf, xg: Iterable[int], spec: SafetySpec) -> QuerySkeleton:
    return generalization_query(spec, G, xg, rg=True)

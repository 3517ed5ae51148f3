"""LearnQbf: counterexample-guided learning over ∃∀ queries."""

from __future__ import annotations

from ..formula import Cnf, Cube, compress, negate_cube
from ..game import SafetySpec
from ..qesolve import EAResult, solve_ea
from ..reachopt import counterexample_query, generalization_query
from .common import (LearnOptions, LearnState, Status, Stopwatch, SynthesisVerdict,
                     consistent_with, emit)
from .hstree import hs_tree
from .learnsat import consistent_with_all


class _Budget(Exception):
    pass


def _is_losing(spec: SafetySpec, G: Cnf, cube, rg: bool, stats: dict) -> bool:
    stats["solver_queries"] += 1
    res = solve_ea(generalization_query(spec, G, cube, rg=rg).problem())
    if res.status is EAResult.BUDGET:
        raise _Budget
    return res.status is EAResult.UNSAT


def generalize(spec: SafetySpec, F: Cnf, x, opts: LearnOptions, stats: dict) -> list[int]:
    """Drop literals of ``x`` in ascending variable order (the inner loop)."""
    xg = sorted(x, key=abs)
    for l in list(xg):
        xt = [m for m in xg if m != l]
        G = F.copy()
        if opts.optimize:
            G.add(negate_cube(xg))
        if _is_losing(spec, G, xt, opts.use_rg, stats):
            xg = xt
    return xg


def all_min_generalizations(cex, state: LearnState | Cnf, spec: SafetySpec,
                            opts: LearnOptions | None = None) -> set[Cube]:
    """Every locally minimal losing sub-cube of ``cex`` w.r.t. the current F."""
    opts = opts or LearnOptions()
    F = state.F if isinstance(state, LearnState) else state
    stats = {"solver_queries": 0}
    cubes = hs_tree(cex, lambda c: _is_losing(spec, F, c, opts.use_rg, stats),
                    node_limit=opts.hs_node_limit)
    return set(cubes)


def learn_qbf(spec: SafetySpec, opts: LearnOptions | None = None, cancel=None) -> SynthesisVerdict:
    opts = opts or LearnOptions()
    watch = Stopwatch()
    st = LearnState(F=spec.P.copy(), fhat_len=len(spec.P))
    mode = "rc" if opts.use_rc else "strict"

    def verdict(status: Status, detail: str = "") -> SynthesisVerdict:
        stats = dict(st.stats)
        stats["wall_time_ms"] = watch.ms()
        stats["clauses"] = len(st.F)
        emit(opts, "verdict", worker="learnqbf", status=status.value)
        return SynthesisVerdict(status, st.F.copy() if status is Status.REALIZABLE else None,
                                stats, mode, detail)

    if not consistent_with_all(spec):
        return verdict(Status.UNREALIZABLE, "initial state unsafe")
    last_compress = 0
    try:
        while True:
            if cancel is not None and cancel.is_set():
                return verdict(Status.CANCELLED)
            if opts.budget is not None and st.stats["iterations"] >= opts.budget:
                return verdict(Status.BUDGET)
            st.stats["iterations"] += 1
            st.stats["solver_queries"] += 1
            res = solve_ea(counterexample_query(spec, st.F, rc=opts.use_rc).problem(), seed=opts.seed)
            if res.status is EAResult.BUDGET:
                return verdict(Status.BUDGET)
            if res.status is EAResult.UNSAT:
                return verdict(Status.REALIZABLE)
            x = [v if res.witness.get(v, False) else -v for v in spec.x]
            i = [v if res.witness.get(v, False) else -v for v in spec.i]
            st.cex_db.append((Cube(x), Cube(i)))
            if opts.all_generalizations:
                cubes = sorted(all_min_generalizations(x, st, spec, opts), key=len)
            else:
                cubes = [generalize(spec, st.F, x, opts, st.stats)]
            for xg in cubes:
                st.stats["cube_sizes"].append(len(xg))
                if consistent_with(xg, spec.init):
                    return verdict(Status.UNREALIZABLE, "generalized cube meets I")
                clause = list(negate_cube(xg))
                st.F.add(clause)
                st.stats["clauses_learned"] += 1
                emit(opts, "clause", worker="learnqbf", clause=clause)
            if opts.compress_every and st.stats["clauses_learned"] - last_compress >= opts.compress_every:
                last_compress = st.stats["clauses_learned"]
                st.F = compress(st.F)
    except _Budget:
        return verdict(Status.BUDGET)

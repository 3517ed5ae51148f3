"""Template-based winning-region synthesis with a CNF template.

A template with N clauses over x has parameters k^c (clause i is used),
k^v (x_j occurs in clause i) and k^n (that occurrence is negated).  The
single query ∃k ∀x,i ∃c: (I ⇒ W) ∧ (W ⇒ P) ∧ (W ⇒ W') is discharged by the
∃∀ engine, with N doubling from 1 upwards.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping, Sequence

from .formula import Cnf, Group, VarManager, cnf_negate
from .game import SafetySpec
from .learning.common import Status, Stopwatch, SynthesisVerdict
from .qesolve import EAProblem, EAResult, solve_ea


@dataclass
class CnfTemplate:
    N: int
    x: list[int]
    kc: list[int]
    kv: list[list[int]]
    kn: list[list[int]]

    @property
    def params(self) -> list[int]:
        out = list(self.kc)
        for row in self.kv:
            out.extend(row)
        for row in self.kn:
            out.extend(row)
        return out

    def instantiate(self, k: Mapping[int, bool]) -> Cnf:
        f = Cnf()
        for i in range(self.N):
            if not k.get(self.kc[i], False):
                continue
            lits = [(-xj if k.get(self.kn[i][j], False) else xj)
                    for j, xj in enumerate(self.x) if k.get(self.kv[i][j], False)]
            f.add(lits)
        return f

    def evaluate(self, k: Mapping[int, bool], state: Mapping[int, bool]) -> bool:
        """Direct evaluation of the template circuit."""
        for i in range(self.N):
            if not k.get(self.kc[i], False):
                continue
            if not any(k.get(self.kv[i][j], False) and (state[xj] != k.get(self.kn[i][j], False))
                       for j, xj in enumerate(self.x)):
                return False
        return True

    def circuit(self, xs: Sequence[int], vm: VarManager) -> tuple[Cnf, int]:
        """Tseitin encoding of W(xs, k); returns the definitions and the output var."""
        f = Cnf()
        oks = []
        for i in range(self.N):
            ts = []
            for j, xv in enumerate(xs):
                kv, kn = self.kv[i][j], self.kn[i][j]
                t = vm.new(Group.TEMP, f"tl{i}_{j}")
                # t <-> kv ∧ (x xor kn)
                f.add((-t, kv))
                f.add((-t, xv, kn))
                f.add((-t, -xv, -kn))
                f.add((t, -kv, -xv, kn))
                f.add((t, -kv, xv, -kn))
                ts.append(t)
            cl = vm.new(Group.TEMP, f"tc{i}")
            f.add([-cl, *ts])
            for t in ts:
                f.add((cl, -t))
            ok = vm.new(Group.TEMP, f"tok{i}")
            kc = self.kc[i]
            f.add((-ok, -kc, cl))
            f.add((ok, kc))
            f.add((ok, -cl))
            oks.append(ok)
        w = vm.new(Group.TEMP, "w")
        for ok in oks:
            f.add((-w, ok))
        f.add([w] + [-ok for ok in oks])
        return f, w


def build_template(x_vars: Sequence[int], N: int, vm: VarManager) -> CnfTemplate:
    if N < 1:
        raise ValueError("N must be >= 1")
    kc = [vm.new(Group.PARAM, f"kc{i}") for i in range(N)]
    kv = [[vm.new(Group.PARAM, f"kv{i}_{j}") for j in range(len(x_vars))] for i in range(N)]
    kn = [[vm.new(Group.PARAM, f"kn{i}_{j}") for j in range(len(x_vars))] for i in range(N)]
    return CnfTemplate(N, list(x_vars), kc, kv, kn)


def tseitin(f: Cnf, vm: VarManager) -> tuple[Cnf, int]:
    """Full (two-sided) encoding of a CNF as one output variable."""
    defs = Cnf()
    cls = []
    for c in f:
        v = vm.new(Group.TEMP, "ts")
        defs.add([-v, *c])
        for l in c:
            defs.add((v, -l))
        cls.append(v)
    out = vm.new(Group.TEMP, "tso")
    for v in cls:
        defs.add((-out, v))
    defs.add([out] + [-v for v in cls])
    return defs, out


@dataclass
class TemplateOptions:
    max_n: int = 64
    budget: int = 10**6
    dual: bool = False
    dual_depth: int = 3
    seed: int | None = None


def template_problem(spec: SafetySpec, tmpl: CnfTemplate) -> EAProblem:
    vm = spec.vm
    cw, w = tmpl.circuit(spec.x, vm)
    cwn, wn = tmpl.circuit(spec.xn, vm)
    defs = spec.T + cw + cwn
    prop = Cnf()
    prop.add([w] + [-l for l in spec.init])
    for c in spec.P:
        prop.add([-w, *c])
    prop.add((-w, wn))
    return EAProblem(exists=tmpl.params, forall=list(spec.x) + list(spec.i), inner=list(spec.c),
                     defs=defs, prop=prop, nprop=cnf_negate(prop, vm))


def synth_template(spec: SafetySpec, opts: TemplateOptions | None = None) -> SynthesisVerdict:
    opts = opts or TemplateOptions()
    watch = Stopwatch()
    stats: dict = {"rounds": 0, "tried_n": []}
    if opts.dual:
        d = antagonist_dual(spec, opts.dual_depth)
        if d.status is Status.UNREALIZABLE:
            d.stats.update(stats)
            return d
    theory_cap = 1 << len(spec.x)
    N = 1
    while True:
        tmpl = build_template(spec.x, N, spec.vm)
        res = solve_ea(template_problem(spec, tmpl), opts.budget, seed=opts.seed)
        stats["rounds"] += res.rounds
        stats["tried_n"].append(N)
        if res.status is EAResult.BUDGET:
            stats["wall_time_ms"] = watch.ms()
            return SynthesisVerdict(Status.BUDGET, None, stats, "strict")
        if res.sat:
            stats["N"] = N
            stats["wall_time_ms"] = watch.ms()
            region = tmpl.instantiate(res.witness)
            return SynthesisVerdict(Status.REALIZABLE, region, stats, "strict")
        if N >= theory_cap:
            stats["wall_time_ms"] = watch.ms()
            return SynthesisVerdict(Status.FAIL, None, stats, "strict",
                                    f"no region with N={N} >= 2^|x|")
        if N >= opts.max_n:
            stats["wall_time_ms"] = watch.ms()
            return SynthesisVerdict(Status.FAIL, None, stats, "strict",
                                    f"practical cap N={opts.max_n} reached")
        N *= 2


# ---------------------------------------------------------------------------
# antagonist dual

MAX_DUAL_CONTROLS = 10


def antagonist_dual(spec: SafetySpec, depth_budget: int = 3, max_n: int = 2) -> SynthesisVerdict:
    """Search template-shaped antagonist attractor layers A_1..A_d.

    A_0 = ¬P and every state of A_j ∧ P has an input i such that every
    control leads into A_{j-1}.  If an initial state lies in ¬P or some A_j
    the game is lost.  The ∀c is expanded, so this gives up (Unknown) when
    there are more than ``MAX_DUAL_CONTROLS`` controls.
    """
    watch = Stopwatch()
    vm = spec.vm
    stats: dict = {"dual_tried": []}
    if not spec.P.holds({abs(l): l > 0 for l in spec.init}):
        return SynthesisVerdict(Status.UNREALIZABLE, None, stats, "strict", "initial state unsafe")
    if len(spec.c) > MAX_DUAL_CONTROLS:
        return SynthesisVerdict(Status.UNKNOWN, None, stats, "strict", "too many controls")
    ctl_vals = list(itertools.product((False, True), repeat=len(spec.c)))
    for d in range(1, depth_budget + 1):
        N = 1
        while N <= max_n:
            stats["dual_tried"].append((d, N))
            layers = [build_template(spec.x, N, vm) for _ in range(d)]
            defs = Cnf()
            pdefs, p_x = tseitin(spec.P, vm)
            defs.extend(pdefs)
            a_x = []
            for t in layers:
                cdefs, w = t.circuit(spec.x, vm)
                defs.extend(cdefs)
                a_x.append(w)
            # successor copies, one per control value
            succ_out: list[list[int]] = []  # per control value: [a_0(x'), a_1(x'), ..., a_{d-1}(x')]
            for cv in ctl_vals:
                xn = [vm.new(Group.TEMP, "xc") for _ in spec.x]
                cs = [vm.new(Group.TEMP, "cc") for _ in spec.c]
                rename = dict(zip(spec.xn, xn))
                rename.update(zip(spec.c, cs))
                tcopy, _ = spec.transition_copy(rename)
                defs.extend(tcopy)
                for cvar, b in zip(cs, cv):
                    defs.add((cvar if b else -cvar,))
                pd, pn = tseitin(spec.P.rename(dict(zip(spec.x, xn))), vm)
                defs.extend(pd)
                outs = [-pn]
                for t in layers[:-1]:
                    cdefs, w = t.circuit(xn, vm)
                    defs.extend(cdefs)
                    outs.append(w)
                succ_out.append(outs)
            prop = Cnf()
            for j in range(d):
                for outs in succ_out:
                    prop.add((-a_x[j], -p_x, outs[j]))
            # outer: the initial state is in some layer
            outer = Cnf()
            init_state = {abs(l): l > 0 for l in spec.init}
            sel = []
            for t in layers:
                xi = [vm.new(Group.TEMP, "xi") for _ in spec.x]
                for v, xv in zip(spec.x, xi):
                    outer.add((xv if init_state[v] else -xv,))
                cdefs, w = t.circuit(xi, vm)
                outer.extend(cdefs)
                sel.append(w)
            outer.add(sel)
            params = [p for t in layers for p in t.params]
            prob = EAProblem(exists=params, forall=list(spec.x), inner=list(spec.i),
                             defs=defs, prop=prop, nprop=cnf_negate(prop, vm), outer=outer)
            res = solve_ea(prob)
            if res.sat:
                stats["dual_depth"] = d
                stats["dual_n"] = N
                stats["wall_time_ms"] = watch.ms()
                return SynthesisVerdict(Status.UNREALIZABLE, None, stats, "strict",
                                        f"antagonist attractor of depth {d}")
            N *= 2
    stats["wall_time_ms"] = watch.ms()
    return SynthesisVerdict(Status.UNKNOWN, None, stats, "strict")

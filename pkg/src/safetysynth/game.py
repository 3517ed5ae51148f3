"""Safety specifications and the recurring one-step query skeletons."""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .formula import Cnf, Cube, Group, VarManager, cnf_negate, var_of

# A next-state function or gate input: a literal over x/i/c/gate vars, or a constant.
Signal = int | bool


@dataclass
class SafetySpec:
    """The tuple (x, i, c, I, T) together with the safe-state CNF P.

    ``gates`` are AND definitions ``(out, a, b)`` in topological order over
    TEMP variables; ``next_fn[k]`` gives the successor value of ``x[k]``.
    T is complete and deterministic by construction.
    """

    vm: VarManager
    x: list[int]
    i: list[int]
    c: list[int]
    xn: list[int]
    init: Cube
    gates: list[tuple[int, int, int]]
    next_fn: list[Signal]
    P: Cnf
    name: str = "spec"
    latch_lits: list[int | None] = field(default_factory=list)
    _T: Cnf | None = field(default=None, repr=False)
    _prev: dict | None = field(default=None, repr=False)
    _lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def sizes(self) -> tuple[int, int, int]:
        return len(self.x), len(self.i), len(self.c)

    @property
    def T(self) -> Cnf:
        if self._T is None:
            self._T = self._trans({}, {})
        return self._T

    def _trans(self, rename: dict[int, int], gate_map: dict[int, int]) -> Cnf:
        def m(lit: int) -> int:
            v = var_of(lit)
            t = gate_map.get(v) or rename.get(v, v)
            return t if lit > 0 else -t

        out = Cnf()
        for g, a, b in self.gates:
            gg, aa, bb = m(g), m(a), m(b)
            out.add((-gg, aa))
            out.add((-gg, bb))
            out.add((gg, -aa, -bb))
        for xv, f in zip(self.xn, self.next_fn):
            n = m(xv)
            if isinstance(f, bool):
                out.add((n,) if f else (-n,))
            else:
                ff = m(f)
                out.add((-n, ff))
                out.add((n, -ff))
        return out

    def transition_copy(self, rename: dict[int, int]) -> tuple[Cnf, dict[int, int]]:
        """A copy of T with x/i/c/x' renamed by ``rename`` and fresh gate variables."""
        gate_map = {g: self.vm.new(Group.TEMP, f"{self.vm.name(g)}~") for g, _, _ in self.gates}
        return self._trans(rename, gate_map), gate_map

    def prev_block(self) -> dict:
        """Previous-state copies x*, i*, c* and T(x*, i*, c*, x), built once."""
        with self._lock:
            if self._prev is None:
                vm = self.vm
                xs = [vm.new_prev(v) for v in self.x]
                is_ = [vm.new_prev(v) for v in self.i]
                cs = [vm.new_prev(v) for v in self.c]
                rename = dict(zip(self.x, xs))
                rename.update(zip(self.i, is_))
                rename.update(zip(self.c, cs))
                rename.update(zip(self.xn, self.x))
                tprev, gmap = self.transition_copy(rename)
                self._prev = {"x": xs, "i": is_, "c": cs, "T": tprev,
                              "gates": list(gmap.values()), "map": rename}
            return self._prev

    # -- evaluation -----------------------------------------------------------

    def step(self, state: Sequence[bool], inputs: Sequence[bool], controls: Sequence[bool]) -> list[bool]:
        """Successor state by direct evaluation of the gate definitions."""
        val: dict[int, bool] = {}
        val.update(zip(self.x, state))
        val.update(zip(self.i, inputs))
        val.update(zip(self.c, controls))

        def ev(s: Signal) -> bool:
            if isinstance(s, bool):
                return s
            return val[s] if s > 0 else not val[-s]

        for g, a, b in self.gates:
            val[g] = ev(a) and ev(b)
        return [ev(f) for f in self.next_fn]

    def safe(self, state: Sequence[bool]) -> bool:
        return self.P.holds(dict(zip(self.x, state)))

    def initial(self, state: Sequence[bool]) -> bool:
        return self.init.holds(dict(zip(self.x, state)))

    # -- formula helpers ------------------------------------------------------

    def prime(self, f: Cnf) -> Cnf:
        nmap = dict(zip(self.x, self.xn))
        for v in f.vars():
            if v not in nmap:
                raise ValueError(f"prime: {self.vm.name(v)} is not a state variable")
        return f.rename(nmap)

    def on_prev(self, f: Cnf) -> Cnf:
        pb = self.prev_block()
        return f.rename(dict(zip(self.x, pb["x"])))

    def cube_to_prev(self, cube: Iterable[int]) -> list[int]:
        pb = self.prev_block()
        m = dict(zip(self.x, pb["x"]))
        return [m[l] if l > 0 else -m[-l] for l in cube]

    def state_cube(self, state: Sequence[bool]) -> Cube:
        return Cube(v if b else -v for v, b in zip(self.x, state))

    def check_deterministic(self, samples: int = 1000, seed: int = 0) -> None:
        """Assert T is complete and deterministic on sampled assignments via SAT."""
        import random

        from .sat import Solver

        rng = random.Random(seed)
        s = Solver()
        for cl in self.T:
            s.add_clause(cl)
        for _ in range(samples):
            st = [rng.random() < 0.5 for _ in self.x]
            ins = [rng.random() < 0.5 for _ in self.i]
            ct = [rng.random() < 0.5 for _ in self.c]
            a = [v if b else -v for v, b in zip(self.x + self.i + self.c, st + ins + ct)]
            if not s.solve(a):
                raise AssertionError("T is not complete")
            succ = s.model_cube(self.xn)
            if [l > 0 for l in succ] != self.step(st, ins, ct):
                raise AssertionError("T disagrees with the functional definition")
            # a second, different successor under the same assignment?
            act = self.vm.new(Group.TEMP, "det")
            s.add_clause([-act] + [-l for l in succ])
            if s.solve(a + [act]):
                raise AssertionError("T is not deterministic")
            s.add_clause([-act])


# ---------------------------------------------------------------------------
# query skeletons


@dataclass
class QuerySkeleton:
    """∃E ∀A ∃C: outer ∧ defs ∧ prop, with nprop ≡ ¬prop for the verifier.

    ``defs`` define the dependent variables (x', gates) functionally; ``prop``
    and ``nprop`` may carry their own existential auxiliaries.
    """

    exists: list[int]
    forall: list[int]
    inner: list[int]
    defs: Cnf
    prop: Cnf
    nprop: Cnf
    outer: Cnf = field(default_factory=Cnf)
    tag: str = ""

    def problem(self, extra_outer: Iterable[Iterable[int]] = ()):
        from .qesolve import EAProblem

        outer = self.outer.copy()
        outer.extend(extra_outer)
        return EAProblem(exists=list(self.exists), forall=list(self.forall), inner=list(self.inner),
                         defs=self.defs, prop=self.prop, nprop=self.nprop, outer=outer)

    def blocks(self) -> list[tuple[str, list[int]]]:
        out = [("exists", self.exists), ("forall", self.forall)]
        if self.inner:
            out.append(("exists", self.inner))
        return out


def force1_protagonist(spec: SafetySpec, F: Cnf) -> QuerySkeleton:
    """States from which the protagonist can enforce reaching F in one step."""
    Fn = spec.prime(F)
    return QuerySkeleton(exists=list(spec.x), forall=list(spec.i), inner=list(spec.c),
                         defs=spec.T, prop=Fn, nprop=cnf_negate(Fn, spec.vm),
                         tag="force1_protagonist")


def force1_antagonist(spec: SafetySpec, F: Cnf) -> QuerySkeleton:
    """States from which the antagonist can enforce reaching F in one step."""
    Fn = spec.prime(F)
    return QuerySkeleton(exists=list(spec.x) + list(spec.i), forall=list(spec.c), inner=[],
                         defs=spec.T, prop=Fn, nprop=cnf_negate(Fn, spec.vm),
                         tag="force1_antagonist")


def contains(skel: QuerySkeleton, spec: SafetySpec, state: Sequence[bool]) -> bool:
    """Decide membership of a concrete state in the pre-image a skeleton denotes."""
    from .qesolve import EAResult, solve_ea

    units = [[l] for l in spec.state_cube(state)]
    res = solve_ea(skel.problem(units))
    return res.status is EAResult.SAT

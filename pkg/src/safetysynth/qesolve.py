"""Two-solver CEGAR engine for ∃E ∀A ∃C-shaped queries.

The matrix is split in three parts.  ``defs`` are functional definitions of
dependent variables (next-state bits, gate outputs) in terms of E, A and C;
``prop`` is the property; ``nprop`` is a CNF of its negation supplied by the
caller (usually via :func:`safetysynth.formula.cnf_negate`).  Auxiliary
variables of ``prop``/``nprop`` are existential and innermost.

With an empty inner block C, each candidate is verified by a single SAT call
on ``defs ∧ nprop ∧ e``.  With a non-empty C the verification step is itself
an ∃∀ problem (∃A ∀C ¬matrix) handled by a nested engine whose learnt
refinements survive across candidates.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Iterable

from .formula import Cnf, var_of
from .sat import Session, shrink_core

DEFAULT_BUDGET = 10**6


class EAResult(enum.Enum):
    SAT = "Sat"
    UNSAT = "Unsat"
    BUDGET = "BudgetExceeded"


@dataclass
class EAProblem:
    exists: list[int]
    forall: list[int]
    defs: Cnf = field(default_factory=Cnf)
    prop: Cnf = field(default_factory=Cnf)
    nprop: Cnf = field(default_factory=Cnf)
    outer: Cnf = field(default_factory=Cnf)
    inner: list[int] = field(default_factory=list)

    def max_var(self) -> int:
        vs = [0, *self.exists, *self.forall, *self.inner]
        for f in (self.defs, self.prop, self.nprop, self.outer):
            vs.extend(f.vars())
        return max(vs)


@dataclass
class EAOutcome:
    status: EAResult
    witness: dict[int, bool] = field(default_factory=dict)
    rounds: int = 0

    @property
    def sat(self) -> bool:
        return self.status is EAResult.SAT


class _Fresh:
    def __init__(self, start: int):
        self.top = start

    def __call__(self) -> int:
        self.top += 1
        return self.top


def instantiate(f: Cnf, fixed: dict[int, bool], keep: set[int], fresh, rename: dict[int, int]) -> list[list[int]]:
    """Copy ``f`` with ``fixed`` substituted and every var outside ``keep`` renamed.

    ``rename`` is filled in lazily so several formulas can share one copy.
    Satisfied clauses vanish; an all-false clause yields the empty clause.
    """
    out: list[list[int]] = []
    for c in f:
        new: list[int] = []
        sat = False
        for l in c:
            v = var_of(l)
            if v in fixed:
                if fixed[v] == (l > 0):
                    sat = True
                    break
                continue
            if v not in keep:
                t = rename.get(v)
                if t is None:
                    t = rename[v] = fresh()
                new.append(t if l > 0 else -t)
            else:
                new.append(l)
        if not sat:
            out.append(new)
    return out


class EASolver:
    """Incremental engine: ``solve(assumptions)`` may be called repeatedly.

    Assumption literals restrict the outer variables for one call only;
    refinements learnt in earlier calls stay valid because they never depend
    on the assumptions.
    """

    def __init__(self, p: EAProblem, fresh: _Fresh | None = None, seed: int | None = None,
                 minimize: bool = True):
        self.p = p
        self.fresh = fresh or _Fresh(p.max_var())
        self.minimize = minimize
        self.keep = set(p.exists)
        # outer auxiliaries live only in the candidate session; keep them shared
        self.keep.update(v for v in p.outer.vars())
        self.cand = Session(seed=seed)
        self.cand.add_cnf(p.outer)
        self.pos = Session(seed=seed)
        self.pos.add_cnf(p.defs)
        self.pos.add_cnf(p.prop)
        self.rounds = 0
        if p.inner:
            sub = EAProblem(exists=list(p.exists) + list(p.forall), forall=list(p.inner),
                            defs=p.defs, prop=p.nprop, nprop=p.prop)
            self.sub: EASolver | None = EASolver(sub, self.fresh, seed, minimize)
            self.ver = None
        else:
            self.sub = None
            self.ver = Session(seed=seed)
            self.ver.add_cnf(p.defs)
            self.ver.add_cnf(p.nprop)

    def _refute(self, e: list[int], budget: int) -> list[int] | None | EAResult:
        """A universal assignment refuting candidate ``e``, or None if e is a witness."""
        if self.sub is None:
            if not self.ver.solve(e):
                return None
            return self.ver.model_cube(self.p.forall)
        res = self.sub.solve(e, budget)
        if res.status is EAResult.BUDGET:
            return EAResult.BUDGET
        if res.status is EAResult.UNSAT:
            return None
        return [v if res.witness.get(v, False) else -v for v in self.p.forall]

    def solve(self, assumptions: Iterable[int] = (), budget: int = DEFAULT_BUDGET) -> EAOutcome:
        assumptions = list(assumptions)
        p = self.p
        start = self.rounds
        while True:
            if self.rounds - start >= budget:
                return EAOutcome(EAResult.BUDGET, rounds=self.rounds - start)
            if not self.cand.solve(assumptions):
                return EAOutcome(EAResult.UNSAT, rounds=self.rounds - start)
            e = self.cand.model_cube(p.exists)
            a = self._refute(e, budget - (self.rounds - start))
            if a is EAResult.BUDGET:
                return EAOutcome(EAResult.BUDGET, rounds=self.rounds - start)
            if a is None:
                return EAOutcome(EAResult.SAT, {abs(l): l > 0 for l in e}, self.rounds - start)
            self.rounds += 1
            if self.minimize and a:
                a = list(shrink_core(self.pos, a, fixed=e))
            fixed = {abs(l): l > 0 for l in a}
            rename: dict[int, int] = {}
            for c in instantiate(p.defs, fixed, self.keep, self.fresh, rename):
                self.cand.add_clause(c)
            for c in instantiate(p.prop, fixed, self.keep, self.fresh, rename):
                self.cand.add_clause(c)


def solve_ea(p: EAProblem, budget: int = DEFAULT_BUDGET, seed: int | None = None,
             assumptions: Iterable[int] = ()) -> EAOutcome:
    """Decide ∃E ∀A ∃C: outer ∧ defs ∧ prop."""
    return EASolver(p, seed=seed).solve(assumptions, budget)


def check_witness(p: EAProblem, witness: dict[int, bool]) -> bool:
    """Independent re-check that ``witness`` satisfies ∀A ∃C matrix."""
    e = [v if witness.get(v, False) else -v for v in p.exists]
    if not p.inner:
        s = Session()
        s.add_cnf(p.defs)
        s.add_cnf(p.nprop)
        return not s.solve(e)
    sub = EAProblem(exists=list(p.exists) + list(p.forall), forall=list(p.inner),
                    defs=p.defs, prop=p.nprop, nprop=p.prop)
    return solve_ea(sub, assumptions=e).status is EAResult.UNSAT


def to_qdimacs(p: EAProblem) -> str:
    """QDIMACS text for an external QBF solver (matrix = outer ∧ defs ∧ prop)."""
    matrix = p.outer + p.defs + p.prop
    top_e = sorted(set(p.exists) | (p.outer.vars() - set(p.forall) - set(p.inner)))
    inner = sorted(matrix.vars() - set(top_e) - set(p.forall))
    nv = max([0, *matrix.vars(), *p.exists, *p.forall, *p.inner])
    lines = [f"p cnf {nv} {len(matrix)}"]
    if top_e:
        lines.append("e " + " ".join(map(str, top_e)) + " 0")
    if p.forall:
        lines.append("a " + " ".join(map(str, sorted(p.forall))) + " 0")
    if inner:
        lines.append("e " + " ".join(map(str, inner)) + " 0")
    for c in matrix:
        lines.append(" ".join(str(l) for l in sorted(c, key=abs)) + " 0")
    return "\n".join(lines) + "\n"

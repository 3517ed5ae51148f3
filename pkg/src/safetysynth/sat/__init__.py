"""Incremental SAT sessions.

``new_session`` returns the bundled CDCL solver unless the environment
variable ``SAFETYSYNTH_SOLVER`` names an external command speaking the line
protocol in :mod:`safetysynth.sat.external`.
"""

from __future__ import annotations

import enum
import os
from dataclasses import dataclass, field
from typing import Iterable

from ..formula import Cube
from .cdcl import BudgetExceeded, Solver

__all__ = [
    "BudgetExceeded", "SessionClosed", "Solver", "Session", "Status", "SolveOutcome",
    "new_session", "add_clause", "solve_assume", "shrink_core",
]


class SessionClosed(RuntimeError):
    pass


class Status(enum.Enum):
    SAT = "Sat"
    UNSAT = "Unsat"


@dataclass
class SolveOutcome:
    status: Status
    model: dict[int, bool] = field(default_factory=dict)
    core: Cube = field(default_factory=Cube)

    @property
    def sat(self) -> bool:
        return self.status is Status.SAT


class Session:
    """An add-only clause set over one solver; discarded sessions stay dead.

    Variable ids are translated to a dense internal numbering so a session
    only pays for the variables it actually mentions.
    """

    def __init__(self, solver=None, seed: int | None = None, conflict_budget: int | None = None):
        if solver is None:
            solver = _default_solver(seed, conflict_budget)
        self.solver = solver
        self.open = True
        self._int: dict[int, int] = {}
        self._ext: list[int] = [0]

    @property
    def stats(self) -> dict:
        return self.solver.stats

    def close(self) -> None:
        self.open = False
        close = getattr(self.solver, "close", None)
        if close:
            close()

    def _check(self) -> None:
        if not self.open:
            raise SessionClosed("session already consumed")

    def _lit(self, l: int) -> int:
        v = l if l > 0 else -l
        iv = self._int.get(v)
        if iv is None:
            iv = self._int[v] = len(self._ext)
            self._ext.append(v)
        return iv if l > 0 else -iv

    def add_clause(self, lits: Iterable[int]) -> None:
        self._check()
        m = self._lit
        self.solver.add_clause([m(l) for l in lits])

    def add_cnf(self, f: Iterable[Iterable[int]]) -> None:
        self._check()
        add = self.solver.add_clause
        m = self._lit
        for c in f:
            add([m(l) for l in c])

    def solve(self, assumptions: Iterable[int] = ()) -> bool:
        self._check()
        m = self._lit
        return self.solver.solve([m(l) for l in assumptions])

    def value(self, v: int) -> bool:
        iv = self._int.get(v)
        return bool(iv) and self.solver.lit_true(iv)

    def model_cube(self, vars_: Iterable[int]) -> list[int]:
        get = self._int.get
        lt = self.solver.lit_true
        out = []
        for v in vars_:
            iv = get(v)
            out.append(v if iv is not None and lt(iv) else -v)
        return out

    @property
    def core(self) -> list[int]:
        ext = self._ext
        return [ext[l] if l > 0 else -ext[-l] for l in self.solver.core]


def _default_solver(seed, conflict_budget):
    cmd = os.environ.get("SAFETYSYNTH_SOLVER")
    if cmd:
        from .external import ExternalSolver
        return ExternalSolver(cmd)
    return Solver(seed=seed, conflict_budget=conflict_budget)


def new_session(seed: int | None = None, conflict_budget: int | None = None) -> Session:
    return Session(seed=seed, conflict_budget=conflict_budget)


def add_clause(s: Session, c: Iterable[int]) -> None:
    s.add_clause(c)


def solve_assume(s: Session, a: Iterable[int], model_vars: Iterable[int] = ()) -> SolveOutcome:
    """Solve under the assumption cube ``a``.

    The core of an unsat answer is the raw assumption-failure set; use
    :func:`shrink_core` to minimise it.
    """
    if s.solve(list(a)):
        m = s.model_cube(list(model_vars))
        return SolveOutcome(Status.SAT, model={abs(l): l > 0 for l in m})
    return SolveOutcome(Status.UNSAT, core=Cube(s.core))


def shrink_core(s: Session, core: Iterable[int], fixed: Iterable[int] = ()) -> Cube:
    """Deletion-based minimisation of an unsat assumption set.

    ``fixed`` literals are always assumed and never dropped.  The result is
    locally minimal: removing any one literal makes the query satisfiable.
    """
    fixed = list(fixed)
    cur = list(dict.fromkeys(core))
    if s.solve(fixed + cur):
        raise ValueError("shrink_core: theory and core are satisfiable")
    keep = set(s.core)
    cur = [l for l in cur if l in keep]
    i = 0
    while i < len(cur):
        trial = cur[:i] + cur[i + 1:]
        if s.solve(fixed + trial):
            i += 1
        else:
            keep = set(s.core)
            # later literals outside the new core can go as well
            cur = cur[:i] + [l for l in cur[i + 1:] if l in keep]
    return Cube(cur)

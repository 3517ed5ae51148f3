"""Shared data for the learning backends."""

from __future__ import annotations

import enum
import threading
import time
from dataclasses import dataclass, field
from typing import Callable

from ..formula import Cnf, Cube


class Status(enum.Enum):
    REALIZABLE = "Realizable"
    UNREALIZABLE = "Unrealizable"
    BUDGET = "BudgetExceeded"
    FAIL = "Fail"
    UNKNOWN = "Unknown"
    CANCELLED = "Cancelled"
    FAILED = "WorkerFailure"


@dataclass
class LearnOptions:
    optimize: bool = True
    use_rg: bool = False
    use_rc: bool = False
    all_generalizations: bool = False
    compress_every: int = 50
    hs_node_limit: int = 64
    budget: int | None = None
    seed: int | None = None
    on_event: Callable[[str, dict], None] | None = None


@dataclass
class SynthesisVerdict:
    status: Status
    region: Cnf | None = None
    stats: dict = field(default_factory=dict)
    mode: str = "strict"
    detail: str = ""

    @property
    def realizable(self) -> bool:
        return self.status is Status.REALIZABLE

    @property
    def unrealizable(self) -> bool:
        return self.status is Status.UNREALIZABLE


@dataclass
class LearnState:
    """F, its lazy copy F̂ (always a prefix of F's clause list), U and precise."""

    F: Cnf
    fhat_len: int
    U: Cnf = field(default_factory=Cnf)
    precise: bool = True
    cex_db: list[tuple[Cube, Cube]] = field(default_factory=list)
    stats: dict = field(default_factory=lambda: {
        "iterations": 0, "clauses_learned": 0, "restarts": 0, "u_clauses": 0,
        "solver_queries": 0, "cube_sizes": []})

    @property
    def Fhat(self) -> Cnf:
        return Cnf(self.F.clauses[: self.fhat_len])


def emit(opts: LearnOptions, kind: str, **data) -> None:
    if opts.on_event is not None:
        opts.on_event(kind, data)


def consistent_with(cube, init: Cube) -> bool:
    """PropSat(cube ∧ I) for a cube I."""
    return not any(-l in init for l in cube)


class Stopwatch:
    def __init__(self):
        self.t0 = time.perf_counter()

    def ms(self) -> float:
        return (time.perf_counter() - self.t0) * 1000.0


class Cancel(threading.Event):
    """Cancellation token checked at loop heads."""

"""Parallel LearnSat with a shared clause database.

Two LearnSat workers (both with reachability generalization, distinct
seeds) share their F clauses and their U clauses.  F̂ is global: it is the
prefix of the shared F that was current when some worker last restarted,
identified by an epoch number.  U clauses are only valid for the F̂ they
were computed against, so they carry the epoch and are dropped by workers
that are already in a later one.  A third thread can generalize the
counterexample states found by the workers with a hitting-set tree.
"""

from __future__ import annotations

import logging
import queue
import threading
from dataclasses import dataclass, replace

from .formula import Cnf, Cube, negate_cube
from .game import SafetySpec
from .learning.common import Cancel, LearnOptions, Status, Stopwatch, SynthesisVerdict, consistent_with
from .learning.hstree import hs_tree
from .learning.learnsat import LearnSat, consistent_with_all, learn_sat
from .sat import Session
from .verify import Mode, check_winning_region

log = logging.getLogger(__name__)


@dataclass
class SharedEntry:
    clause: tuple[int, ...]
    origin: str
    epoch: int


class SharedClauseDb:
    """Append-only clause log with per-reader cursors and a global F̂ epoch."""

    def __init__(self):
        self._lock = threading.Lock()
        self.f: list[SharedEntry] = []
        self.u: list[SharedEntry] = []
        self.epoch = 0
        self.fhat_len = 0  # number of shared F clauses inside F̂

    def push_f(self, clause, origin: str) -> None:
        with self._lock:
            self.f.append(SharedEntry(tuple(clause), origin, self.epoch))

    def push_u(self, clause, origin: str, epoch: int) -> None:
        with self._lock:
            if epoch == self.epoch:
                self.u.append(SharedEntry(tuple(clause), origin, epoch))

    def read_f(self, cursor: int) -> list[SharedEntry]:
        with self._lock:
            return self.f[cursor:]

    def read_u(self, cursor: int) -> list[SharedEntry]:
        with self._lock:
            return self.u[cursor:]

    def bump(self) -> tuple[int, int]:
        """Start a new epoch whose F̂ is everything logged so far."""
        with self._lock:
            self.epoch += 1
            self.fhat_len = len(self.f)
            return self.epoch, self.fhat_len

    def snapshot(self) -> tuple[int, int]:
        with self._lock:
            return self.epoch, self.fhat_len


class CexDb:
    """Counterexample (state, input) pairs handed to the generalizer."""

    def __init__(self, maxsize: int = 1024):
        self.q: queue.Queue = queue.Queue(maxsize)

    def put(self, x: Cube, i: Cube) -> None:
        try:
            self.q.put_nowait((x, i))
        except queue.Full:
            pass

    def get(self, timeout: float = 0.05):
        try:
            return self.q.get(timeout=timeout)
        except queue.Empty:
            return None


class SharedLearnSat(LearnSat):
    """A LearnSat worker whose F is P followed by the shared log, in log order."""

    def __init__(self, spec, opts, cancel, name, db: SharedClauseDb, cex: CexDb | None):
        self.db = db
        self.cex = cex
        self.base_len = len(spec.P)
        self._f_cursor = 0
        self._ushared_cursor = 0
        self.epoch = 0
        super().__init__(spec, opts, cancel, name)
        self.state.stats["imported_f"] = 0
        self.state.stats["imported_u"] = 0

    def _import_f(self) -> int:
        new = self.db.read_f(self._f_cursor)
        self._f_cursor += len(new)
        for e in new:
            self.state.F.add(e.clause)
            if e.origin != self.name:
                self.state.stats["imported_f"] += 1
        return len(new)

    def _adopt(self, epoch: int, fhat: int) -> None:
        self._import_f()
        st = self.state
        st.fhat_len = self.base_len + fhat
        st.U = Cnf()
        st.precise = st.fhat_len == len(st.F)
        self.epoch = epoch
        self._ushared_cursor = len(self.db.u)

    def _pull(self) -> bool:
        epoch, fhat = self.db.snapshot()
        if epoch != self.epoch:
            self._adopt(epoch, fhat)
            return True
        if self._import_f():
            self.state.precise = False
        for e in self.db.read_u(self._ushared_cursor):
            self._ushared_cursor += 1
            if e.origin != self.name and e.epoch == self.epoch:
                self.state.U.add(e.clause)
                self.state.stats["imported_u"] += 1
        return False

    def add_clause_to_F(self, clause) -> None:
        self.db.push_f(clause, self.name)
        self.state.stats["clauses_learned"] += 1
        self._import_f()

    def _push_u(self, clause) -> None:
        self.db.push_u(clause, self.name, self.epoch)

    def _push_cex(self, x: Cube, i: Cube) -> None:
        if self.cex is not None:
            self.cex.put(x, i)

    def _request_restart(self) -> None:
        self._import_f()
        epoch, fhat = self.db.bump()
        self._adopt(epoch, fhat)


class Generalizer:
    """Turns counterexample states into all their minimal losing sub-cubes."""

    def __init__(self, spec: SafetySpec, db: SharedClauseDb, cex: CexDb, cancel: Cancel,
                 node_limit: int = 64, name: str = "generalizer"):
        self.spec, self.db, self.cex, self.cancel = spec, db, cex, cancel
        self.name = name
        self.node_limit = node_limit
        self.F = spec.P.copy()
        self._cursor = 0
        self._s = Session()
        self._s.add_cnf(spec.T)
        self._nmap = dict(zip(spec.x, spec.xn))
        self._synced = 0
        self.stats = {"processed": 0, "clauses_learned": 0, "solver_queries": 0}
        self.lost = False

    def _sync(self) -> None:
        for e in self.db.read_f(self._cursor):
            self._cursor += 1
            self.F.add(e.clause)
        nm = self._nmap
        while self._synced < len(self.F):
            c = self.F.clauses[self._synced]
            self._synced += 1
            self._s.add_clause(c)
            self._s.add_clause([nm[l] if l > 0 else -nm[-l] for l in c])

    def run(self) -> None:
        spec = self.spec
        while not self.cancel.is_set():
            item = self.cex.get()
            if item is None:
                continue
            x, i = item
            self._sync()
            if not self.F.holds({abs(l): l > 0 for l in x}):
                continue
            self.stats["processed"] += 1
            i = list(i)

            def losing(cube: list[int]) -> bool:
                self.stats["solver_queries"] += 1
                return not self._s.solve(list(cube) + i)

            if not losing(list(x)):
                continue
            for g in hs_tree(x, losing, node_limit=self.node_limit):
                if self.cancel.is_set():
                    return
                if consistent_with(g, spec.init):
                    self.lost = True
                    return
                self.db.push_f(list(negate_cube(g)), self.name)
                self.stats["clauses_learned"] += 1


def synth_parallel(spec: SafetySpec, threads: int = 2, opts: LearnOptions | None = None,
                   seed: int = 0, verify: bool = True) -> SynthesisVerdict:
    """Run 1 to 3 cooperating threads and return the first verdict."""
    if threads not in (1, 2, 3):
        raise ValueError("threads must be 1, 2 or 3")
    base = opts or LearnOptions()
    watch = Stopwatch()
    if threads == 1:
        v = learn_sat(spec, replace(base, seed=seed))
        v.stats["threads"] = {"learnsat": dict(v.stats)}
        return _finish(spec, v, verify, watch)
    if not consistent_with_all(spec):
        return SynthesisVerdict(Status.UNREALIZABLE, None, {"wall_time_ms": watch.ms()}, "strict",
                                "initial state unsafe")
    cancel = Cancel()
    db = SharedClauseDb()
    cex = CexDb() if threads == 3 else None
    results: queue.Queue = queue.Queue()
    workers = []
    for k in range(2):
        wopts = replace(base, use_rg=True, compress_every=0, seed=seed * 2 + k + 1)
        workers.append(SharedLearnSat(spec, wopts, cancel, f"learnsat{k}", db, cex))
    gen = Generalizer(spec, db, cex, cancel, base.hs_node_limit) if cex is not None else None

    def work(w: SharedLearnSat) -> None:
        try:
            v = w.run()
        except Exception as exc:  # reported as a worker failure
            log.exception("worker %s failed", w.name)
            results.put((w.name, SynthesisVerdict(Status.FAILED, None, {}, "strict", repr(exc))))
        else:
            results.put((w.name, v))
        cancel.set()

    def gen_work() -> None:
        try:
            gen.run()
        except Exception as exc:
            log.exception("generalizer failed")
            results.put((gen.name, SynthesisVerdict(Status.FAILED, None, {}, "strict", repr(exc))))
            cancel.set()
            return
        if gen.lost:
            results.put((gen.name, SynthesisVerdict(Status.UNREALIZABLE, None, {}, "strict",
                                                    "generalized cube meets I")))
            cancel.set()

    ths = [threading.Thread(target=work, args=(w,), name=w.name, daemon=True) for w in workers]
    if gen is not None:
        ths.append(threading.Thread(target=gen_work, name=gen.name, daemon=True))
    for t in ths:
        t.start()
    for t in ths:
        t.join()
    verdict = None
    collected = []
    while not results.empty():
        collected.append(results.get())
    for _, v in collected:
        if v.status is Status.FAILED:
            verdict = v
            break
    if verdict is None:
        for _, v in collected:
            if v.status in (Status.REALIZABLE, Status.UNREALIZABLE, Status.BUDGET):
                verdict = v
                break
    if verdict is None:
        verdict = SynthesisVerdict(Status.CANCELLED, None, {}, "strict")
    blocks = {w.name: dict(w.state.stats) for w in workers}
    if gen is not None:
        blocks[gen.name] = dict(gen.stats)
    stats = {
        "threads": blocks,
        "clauses_learned": sum(b.get("clauses_learned", 0) for b in blocks.values()),
        "restarts": sum(b.get("restarts", 0) for b in blocks.values()),
        "solver_queries": sum(b.get("solver_queries", 0) for b in blocks.values()),
        "epochs": db.epoch,
    }
    verdict = SynthesisVerdict(verdict.status, verdict.region, stats, verdict.mode, verdict.detail)
    return _finish(spec, verdict, verify, watch)


def _finish(spec, v: SynthesisVerdict, verify: bool, watch: Stopwatch) -> SynthesisVerdict:
    v.stats["wall_time_ms"] = watch.ms()
    if verify and v.status is Status.REALIZABLE:
        rep = check_winning_region(spec, v.region, Mode(v.mode))
        v.stats["verified"] = rep.ok
        if not rep.ok:
            return SynthesisVerdict(Status.FAILED, v.region, v.stats, v.mode,
                                    "region failed re-verification: " + rep.summary())
    return v

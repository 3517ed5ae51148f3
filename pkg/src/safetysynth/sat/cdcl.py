"""Bundled incremental CDCL solver.

Two-watched-literal propagation, first-UIP learning with local clause
minimisation, VSIDS on a binary heap, phase saving, Luby restarts and
activity-based learnt-clause reduction.  Assumptions are decided first; on
failure the subset of assumptions involved is returned as the core.

Internally literal ``v`` is ``2*v`` and ``-v`` is ``2*v + 1``.
"""

from __future__ import annotations

import random
from typing import Iterable


class BudgetExceeded(Exception):
    """A resource budget ran out before a definite answer was found."""


def _luby(i: int) -> int:
    size, seq = 1, 0
    while size < i + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != i:
        size = (size - 1) >> 1
        seq -= 1
        i = i % size
    return 1 << seq


class Solver:
    def __init__(self, seed: int | None = None, conflict_budget: int | None = None):
        self.ok = True
        self.nvars = 0
        self.val: list[int] = [0, 0]        # per internal literal: 1 true, -1 false, 0 unassigned
        self.level: list[int] = [0]
        self.reason: list[list[int] | None] = [None]
        self.activity: list[float] = [0.0]
        self.polarity: list[int] = [1]      # 1 -> prefer negative literal
        self.seen: list[int] = [0]
        self.watches: list[list[list[int]]] = [[], []]
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.learnts: list[list[int]] = []
        self.clause_act: dict[int, float] = {}
        self.n_clauses = 0
        self.var_inc = 1.0
        self.cla_inc = 1.0
        self.max_learnts = 2000.0
        # heap over variables ordered by activity
        self.heap: list[int] = []
        self.heap_pos: list[int] = [-1]
        self.rng = random.Random(seed) if seed is not None else None
        self.conflict_budget = conflict_budget
        self.model: list[int] = []
        self.core: list[int] = []
        self.stats = {"queries": 0, "conflicts": 0, "decisions": 0,
                      "propagations": 0, "additions": 0}

    # ------------------------------------------------------------------ vars

    def _grow(self, v: int) -> None:
        while self.nvars < v:
            self.nvars += 1
            x = self.nvars
            self.val.extend((0, 0))
            self.level.append(0)
            self.reason.append(None)
            if self.rng is not None:
                self.activity.append(self.rng.random() * 1e-5)
                self.polarity.append(self.rng.randrange(2))
            else:
                self.activity.append(0.0)
                self.polarity.append(1)
            self.seen.append(0)
            self.watches.append([])
            self.watches.append([])
            self.heap_pos.append(-1)
            self._heap_insert(x)

    # ------------------------------------------------------------------ heap

    def _heap_up(self, i: int) -> None:
        heap, pos, act = self.heap, self.heap_pos, self.activity
        x = heap[i]
        ax = act[x]
        while i > 0:
            p = (i - 1) >> 1
            y = heap[p]
            if act[y] >= ax:
                break
            heap[i] = y
            pos[y] = i
            i = p
        heap[i] = x
        pos[x] = i

    def _heap_down(self, i: int) -> None:
        heap, pos, act = self.heap, self.heap_pos, self.activity
        n = len(heap)
        x = heap[i]
        ax = act[x]
        while True:
            c = 2 * i + 1
            if c >= n:
                break
            if c + 1 < n and act[heap[c + 1]] > act[heap[c]]:
                c += 1
            y = heap[c]
            if act[y] <= ax:
                break
            heap[i] = y
            pos[y] = i
            i = c
        heap[i] = x
        pos[x] = i

    def _heap_insert(self, x: int) -> None:
        if self.heap_pos[x] >= 0:
            return
        self.heap.append(x)
        self.heap_pos[x] = len(self.heap) - 1
        self._heap_up(len(self.heap) - 1)

    def _heap_pop(self) -> int:
        heap, pos = self.heap, self.heap_pos
        x = heap[0]
        last = heap.pop()
        pos[x] = -1
        if heap:
            heap[0] = last
            pos[last] = 0
            self._heap_down(0)
        return x

    def _bump_var(self, x: int) -> None:
        act = self.activity
        act[x] += self.var_inc
        if act[x] > 1e100:
            for k in range(1, self.nvars + 1):
                act[k] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_pos[x] >= 0:
            self._heap_up(self.heap_pos[x])

    def _bump_clause(self, c: list[int]) -> None:
        k = id(c)
        a = self.clause_act.get(k)
        if a is None:
            return
        a += self.cla_inc
        self.clause_act[k] = a
        if a > 1e20:
            for key in self.clause_act:
                self.clause_act[key] *= 1e-20
            self.cla_inc *= 1e-20

    # ------------------------------------------------------------------ clauses

    def add_clause(self, lits: Iterable[int]) -> bool:
        """Add a clause of DIMACS literals.  Returns False once the theory is unsat."""
        self.stats["additions"] += 1
        if self.trail_lim:
            self._cancel_until(0)
        if not self.ok:
            return False
        ilits = set()
        for l in lits:
            if l == 0:
                raise ValueError("0 is not a literal")
            v = l if l > 0 else -l
            if v > self.nvars:
                self._grow(v)
            ilits.add(2 * v if l > 0 else 2 * v + 1)
        val = self.val
        c = []
        for p in ilits:
            if p ^ 1 in ilits or val[p] == 1:
                return True
            if val[p] == 0:
                c.append(p)
        if not c:
            self.ok = False
            return False
        if len(c) == 1:
            self._enqueue(c[0], None)
            if self._propagate() is not None:
                self.ok = False
                return False
            return True
        self.watches[c[0]].append(c)
        self.watches[c[1]].append(c)
        self.n_clauses += 1
        return True

    def _enqueue(self, p: int, reason) -> None:
        v = p >> 1
        self.val[p] = 1
        self.val[p ^ 1] = -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(p)

    # ------------------------------------------------------------------ propagation

    def _propagate(self):
        val = self.val
        watches = self.watches
        trail = self.trail
        level = self.level
        reason = self.reason
        lvl = len(self.trail_lim)
        confl = None
        props = 0
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            props += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            n = len(ws)
            i = j = 0
            while i < n:
                c = ws[i]
                i += 1
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = c
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(c)
                        break
                else:
                    ws[j] = c
                    j += 1
                    if val[first] == -1:
                        confl = c
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                    else:
                        v = first >> 1
                        val[first] = 1
                        val[first ^ 1] = -1
                        level[v] = lvl
                        reason[v] = c
                        trail.append(first)
            del ws[j:]
            if confl is not None:
                break
        self.stats["propagations"] += props
        return confl

    # ------------------------------------------------------------------ search

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        val, pol, trail = self.val, self.polarity, self.trail
        pos = self.heap_pos
        start = self.trail_lim[lvl]
        for k in range(len(trail) - 1, start - 1, -1):
            p = trail[k]
            v = p >> 1
            val[p] = 0
            val[p ^ 1] = 0
            self.reason[v] = None
            pol[v] = p & 1
            if pos[v] < 0:
                self._heap_insert(v)
        del trail[start:]
        del self.trail_lim[lvl:]
        self.qhead = len(trail)

    def _analyze(self, confl: list[int]):
        seen = self.seen
        level = self.level
        reason = self.reason
        trail = self.trail
        cur = len(self.trail_lim)
        learnt = [0]
        to_clear = []
        pathc = 0
        p = -1
        idx = len(trail) - 1
        c = confl
        while True:
            self._bump_clause(c)
            for q in (c if p == -1 else c[1:]):
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    to_clear.append(v)
                    self._bump_var(v)
                    if level[v] >= cur:
                        pathc += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            c = reason[v]
            seen[v] = 0
            pathc -= 1
            if pathc <= 0:
                break
        learnt[0] = p ^ 1
        # local minimisation: drop literals implied by others in the clause
        out = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r is None:
                out.append(q)
                continue
            for t in r:
                tv = t >> 1
                if tv != q >> 1 and not seen[tv] and level[tv] > 0:
                    out.append(q)
                    break
        for v in to_clear:
            seen[v] = 0
        learnt = out
        if len(learnt) == 1:
            bt = 0
        else:
            mi = 1
            for k in range(2, len(learnt)):
                if level[learnt[k] >> 1] > level[learnt[mi] >> 1]:
                    mi = k
            learnt[1], learnt[mi] = learnt[mi], learnt[1]
            bt = level[learnt[1] >> 1]
        return learnt, bt

    def _analyze_final(self, p: int) -> list[int]:
        """Assumption literals (internal) responsible for ``p`` being false."""
        out = [p ^ 1]
        if not self.trail_lim:
            return out
        seen = self.seen
        seen[p >> 1] = 1
        for k in range(len(self.trail) - 1, self.trail_lim[0] - 1, -1):
            q = self.trail[k]
            v = q >> 1
            if seen[v]:
                r = self.reason[v]
                if r is None:
                    if self.level[v] > 0:
                        out.append(q)
                else:
                    for t in r[1:]:
                        if self.level[t >> 1] > 0:
                            seen[t >> 1] = 1
                seen[v] = 0
        seen[p >> 1] = 0
        return out

    def _reduce_db(self) -> None:
        acts = self.clause_act
        reason = self.reason
        locked = set()
        for p in self.trail:
            r = reason[p >> 1]
            if r is not None:
                locked.add(id(r))
        cands = sorted(self.learnts, key=lambda c: acts.get(id(c), 0.0))
        half = len(cands) // 2
        drop = set()
        for c in cands[:half]:
            if len(c) > 2 and id(c) not in locked:
                drop.add(id(c))
        self.max_learnts *= 1.1
        if not drop:
            return
        self.learnts = [c for c in self.learnts if id(c) not in drop]
        for k in drop:
            acts.pop(k, None)
        for ws in self.watches:
            if ws:
                ws[:] = [c for c in ws if id(c) not in drop]

    def _pick_branch(self) -> int:
        val = self.val
        while self.heap:
            v = self._heap_pop()
            if val[2 * v] == 0:
                return 2 * v + self.polarity[v]
        return -1

    def _search(self, nof_conflicts: int, assumptions: list[int]):
        """Returns True (sat), False (unsat) or None (restart)."""
        conflicts = 0
        val = self.val
        stats = self.stats
        while True:
            confl = self._propagate()
            if confl is not None:
                conflicts += 1
                stats["conflicts"] += 1
                self._budget_used += 1
                if not self.trail_lim:
                    self.ok = False
                    self.core = []
                    return False
                learnt, bt = self._analyze(confl)
                self._cancel_until(bt)
                if len(learnt) == 1:
                    self._enqueue(learnt[0], None)
                else:
                    self.watches[learnt[0]].append(learnt)
                    self.watches[learnt[1]].append(learnt)
                    self.learnts.append(learnt)
                    self.clause_act[id(learnt)] = self.cla_inc
                    self._enqueue(learnt[0], learnt)
                self.var_inc *= 1.0 / 0.95
                self.cla_inc *= 1.0 / 0.999
                if self.conflict_budget is not None and self._budget_used > self.conflict_budget:
                    self._cancel_until(0)
                    raise BudgetExceeded(f"conflict budget {self.conflict_budget} exhausted")
                continue
            if conflicts >= nof_conflicts:
                self._cancel_until(0)
                return None
            if len(self.learnts) - len(self.trail) >= self.max_learnts:
                self._reduce_db()
            nxt = -1
            while len(self.trail_lim) < len(assumptions):
                p = assumptions[len(self.trail_lim)]
                if val[p] == 1:
                    self.trail_lim.append(len(self.trail))
                elif val[p] == -1:
                    self.core = self._analyze_final(p ^ 1)
                    return False
                else:
                    nxt = p
                    break
            if nxt == -1:
                nxt = self._pick_branch()
                if nxt == -1:
                    return True
                stats["decisions"] += 1
            self.trail_lim.append(len(self.trail))
            self._enqueue(nxt, None)

    def solve(self, assumptions: Iterable[int] = ()) -> bool:
        """Decide the theory under the given DIMACS assumption literals."""
        self.stats["queries"] += 1
        self.model = []
        self.core = []
        ext = list(assumptions)
        ia = []
        for l in ext:
            v = l if l > 0 else -l
            if v > self.nvars:
                self._grow(v)
            ia.append(2 * v if l > 0 else 2 * v + 1)
        if not self.ok:
            return False
        self._budget_used = 0
        self._cancel_until(0)
        if self._propagate() is not None:
            self.ok = False
            return False
        status = None
        k = 0
        while status is None:
            status = self._search(_luby(k) * 100, ia)
            k += 1
        if status:
            self.model = self.val[:]
        elif self.core:
            assumed = set(ext)
            core = [(p >> 1) if not p & 1 else -(p >> 1) for p in self.core]
            self.core = list(dict.fromkeys(l for l in core if l in assumed))
        self._cancel_until(0)
        return status

    # ------------------------------------------------------------------ results

    def value(self, v: int) -> bool | None:
        """Model value of variable ``v`` after a satisfiable ``solve``."""
        if not self.model:
            raise RuntimeError("no model available")
        if v > self.nvars:
            return None
        x = self.model[2 * v]
        return None if x == 0 else x == 1

    def lit_true(self, lit: int) -> bool:
        v = lit if lit > 0 else -lit
        if v > self.nvars:
            return lit < 0
        x = self.model[2 * v]
        return (x == 1) == (lit > 0)

    def model_cube(self, vars_: Iterable[int]) -> list[int]:
        """Model restricted to ``vars_`` as DIMACS literals (unassigned -> false)."""
        m = self.model
        n = self.nvars
        return [v if v <= n and m[2 * v] == 1 else -v for v in vars_]

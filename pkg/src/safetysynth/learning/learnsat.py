"""LearnSat: learning a winning region with two competing SAT sessions."""

from __future__ import annotations

from ..formula import Cnf, Cube, Group, cnf_negate, negate_cube
from ..game import SafetySpec
from ..sat import Session, shrink_core
from .common import (LearnOptions, LearnState, Status, Stopwatch, SynthesisVerdict,
                     consistent_with, emit)


class LearnSat:
    """One LearnSat run.

    s∃ holds F ∧ U ∧ T ∧ ¬F̂' and lives until F̂ is refreshed; s∀ holds
    F ∧ T ∧ F' for the whole run.  With RG, s∀ additionally carries the
    reachability constraint of the generalization check behind a guard.

    The ``_pull`` / ``_push_*`` hooks let the parallel backend share clauses
    between workers; in a single run they are no-ops.
    """

    def __init__(self, spec: SafetySpec, opts: LearnOptions | None = None, cancel=None, name: str = "learnsat"):
        self.spec = spec
        self.opts = opts or LearnOptions()
        self.cancel = cancel
        self.name = name
        self.seed = self.opts.seed
        self.state = LearnState(F=spec.P.copy(), fhat_len=len(spec.P))
        self.xset = set(spec.x)
        self._s_exists: Session | None = None
        self._e_cursor = 0
        self._u_cursor = 0
        self._build_forall()

    # -- sessions -----------------------------------------------------------

    def _build_forall(self) -> None:
        spec = self.spec
        s = Session(seed=self.seed)
        s.add_cnf(spec.T)
        self._nmap = dict(zip(spec.x, spec.xn))
        self._a_cursor = 0
        self.s_forall = s
        self._rg = None
        if self.opts.use_rg:
            vm = spec.vm
            pb = spec.prev_block()
            r = vm.new(Group.TEMP, "rg_on")
            s_init = vm.new(Group.TEMP, "rg_init")
            s_pred = vm.new(Group.TEMP, "rg_pred")
            s.add_clause([-r, s_init, s_pred])
            for l in spec.init:
                s.add_clause([-s_init, l])
            for c in pb["T"]:
                s.add_clause([-s_pred, *c])
            self._rg = (r, s_pred, dict(zip(spec.x, pb["x"])))
        self._sync_forall()

    def _sync_forall(self) -> None:
        F = self.state.F.clauses
        s = self.s_forall
        nm = self._nmap
        while self._a_cursor < len(F):
            c = F[self._a_cursor]
            self._a_cursor += 1
            s.add_clause(c)
            s.add_clause([nm[l] if l > 0 else -nm[-l] for l in c])
            if self._rg is not None:
                _, s_pred, pm = self._rg
                s.add_clause([-s_pred] + [pm[l] if l > 0 else -pm[-l] for l in c])

    def _restart_exists(self) -> None:
        st = self.state
        spec = self.spec
        if self._s_exists is not None:
            self._s_exists.close()
        s = Session(seed=self.seed)
        s.add_cnf(spec.T)
        s.add_cnf(cnf_negate(spec.prime(st.Fhat), spec.vm))
        self._rc = None
        if self.opts.use_rc:
            # x must be initial or have a different predecessor in F
            vm = spec.vm
            pb = spec.prev_block()
            s_init = vm.new(Group.TEMP, "rc_init")
            s_pred = vm.new(Group.TEMP, "rc_pred")
            s.add_clause([s_init, s_pred])
            for l in spec.init:
                s.add_clause([-s_init, l])
            for c in pb["T"]:
                s.add_clause([-s_pred, *c])
            ds = []
            for xv, xs in zip(spec.x, pb["x"]):
                d = vm.new(Group.TEMP, "rc_d")
                ds.append(d)
                s.add_clause([-d, xv, xs])
                s.add_clause([-d, -xv, -xs])
            s.add_clause([-s_pred, *ds])
            self._rc = (s_pred, dict(zip(spec.x, pb["x"])))
        self._s_exists = s
        self._e_cursor = 0
        self._u_cursor = 0
        self._sync_exists()

    def _sync_exists(self) -> None:
        s = self._s_exists
        F = self.state.F.clauses
        while self._e_cursor < len(F):
            c = F[self._e_cursor]
            s.add_clause(c)
            if self._rc is not None:
                s_pred, pm = self._rc
                s.add_clause([-s_pred] + [pm[l] if l > 0 else -pm[-l] for l in c])
            self._e_cursor += 1
        U = self.state.U.clauses
        while self._u_cursor < len(U):
            s.add_clause(U[self._u_cursor])
            self._u_cursor += 1

    # -- hooks for the parallel backend -------------------------------------

    def _pull(self) -> bool:
        """Import external updates; return True if s∃ must be restarted."""
        return False

    def _push_clause(self, clause: list[int]) -> None:
        pass

    def _push_u(self, clause: list[int]) -> None:
        pass

    def _push_cex(self, x: Cube, i: Cube) -> None:
        pass

    def _request_restart(self) -> None:
        """Loop query Unsat with precise=false: refresh F̂ := F and reset U."""
        st = self.state
        self._maybe_compress()
        st.fhat_len = len(st.F)
        st.U = Cnf()
        st.precise = True

    # -- generalization -----------------------------------------------------

    def _rg_drop(self, xg: list[int], i: list[int]) -> list[int]:
        """Drop further literals while the RG-restricted escape check stays Unsat."""
        r, _, pm = self._rg
        s = self.s_forall
        vm = self.spec.vm
        for l in sorted(xg, key=abs):
            if len(xg) <= 1:
                break
            xt = [m for m in xg if m != l]
            act = vm.new(Group.TEMP, "rg_act")
            s.add_clause([-act] + [-pm[m] if m > 0 else pm[-m] for m in xt])
            self.state.stats["solver_queries"] += 1
            if not s.solve([r, act, *xt, *i]):
                xg = xt
            s.add_clause([-act])
        return xg

    def _maybe_compress(self) -> None:
        every = self.opts.compress_every
        st = self.state
        if every and st.stats["clauses_learned"] - getattr(self, "_last_compress", 0) >= every:
            from ..formula import compress

            self._last_compress = st.stats["clauses_learned"]
            before = len(st.F)
            st.F = compress(st.F)
            # the sessions keep the old (equivalent) clauses; restart bookkeeping
            self._build_forall()
            emit(self.opts, "compress", before=before, after=len(st.F))

    # -- main loop ----------------------------------------------------------

    def add_clause_to_F(self, clause: list[int]) -> None:
        self.state.F.add(clause)
        self.state.stats["clauses_learned"] += 1

    def run(self) -> SynthesisVerdict:
        spec, opts, st = self.spec, self.opts, self.state
        watch = Stopwatch()
        x_vars, i_vars, c_vars = spec.x, spec.i, spec.c
        mode = "rc" if opts.use_rc else "strict"
        if not consistent_with_all(spec):
            return self._verdict(Status.UNREALIZABLE, watch, mode, "initial state unsafe")
        self._restart_exists()
        while True:
            if self.cancel is not None and self.cancel.is_set():
                return self._verdict(Status.CANCELLED, watch, mode)
            if opts.budget is not None and st.stats["iterations"] >= opts.budget:
                return self._verdict(Status.BUDGET, watch, mode)
            st.stats["iterations"] += 1
            if self._pull():
                self._restart_exists()
            self._sync_exists()
            self._sync_forall()
            st.stats["solver_queries"] += 1
            if not self._s_exists.solve():
                if st.precise:
                    return self._verdict(Status.REALIZABLE, watch, mode)
                self._request_restart()
                st.stats["restarts"] += 1
                emit(opts, "restart", worker=self.name)
                self._restart_exists()
                continue
            x = self._s_exists.model_cube(x_vars)
            i = self._s_exists.model_cube(i_vars)
            st.cex_db.append((Cube(x), Cube(i)))
            self._push_cex(Cube(x), Cube(i))
            st.stats["solver_queries"] += 1
            if self.s_forall.solve(x + i):
                c = self.s_forall.model_cube(c_vars)
                core = shrink_core(self._s_exists, x + i, fixed=c)
                st.stats["solver_queries"] += len(core) + 1
                ucl = list(negate_cube(core))
                st.U.add(ucl)
                st.stats["u_clauses"] += 1
                self._push_u(ucl)
                continue
            raw = [l for l in self.s_forall.core if abs(l) in self.xset]
            xg = list(shrink_core(self.s_forall, raw, fixed=i))
            st.stats["solver_queries"] += len(raw) + 1
            if self._rg is not None:
                xg = self._rg_drop(xg, i)
            st.stats["cube_sizes"].append(len(xg))
            if consistent_with(xg, spec.init):
                return self._verdict(Status.UNREALIZABLE, watch, mode, "generalized cube meets I")
            clause = list(negate_cube(xg))
            self.add_clause_to_F(clause)
            self._push_clause(clause)
            emit(opts, "clause", worker=self.name, clause=clause)
            if opts.optimize:
                st.precise = False
            else:
                self._request_restart()
                self._restart_exists()

    def _verdict(self, status: Status, watch: Stopwatch, mode: str, detail: str = "") -> SynthesisVerdict:
        st = self.state
        stats = dict(st.stats)
        stats["wall_time_ms"] = watch.ms()
        stats["clauses"] = len(st.F)
        emit(self.opts, "verdict", worker=self.name, status=status.value)
        region = st.F.copy() if status is Status.REALIZABLE else None
        return SynthesisVerdict(status, region, stats, mode, detail)


def consistent_with_all(spec: SafetySpec) -> bool:
    """Initial state satisfies P (otherwise the game is lost immediately)."""
    return spec.P.holds({abs(l): l > 0 for l in spec.init})


def learn_sat(spec: SafetySpec, opts: LearnOptions | None = None, cancel=None) -> SynthesisVerdict:
    return LearnSat(spec, opts, cancel).run()

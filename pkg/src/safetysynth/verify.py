"""Independent checks: winning-region conditions and the explicit-state oracle."""

from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field

import numpy as np

from .formula import Cnf, cnf_negate
from .game import SafetySpec
from .qesolve import EAResult, solve_ea
from .reachopt import counterexample_query, reach_constraint, prev_vars
from .sat import Session


class Mode(enum.Enum):
    STRICT = "strict"
    RG = "rg"
    RC = "rc"


@dataclass
class RegionReport:
    mode: Mode
    initial: bool
    safe: bool
    step: bool
    witness: dict[str, dict[str, bool]] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return self.initial and self.safe and self.step

    def summary(self) -> str:
        return " ".join("PASS" if b else "FAIL" for b in (self.initial, self.safe, self.step))

    def to_json(self) -> dict:
        return {"mode": self.mode.value, "initial": self.initial, "safe": self.safe,
                "step": self.step, "witness": self.witness}


def _named(spec: SafetySpec, cube) -> dict[str, bool]:
    return {spec.vm.name(abs(l)): l > 0 for l in cube}


def check_winning_region(spec: SafetySpec, W: Cnf, mode: Mode | str = Mode.STRICT) -> RegionReport:
    """Check (I) I ⇒ W, (II) W ⇒ P and the step condition for ``mode``.

    Strict: no state of W from which the antagonist forces leaving W.
    RG: the same, restricted to states of W that are initial or have a
    predecessor in W.  RC: restricted further to initial states or states
    with a predecessor in W different from themselves.
    """
    mode = Mode(mode)
    if not W.vars() <= set(spec.x):
        raise ValueError("region must mention state variables only")
    witness: dict[str, dict[str, bool]] = {}
    s = Session()
    s.add_cnf(cnf_negate(W, spec.vm))
    init_ok = not s.solve(list(spec.init))
    if not init_ok:
        witness["initial"] = _named(spec, s.model_cube(spec.x))
    s = Session()
    s.add_cnf(W)
    s.add_cnf(cnf_negate(spec.P, spec.vm))
    safe_ok = not s.solve()
    if not safe_ok:
        witness["safe"] = _named(spec, s.model_cube(spec.x))
    if mode is Mode.STRICT or mode is Mode.RC:
        skel = counterexample_query(spec, W, rc=mode is Mode.RC)
    else:
        skel = counterexample_query(spec, W)
        rcon, _ = reach_constraint(spec, W)
        skel.outer.extend(rcon)
        skel.exists += prev_vars(spec)
    res = solve_ea(skel.problem())
    step_ok = res.status is EAResult.UNSAT
    if res.status is EAResult.SAT:
        witness["step"] = {spec.vm.name(v): res.witness.get(v, False) for v in spec.x + spec.i}
    elif res.status is EAResult.BUDGET:
        witness["step"] = {}
    return RegionReport(mode, init_ok, safe_ok, step_ok, witness)


# ---------------------------------------------------------------------------
# explicit-state oracle


class OracleLimit(ValueError):
    pass


@dataclass
class ExactVerdict:
    realizable: bool
    region: np.ndarray  # bool per state index, bit k of the index = value of x[k]
    iterations: int
    nx: int

    def states(self) -> list[int]:
        return [int(s) for s in np.flatnonzero(self.region)]

    def region_cnf(self, spec: SafetySpec) -> Cnf:
        """One blocking clause per excluded state (small specs only)."""
        f = Cnf()
        for s in np.flatnonzero(~self.region):
            f.add([-v if (int(s) >> k) & 1 else v for k, v in enumerate(spec.x)])
        return f

    def contains(self, state: int) -> bool:
        return bool(self.region[state])


def _bits(n: int, count: int) -> list[np.ndarray]:
    idx = np.arange(1 << n, dtype=np.int64)
    return [((idx >> k) & 1).astype(bool) for k in range(count)]


def eval_cnf_states(spec: SafetySpec, f: Cnf) -> np.ndarray:
    """Truth value of a state CNF on every state, by enumeration."""
    nx = len(spec.x)
    cols = dict(zip(spec.x, _bits(nx, nx)))
    res = np.ones(1 << nx, dtype=bool)
    for c in f:
        cl = np.zeros(1 << nx, dtype=bool)
        for l in c:
            col = cols[abs(l)]
            cl |= col if l > 0 else ~col
        res &= cl
    return res


def successor_table(spec: SafetySpec) -> np.ndarray:
    """succ[c, i, s]: successor state index, evaluating the gate definitions."""
    nx, ni, nc = len(spec.x), len(spec.i), len(spec.c)
    n = nx + ni + nc
    bits = _bits(n, n)
    val: dict[int, np.ndarray] = {}
    for k, v in enumerate(spec.x + spec.i + spec.c):
        val[v] = bits[k]
    size = 1 << n

    def ev(sig):
        if isinstance(sig, bool):
            return np.full(size, sig)
        return val[sig] if sig > 0 else ~val[-sig]

    for g, a, b in spec.gates:
        val[g] = ev(a) & ev(b)
    succ = np.zeros(size, dtype=np.int64)
    for k, f in enumerate(spec.next_fn):
        succ |= ev(f).astype(np.int64) << k
    return succ.reshape(1 << nc, 1 << ni, 1 << nx)


def explicit_attractor(spec: SafetySpec, limit: int = 20) -> ExactVerdict:
    """Greatest fixpoint of F := P ∧ Force1_protagonist(F) by enumeration."""
    nx, ni, nc = spec.sizes
    if nx + ni + nc > limit:
        raise OracleLimit(f"{nx + ni + nc} variables exceed the oracle limit {limit}")
    succ = successor_table(spec)
    F = eval_cnf_states(spec, spec.P)
    init = eval_cnf_states(spec, Cnf([l] for l in spec.init))
    it = 0
    while True:
        if np.any(init & ~F):
            return ExactVerdict(False, F, it, nx)
        # for every uncontrollable input some control keeps the successor in F
        nf = F & F[succ].any(axis=0).all(axis=0)
        if np.array_equal(nf, F):
            return ExactVerdict(True, F, it, nx)
        F = nf
        it += 1


class Comparison(enum.Enum):
    EQUIVALENT = "Equivalent"
    WITNESS = "Witness"


@dataclass
class CompareResult:
    status: Comparison
    witness: dict[int, bool] = field(default_factory=dict)

    @property
    def equivalent(self) -> bool:
        return self.status is Comparison.EQUIVALENT


def compare_regions(a: Cnf, b: Cnf, vm) -> CompareResult:
    """SAT-check a ∧ ¬b and b ∧ ¬a."""
    vars_ = sorted(a.vars() | b.vars())
    for p, q in ((a, b), (b, a)):
        s = Session()
        s.add_cnf(p)
        s.add_cnf(cnf_negate(q, vm))
        if s.solve():
            return CompareResult(Comparison.WITNESS, {abs(l): l > 0 for l in s.model_cube(vars_)})
    return CompareResult(Comparison.EQUIVALENT)


def report_json(report: RegionReport) -> str:
    return json.dumps(report.to_json(), indent=2, sort_keys=True)

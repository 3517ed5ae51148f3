"""Line protocol for plugging in an external incremental solver.

Requests (one per line, literals zero-terminated)::

    a <lits> 0      add a clause
    s <lits> 0      solve under assumption literals

Responses to ``s``::

    SAT <model literals> 0
    UNSAT <core literals> 0

The model lists every variable the server knows about; the core must be a
subset of the assumptions.  ``python -m safetysynth.sat.external`` runs a
server backed by the bundled solver (or by python-sat with
``--engine pysat`` when that package is installed).
"""

from __future__ import annotations

import argparse
import shlex
import subprocess
import sys
from typing import Iterable


class ProtocolError(RuntimeError):
    pass


class ExternalSolver:
    def __init__(self, cmd: str | list[str]):
        argv = shlex.split(cmd) if isinstance(cmd, str) else list(cmd)
        self.proc = subprocess.Popen(argv, stdin=subprocess.PIPE, stdout=subprocess.PIPE,
                                     text=True, bufsize=1)
        self.model_map: dict[int, bool] = {}
        self.core: list[int] = []
        self.stats = {"queries": 0, "conflicts": 0, "decisions": 0,
                      "propagations": 0, "additions": 0}

    def _send(self, line: str) -> None:
        self.proc.stdin.write(line + "\n")
        self.proc.stdin.flush()

    def add_clause(self, lits: Iterable[int]) -> bool:
        self.stats["additions"] += 1
        self._send("a " + " ".join(map(str, lits)) + " 0")
        return True

    def solve(self, assumptions: Iterable[int] = ()) -> bool:
        self.stats["queries"] += 1
        self._send("s " + " ".join(map(str, assumptions)) + " 0")
        reply = self.proc.stdout.readline().split()
        if not reply or reply[-1] != "0" or reply[0] not in ("SAT", "UNSAT"):
            raise ProtocolError(f"bad solver reply {reply!r}")
        lits = [int(t) for t in reply[1:-1]]
        if reply[0] == "SAT":
            self.model_map = {abs(l): l > 0 for l in lits}
            self.core = []
            return True
        self.model_map = {}
        self.core = lits
        return False

    def value(self, v: int) -> bool | None:
        return self.model_map.get(v)

    def lit_true(self, lit: int) -> bool:
        return self.model_map.get(abs(lit), False) == (lit > 0)

    def model_cube(self, vars_: Iterable[int]) -> list[int]:
        return [v if self.model_map.get(v, False) else -v for v in vars_]

    def close(self) -> None:
        if self.proc.poll() is None:
            self.proc.stdin.close()
            self.proc.wait(timeout=5)


def serve(engine: str = "bundled", inp=sys.stdin, out=sys.stdout) -> None:
    if engine == "pysat":
        from pysat.solvers import Minisat22
        s = Minisat22()
        top = 0

        def add(lits):
            nonlocal top
            top = max([top] + [abs(l) for l in lits])
            s.add_clause(lits)

        def solve(assum):
            nonlocal top
            top = max([top] + [abs(l) for l in assum])
            if s.solve(assumptions=assum):
                m = s.get_model() or []
                known = {abs(l) for l in m}
                return True, list(m) + [-v for v in range(1, top + 1) if v not in known]
            return False, list(s.get_core() or [])
    else:
        from .cdcl import Solver
        s = Solver()

        def add(lits):
            s.add_clause(lits)

        def solve(assum):
            if s.solve(assum):
                return True, s.model_cube(range(1, s.nvars + 1))
            return False, list(s.core)

    for line in inp:
        parts = line.split()
        if not parts:
            continue
        lits = [int(t) for t in parts[1:]]
        if lits and lits[-1] == 0:
            lits.pop()
        if parts[0] == "a":
            add(lits)
        elif parts[0] == "s":
            ok, ans = solve(lits)
            out.write(("SAT " if ok else "UNSAT ") + " ".join(map(str, ans)) + (" 0\n" if ans else "0\n"))
            out.flush()
        else:
            raise ProtocolError(f"unknown request {parts[0]!r}")


def main(argv=None) -> None:
    ap = argparse.ArgumentParser(description="line-protocol SAT server")
    ap.add_argument("--engine", choices=("bundled", "pysat"), default="bundled")
    args = ap.parse_args(argv)
    serve(args.engine)


if __name__ == "__main__":
    main()

"""Propositional core: grouped variables, cubes, clauses and CNFs.

Literals are plain signed integers in DIMACS style (``v`` / ``-v``).  Every
variable id is allocated by a :class:`VarManager`, which also records the
semantic group of the variable and the pairings between current-state,
next-state and previous-state copies.
"""

from __future__ import annotations

import enum
import itertools
import threading
from dataclasses import dataclass
from typing import Callable, Iterable, Iterator, Mapping


class Group(enum.Enum):
    STATE = "State"
    INPUT = "Input"
    CONTROL = "Control"
    NEXT = "NextState"
    TEMP = "Temp"
    PREV_STATE = "PrevState"
    PREV_INPUT = "PrevInput"
    PREV_CONTROL = "PrevControl"
    PARAM = "TemplateParam"


_PREV_OF = {
    Group.STATE: Group.PREV_STATE,
    Group.INPUT: Group.PREV_INPUT,
    Group.CONTROL: Group.PREV_CONTROL,
}


@dataclass(frozen=True)
class Var:
    id: int
    group: Group
    name: str = ""


def var_of(lit: int) -> int:
    return lit if lit > 0 else -lit


class Cube(frozenset):
    """Conjunction of literals.  The empty cube is ``true``."""

    def __new__(cls, lits: Iterable[int] = ()):
        self = super().__new__(cls, lits)
        for lit in self:
            if lit == 0:
                raise ValueError("0 is not a literal")
            if -lit in self:
                raise ValueError(f"variable {var_of(lit)} occurs twice in cube")
        return self

    def __repr__(self):
        return f"Cube({sorted(self, key=abs)})"

    def vars(self) -> set[int]:
        return {var_of(l) for l in self}

    def holds(self, assignment: Mapping[int, bool]) -> bool:
        return all(assignment[var_of(l)] == (l > 0) for l in self)


class Clause(frozenset):
    """Disjunction of literals.  The empty clause is ``false``.

    Tautologies are rejected here; :class:`Cnf` drops them silently.
    """

    def __new__(cls, lits: Iterable[int] = ()):
        self = super().__new__(cls, lits)
        for lit in self:
            if lit == 0:
                raise ValueError("0 is not a literal")
            if -lit in self:
                raise ValueError(f"tautological clause on variable {var_of(lit)}")
        return self

    def __repr__(self):
        return f"Clause({sorted(self, key=abs)})"

    def vars(self) -> set[int]:
        return {var_of(l) for l in self}

    def holds(self, assignment: Mapping[int, bool]) -> bool:
        return any(assignment[var_of(l)] == (l > 0) for l in self)


def is_tautology(lits: Iterable[int]) -> bool:
    s = set(lits)
    return any(-l in s for l in s)


class Cnf:
    """Ordered list of clauses; clause order never matters semantically."""

    __slots__ = ("clauses",)

    def __init__(self, clauses: Iterable[Iterable[int]] = ()):
        self.clauses: list[Clause] = []
        for c in clauses:
            self.add(c)

    def add(self, lits: Iterable[int]) -> Clause | None:
        """Append a clause, returning it, or None if it was a tautology."""
        if isinstance(lits, Clause):
            self.clauses.append(lits)
            return lits
        lits = set(lits)
        if any(-l in lits for l in lits):
            return None
        c = Clause(lits)
        self.clauses.append(c)
        return c

    def extend(self, clauses: Iterable[Iterable[int]]) -> None:
        for c in clauses:
            self.add(c)

    def copy(self) -> "Cnf":
        out = Cnf()
        out.clauses = list(self.clauses)
        return out

    def __iter__(self) -> Iterator[Clause]:
        return iter(self.clauses)

    def __len__(self) -> int:
        return len(self.clauses)

    def __bool__(self) -> bool:
        # An empty CNF is still a formula (true); avoid accidental falsiness.
        return True

    def __repr__(self):
        return "Cnf([" + ", ".join(str(sorted(c, key=abs)) for c in self.clauses) + "])"

    def __add__(self, other: "Cnf") -> "Cnf":
        out = self.copy()
        out.clauses.extend(other.clauses)
        return out

    def vars(self) -> set[int]:
        out: set[int] = set()
        for c in self.clauses:
            out.update(var_of(l) for l in c)
        return out

    def holds(self, assignment: Mapping[int, bool]) -> bool:
        return all(c.holds(assignment) for c in self.clauses)

    def duplicates(self) -> list[Clause]:
        seen: set[Clause] = set()
        dups = []
        for c in self.clauses:
            if c in seen:
                dups.append(c)
            seen.add(c)
        return dups

    def normalized(self) -> "Cnf":
        """Copy with duplicate clauses removed (first occurrence kept)."""
        out = Cnf()
        out.clauses = list(dict.fromkeys(self.clauses))
        return out

    def rename(self, mapping: Mapping[int, int] | Callable[[int], int]) -> "Cnf":
        """Substitute variables; ``mapping`` sends a variable id to a literal."""
        f = mapping.get if isinstance(mapping, Mapping) else None
        out = Cnf()
        for c in self.clauses:
            lits = []
            for l in c:
                v = var_of(l)
                t = (f(v, v) if f else mapping(v))
                lits.append(t if l > 0 else -t)
            out.add(lits)
        return out


class VarManager:
    """Allocates variable ids and tracks their groups and pairings."""

    def __init__(self):
        self._vars: list[Var | None] = [None]
        self._next: dict[int, int] = {}
        self._cur_of_next: dict[int, int] = {}
        self._prev: dict[int, int] = {}
        self._cur_of_prev: dict[int, int] = {}
        self._lock = threading.Lock()

    @property
    def max_id(self) -> int:
        return len(self._vars) - 1

    def new(self, group: Group, name: str = "") -> int:
        # worker threads of the parallel backend allocate temps concurrently
        with self._lock:
            v = len(self._vars)
            self._vars.append(Var(v, group, name or f"{group.value[0].lower()}{v}"))
        return v

    def block(self, group: Group, n: int, prefix: str = "") -> list[int]:
        return [self.new(group, f"{prefix}{k}" if prefix else "") for k in range(n)]

    def var(self, v: int) -> Var:
        if v <= 0 or v >= len(self._vars):
            raise KeyError(f"unknown variable {v}")
        return self._vars[v]

    def group(self, v: int) -> Group:
        return self.var(v).group

    def name(self, v: int) -> str:
        return self.var(v).name

    def of_group(self, group: Group) -> list[int]:
        return [x.id for x in self._vars[1:] if x.group is group]

    def new_next(self, state: int) -> int:
        if self.group(state) is not Group.STATE:
            raise ValueError(f"{state} is not a state variable")
        if state in self._next:
            raise ValueError(f"{state} already has a next-state partner")
        n = self.new(Group.NEXT, self.name(state) + "'")
        self._next[state] = n
        self._cur_of_next[n] = state
        return n

    def new_prev(self, v: int) -> int:
        g = self.group(v)
        if g not in _PREV_OF:
            raise ValueError(f"{v} ({g.value}) has no previous-state group")
        if v in self._prev:
            raise ValueError(f"{v} already has a previous-state partner")
        p = self.new(_PREV_OF[g], self.name(v) + "*")
        self._prev[v] = p
        self._cur_of_prev[p] = v
        return p

    def next_of(self, state: int) -> int:
        try:
            return self._next[state]
        except KeyError:
            raise ValueError(f"variable {state} has no next-state partner") from None

    def state_of(self, nxt: int) -> int:
        try:
            return self._cur_of_next[nxt]
        except KeyError:
            raise ValueError(f"variable {nxt} is not a next-state variable") from None

    def prev_of(self, v: int) -> int:
        try:
            return self._prev[v]
        except KeyError:
            raise ValueError(f"variable {v} has no previous-state partner") from None

    def has_prev(self, v: int) -> bool:
        return v in self._prev

    def groups_table(self) -> dict[int, Group]:
        return {x.id: x.group for x in self._vars[1:]}


# ---------------------------------------------------------------------------
# operations


def negate_cube(c: Iterable[int]) -> Clause:
    return Clause(-l for l in c)


def negate_clause(c: Iterable[int]) -> Cube:
    return Cube(-l for l in c)


def is_subcube(a: Iterable[int], b: Iterable[int]) -> bool:
    return set(a) <= set(b)


def prime(f: Cnf, vm: VarManager) -> Cnf:
    """Replace every state variable of ``f`` by its next-state partner."""
    for v in f.vars():
        if vm.group(v) is not Group.STATE:
            raise ValueError(f"prime: {vm.name(v)} is not a state variable")
    return f.rename(vm.next_of)


def unprime(f: Cnf, vm: VarManager) -> Cnf:
    return f.rename(vm.state_of)


def cnf_negate(f: Cnf, vm: VarManager) -> Cnf:
    """One-sided (Plaisted-Greenbaum) CNF of ``not f``.

    One fresh temp per non-unit clause; a temp only implies that its clause
    is false.  Unit clauses contribute their negated literal directly.
    """
    big: list[int] = []
    out = Cnf()
    for c in f:
        if len(c) == 1:
            (l,) = c
            big.append(-l)
            continue
        t = vm.new(Group.TEMP)
        big.append(t)
        for l in c:
            out.add((-t, -l))
    out.add(big)
    return out


def compress(f: Cnf, budget: int | None = None, solver_factory=None) -> Cnf:
    """Drop clauses implied by the remaining ones.

    Clauses are tried longest first.  Each check is one incremental query:
    the clause ``c`` is implied iff ``rest and not c`` is unsatisfiable.
    Activation literals keep a single solver session usable for all checks.
    """
    from .sat import Solver

    clauses = list(dict.fromkeys(f.clauses))
    if len(clauses) <= 1:
        return Cnf(clauses)
    top = max((var_of(l) for c in clauses for l in c), default=0)
    act = {c: top + 1 + k for k, c in enumerate(clauses)}
    s = (solver_factory or Solver)()
    for c in clauses:
        s.add_clause(list(c) + [-act[c]])
    alive = set(clauses)
    queries = 0
    for c in sorted(clauses, key=len, reverse=True):
        if budget is not None and queries >= budget:
            break
        queries += 1
        assumptions = [act[d] for d in clauses if d in alive and d is not c]
        assumptions.extend(-l for l in c)
        if not s.solve(assumptions):
            alive.discard(c)
    return Cnf(c for c in clauses if c in alive)


# ---------------------------------------------------------------------------
# enumeration helpers (small formulas only)


def assignments(vars_: Iterable[int]) -> Iterator[dict[int, bool]]:
    vs = sorted(vars_)
    for bits in itertools.product((False, True), repeat=len(vs)):
        yield dict(zip(vs, bits))


def models(f: Cnf, vars_: Iterable[int]) -> set[tuple[bool, ...]]:
    vs = sorted(vars_)
    return {tuple(a[v] for v in vs) for a in assignments(vs) if f.holds(a)}


# ---------------------------------------------------------------------------
# DIMACS


def write_dimacs(f: Cnf, vm: VarManager | None = None, comments: Iterable[str] = ()) -> str:
    nv = max(f.vars(), default=0)
    if vm is not None:
        nv = max(nv, vm.max_id)
    lines = [f"c {c}" for c in comments]
    if vm is not None:
        for v in sorted(f.vars()):
            lines.append(f"c group {v} {vm.group(v).value}")
    lines.append(f"p cnf {nv} {len(f)}")
    for c in f:
        lines.append(" ".join(str(l) for l in sorted(c, key=abs)) + " 0")
    return "\n".join(lines) + "\n"


def read_dimacs(text: str) -> tuple[Cnf, dict[int, Group], list[str]]:
    """Parse DIMACS text; returns the CNF, any group annotations and all comments."""
    groups: dict[int, Group] = {}
    comments: list[str] = []
    by_value = {g.value: g for g in Group}
    f = Cnf()
    header = None
    pending: list[int] = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("c"):
            body = line[1:].strip()
            comments.append(body)
            parts = body.split()
            if len(parts) == 3 and parts[0] == "group" and parts[2] in by_value:
                groups[int(parts[1])] = by_value[parts[2]]
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ValueError(f"line {n}: bad DIMACS header {line!r}")
            header = (int(parts[2]), int(parts[3]))
            continue
        if header is None:
            raise ValueError(f"line {n}: clause before header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                f.add(pending)
                pending = []
            else:
                pending.append(lit)
    if pending:
        f.add(pending)
    if header is None:
        raise ValueError("missing DIMACS header")
    return f, groups, comments

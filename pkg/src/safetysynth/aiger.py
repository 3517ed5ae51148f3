"""ASCII AIGER (aag) reader/writer and lowering to a safety game."""

from __future__ import annotations

from dataclasses import dataclass, field

from .formula import Cnf, Cube, Group, VarManager
from .game import SafetySpec, Signal

CONTROLLABLE_PREFIX = "controllable_"


class AigerError(ValueError):
    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line is not None else msg)


@dataclass
class AigerCircuit:
    max_index: int
    inputs: list[int] = field(default_factory=list)
    latches: list[tuple[int, int]] = field(default_factory=list)
    outputs: list[int] = field(default_factory=list)
    ands: list[tuple[int, int, int]] = field(default_factory=list)
    input_names: dict[int, str] = field(default_factory=dict)
    latch_names: dict[int, str] = field(default_factory=dict)
    output_names: dict[int, str] = field(default_factory=dict)
    comments: list[str] = field(default_factory=list)

    def structure(self) -> tuple:
        return (self.max_index, tuple(self.inputs), tuple(self.latches), tuple(self.outputs),
                tuple(self.ands), tuple(sorted(self.input_names.items())),
                tuple(sorted(self.latch_names.items())), tuple(sorted(self.output_names.items())))


@dataclass
class InputPartition:
    controllable: list[int]
    uncontrollable: list[int]


def _ints(line: str, n: int, lineno: int, what: str) -> list[int]:
    parts = line.split()
    if len(parts) != n:
        raise AigerError(f"expected {what} ({n} numbers), got {line!r}", lineno)
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise AigerError(f"non-numeric {what} {line!r}", lineno) from None
    if any(v < 0 for v in vals):
        raise AigerError(f"negative literal in {what}", lineno)
    return vals


def parse_aag(text: str) -> AigerCircuit:
    lines = text.split("\n")
    if not lines or not lines[0].strip():
        raise AigerError("empty input", 1)
    head = lines[0].split()
    if head and head[0] == "aig":
        raise AigerError("binary AIGER is not supported, convert to aag first", 1)
    if len(head) != 6 or head[0] != "aag":
        raise AigerError(f"malformed header {lines[0]!r}, expected 'aag M I L O A'", 1)
    try:
        M, I, L, O, A = (int(t) for t in head[1:])
    except ValueError:
        raise AigerError(f"malformed header {lines[0]!r}", 1) from None
    if min(M, I, L, O, A) < 0:
        raise AigerError("negative count in header", 1)
    if M < I + L + A:
        raise AigerError(f"max index {M} smaller than I+L+A", 1)
    circ = AigerCircuit(M)
    defined: dict[int, int] = {0: 1}
    refs: list[tuple[int, int]] = []
    pos = 1

    def next_line(what: str) -> tuple[str, int]:
        nonlocal pos
        if pos >= len(lines) or (not lines[pos].strip() and pos == len(lines) - 1):
            raise AigerError(f"missing {what}", pos + 1)
        ln = lines[pos]
        pos += 1
        return ln, pos

    def define(lit: int, lineno: int) -> None:
        if lit & 1:
            raise AigerError(f"odd literal {lit} used as definition", lineno)
        if lit == 0 or lit // 2 > M:
            raise AigerError(f"literal {lit} out of range", lineno)
        if lit in defined:
            raise AigerError(f"literal {lit} defined twice (first at line {defined[lit]})", lineno)
        defined[lit] = lineno

    for _ in range(I):
        ln, no = next_line("input line")
        (lit,) = _ints(ln, 1, no, "input")
        define(lit, no)
        circ.inputs.append(lit)
    for _ in range(L):
        ln, no = next_line("latch line")
        parts = ln.split()
        if len(parts) == 3:
            lit, nxt, init = _ints(ln, 3, no, "latch")
            if init != 0:
                raise AigerError("only zero-initialized latches are supported", no)
        else:
            lit, nxt = _ints(ln, 2, no, "latch")
        define(lit, no)
        refs.append((nxt, no))
        circ.latches.append((lit, nxt))
    for _ in range(O):
        ln, no = next_line("output line")
        (lit,) = _ints(ln, 1, no, "output")
        refs.append((lit, no))
        circ.outputs.append(lit)
    for _ in range(A):
        ln, no = next_line("and line")
        lhs, r0, r1 = _ints(ln, 3, no, "and gate")
        define(lhs, no)
        if r0 >= lhs or r1 >= lhs:
            raise AigerError(f"and gate {lhs} is not topologically ordered", no)
        refs.extend(((r0, no), (r1, no)))
        circ.ands.append((lhs, r0, r1))
    for lit, no in refs:
        if lit // 2 > M:
            raise AigerError(f"literal {lit} out of range", no)
        if (lit & ~1) not in defined:
            raise AigerError(f"dangling reference to literal {lit}", no)
    if O == 0:
        raise AigerError("missing output: an error output is required", 1)

    in_comment = False
    for k in range(pos, len(lines)):
        ln = lines[k]
        no = k + 1
        if in_comment:
            circ.comments.append(ln)
            continue
        if not ln.strip():
            continue
        if ln.strip() == "c":
            in_comment = True
            continue
        kind, rest = ln[0], ln[1:]
        idx_s, _, name = rest.partition(" ")
        if kind not in "ilo" or not idx_s.isdigit() or not name:
            raise AigerError(f"bad symbol line {ln!r}", no)
        idx = int(idx_s)
        table, items = {"i": (circ.input_names, circ.inputs), "l": (circ.latch_names, circ.latches),
                        "o": (circ.output_names, circ.outputs)}[kind]
        if idx >= len(items):
            raise AigerError(f"symbol index {idx} out of range", no)
        table[idx] = name
    while circ.comments and circ.comments[-1] == "":
        circ.comments.pop()
    return circ


def write_aag(c: AigerCircuit) -> str:
    out = [f"aag {c.max_index} {len(c.inputs)} {len(c.latches)} {len(c.outputs)} {len(c.ands)}"]
    out += [str(l) for l in c.inputs]
    out += [f"{l} {n}" for l, n in c.latches]
    out += [str(l) for l in c.outputs]
    out += [f"{a} {b} {d}" for a, b, d in c.ands]
    for k in sorted(c.input_names):
        out.append(f"i{k} {c.input_names[k]}")
    for k in sorted(c.latch_names):
        out.append(f"l{k} {c.latch_names[k]}")
    for k in sorted(c.output_names):
        out.append(f"o{k} {c.output_names[k]}")
    if c.comments:
        out.append("c")
        out.extend(c.comments)
    return "\n".join(out) + "\n"


def partition_inputs(c: AigerCircuit) -> InputPartition:
    ctl, unc = [], []
    for k, lit in enumerate(c.inputs):
        name = c.input_names.get(k, "")
        (ctl if name.startswith(CONTROLLABLE_PREFIX) else unc).append(lit)
    return InputPartition(ctl, unc)


def to_safety_spec(c: AigerCircuit, vm: VarManager | None = None, name: str = "spec") -> SafetySpec:
    """Lower a circuit to a safety game over fresh variables of ``vm``.

    Gates are constant-propagated and restricted to the cone of influence of
    the latch updates and the error output.  If the error output is not
    already a latch literal or a constant, a sticky error latch
    ``err' = err ∨ bad`` is added so that P is a pure state predicate.
    """
    if len(c.outputs) != 1:
        raise AigerError(f"exactly one error output required, found {len(c.outputs)}")
    vm = vm or VarManager()
    part = partition_inputs(c)
    ctl = set(part.controllable)
    sig: dict[int, Signal] = {0: False}
    xs, is_, cs = [], [], []
    for k, lit in enumerate(c.inputs):
        nm = c.input_names.get(k, f"i{k}")
        if lit in ctl:
            v = vm.new(Group.CONTROL, nm)
            cs.append(v)
        else:
            v = vm.new(Group.INPUT, nm)
            is_.append(v)
        sig[lit] = v
    for k, (lit, _) in enumerate(c.latches):
        v = vm.new(Group.STATE, c.latch_names.get(k, f"l{k}"))
        xs.append(v)
        sig[lit] = v

    # cone of influence
    gate_def = {lhs: (r0, r1) for lhs, r0, r1 in c.ands}
    need: set[int] = set()
    stack = [n & ~1 for _, n in c.latches] + [c.outputs[0] & ~1]
    while stack:
        v = stack.pop()
        if v in need or v not in gate_def:
            continue
        need.add(v)
        stack.extend(r & ~1 for r in gate_def[v])

    gates: list[tuple[int, int, int]] = []

    def lit_sig(l: int) -> Signal:
        try:
            s = sig[l & ~1]
        except KeyError:
            raise AigerError(f"combinational loop or undefined literal {l}") from None
        if l & 1:
            return (not s) if isinstance(s, bool) else -s
        return s

    for lhs, r0, r1 in c.ands:
        if lhs not in need:
            continue
        a, b = lit_sig(r0), lit_sig(r1)
        if a is False or b is False:
            sig[lhs] = False
        elif a is True:
            sig[lhs] = b
        elif b is True:
            sig[lhs] = a
        elif a == b:
            sig[lhs] = a
        elif a == -b:
            sig[lhs] = False
        else:
            g = vm.new(Group.TEMP, f"g{lhs // 2}")
            gates.append((g, a, b))
            sig[lhs] = g

    next_fn = [lit_sig(n) for _, n in c.latches]
    latch_lits: list[int | None] = [lit for lit, _ in c.latches]
    err = lit_sig(c.outputs[0])
    P = Cnf()
    if isinstance(err, bool):
        if err:
            P.add(())
    elif abs(err) in xs:
        P.add((-err,))
    else:
        e = vm.new(Group.STATE, "err")
        xs.append(e)
        # err' = err ∨ bad = ¬(¬err ∧ ¬bad)
        g = vm.new(Group.TEMP, "err_hold")
        gates.append((g, -e, -err))
        next_fn.append(-g)
        latch_lits.append(None)
        P.add((-e,))
    xn = [vm.new_next(v) for v in xs]
    return SafetySpec(vm=vm, x=xs, i=is_, c=cs, xn=xn, init=Cube(-v for v in xs), gates=gates,
                      next_fn=next_fn, P=P, name=name, latch_lits=latch_lits)


def load_spec(path: str, vm: VarManager | None = None) -> SafetySpec:
    import os

    with open(path) as fh:
        text = fh.read()
    return to_safety_spec(parse_aag(text), vm, name=os.path.splitext(os.path.basename(path))[0])

"""Parametrized benchmark families as AIGER circuits, plus random small games."""

from __future__ import annotations

import random

from .aiger import CONTROLLABLE_PREFIX, AigerCircuit

FALSE, TRUE = 0, 1


class AigBuilder:
    """Incremental AIG construction.

    With ``simplify`` the AND constructor folds constants, trivial
    operands and structurally identical gates; without it every call
    creates a gate.
    """

    def __init__(self, simplify: bool = True):
        self.simplify = simplify
        self.n = 0
        self.inputs: list[int] = []
        self.input_names: dict[int, str] = {}
        self.latches: list[list[int]] = []
        self.latch_names: dict[int, str] = {}
        self.ands: list[tuple[int, int, int]] = []
        self.output: int | None = None
        self._hash: dict[tuple[int, int], int] = {}
        self._sealed = False

    def _var(self) -> int:
        self.n += 1
        return 2 * self.n

    def input(self, name: str) -> int:
        assert not self.latches and not self.ands, "declare inputs first"
        lit = self._var()
        self.input_names[len(self.inputs)] = name
        self.inputs.append(lit)
        return lit

    def latch(self, name: str) -> int:
        assert not self.ands, "declare latches before gates"
        lit = self._var()
        self.latch_names[len(self.latches)] = name
        self.latches.append([lit, FALSE])
        return lit

    def set_next(self, latch: int, nxt: int) -> None:
        for row in self.latches:
            if row[0] == latch:
                row[1] = nxt
                return
        raise KeyError(latch)

    def AND(self, a: int, b: int) -> int:
        if self.simplify:
            if a == FALSE or b == FALSE or a == b ^ 1:
                return FALSE
            if a == TRUE:
                return b
            if b == TRUE or a == b:
                return a
            key = (max(a, b), min(a, b))
            if key in self._hash:
                return self._hash[key]
        lit = self._var()
        self.ands.append((lit, max(a, b), min(a, b)))
        if self.simplify:
            self._hash[key] = lit
        return lit

    def OR(self, a: int, b: int) -> int:
        return self.AND(a ^ 1, b ^ 1) ^ 1

    def XOR(self, a: int, b: int) -> int:
        return self.OR(self.AND(a, b ^ 1), self.AND(a ^ 1, b))

    def MUX(self, s: int, t: int, e: int) -> int:
        return self.OR(self.AND(s, t), self.AND(s ^ 1, e))

    def AND_all(self, lits) -> int:
        out = TRUE
        for l in lits:
            out = self.AND(out, l)
        return out

    def OR_all(self, lits) -> int:
        out = FALSE
        for l in lits:
            out = self.OR(out, l)
        return out

    def circuit(self, output: int, output_name: str = "err") -> AigerCircuit:
        c = AigerCircuit(self.n)
        c.inputs = list(self.inputs)
        c.latches = [(l, n) for l, n in self.latches]
        c.outputs = [output]
        c.ands = list(self.ands)
        c.input_names = dict(self.input_names)
        c.latch_names = dict(self.latch_names)
        c.output_names = {0: output_name}
        return c


def _simplify_flag(variant: str) -> bool:
    if variant in ("optimized", "y"):
        return True
    if variant in ("plain", "n"):
        return False
    raise ValueError(f"unknown variant {variant!r}")


def _counter(bits: int, variant: str, reset_connected: bool) -> AigerCircuit:
    b = AigBuilder(_simplify_flag(variant))
    en = b.input("enable")
    rst = b.input(CONTROLLABLE_PREFIX + "reset")
    q = [b.latch(f"q{k}") for k in range(bits)]
    err = b.latch("err")
    zero = b.AND_all(l ^ 1 for l in q)
    do_reset = b.AND(rst, zero) if reset_connected else FALSE
    carry = en
    for k in range(bits):
        nxt = b.XOR(q[k], carry)
        carry = b.AND(carry, q[k])
        b.set_next(q[k], b.AND(nxt, do_reset ^ 1))
    b.set_next(err, b.OR(err, b.AND_all(q)))
    return b.circuit(err)


def gen_cnt(bits: int, variant: str = "optimized") -> AigerCircuit:
    """Up-counter that must not reach all-ones; the control can hold it at zero."""
    if not 1 <= bits <= 30:
        raise ValueError("bits must be in 1..30")
    return _counter(bits, variant, True)


def gen_unreal(bits: int, variant: str = "optimized") -> AigerCircuit:
    """The counter game with its reset control disconnected."""
    if not 1 <= bits <= 30:
        raise ValueError("bits must be in 1..30")
    return _counter(bits, variant, False)


def gen_bs(bits: int, controllable: bool = True, variant: str = "optimized") -> AigerCircuit:
    """Rotating one-hot register; rotation amount is 2·sel + c.

    The uncontrollable select lines fix the even part of the rotation and the
    control its parity, so the protagonist can always keep the hot bit off
    the forbidden (odd) most significant position.  Bit 0 is stored inverted
    so that the all-zero latch state encodes the register value 1.  With
    ``controllable=False`` the parity line becomes uncontrollable and the
    game is lost.
    """
    if bits < 4 or bits & (bits - 1):
        raise ValueError("bits must be a power of two >= 4")
    lg = bits.bit_length() - 1
    b = AigBuilder(_simplify_flag(variant))
    sel = [b.input(f"sel{k}") for k in range(lg - 1)]
    par = b.input((CONTROLLABLE_PREFIX if controllable else "") + "parity")
    L = [b.latch(f"r{k}") for k in range(bits)]
    err = b.latch("err")
    r = [L[0] ^ 1] + L[1:]
    amount = [par] + sel
    cur = r
    for k, s in enumerate(amount):
        sh = 1 << k
        cur = [b.MUX(s, cur[(j - sh) % bits], cur[j]) for j in range(bits)]
    b.set_next(L[0], cur[0] ^ 1)
    for j in range(1, bits):
        b.set_next(L[j], cur[j])
    forbidden = b.AND_all([r[bits - 1]] + [r[j] ^ 1 for j in range(bits - 1)])
    b.set_next(err, b.OR(err, forbidden))
    return b.circuit(err)


def _add_bits(b: AigBuilder, x: list[int], y: list[int]) -> list[int]:
    out, carry = [], FALSE
    for xi, yi in zip(x, y):
        t = b.XOR(xi, yi)
        out.append(b.XOR(t, carry))
        carry = b.OR(b.AND(xi, yi), b.AND(t, carry))
    return out


def gen_add(bits: int, variant: str = "plain") -> AigerCircuit:
    """The controller must output a+b (mod 2^bits) in the same step."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    b = AigBuilder(_simplify_flag(variant))
    a = [b.input(f"a{k}") for k in range(bits)]
    y = [b.input(f"b{k}") for k in range(bits)]
    s = [b.input(f"{CONTROLLABLE_PREFIX}s{k}") for k in range(bits)]
    mis = b.latch("mismatch")
    err = b.latch("err")
    ref = _add_bits(b, a, y)
    b.set_next(mis, b.OR_all(b.XOR(u, v) for u, v in zip(s, ref)))
    b.set_next(err, b.OR(err, mis))
    return b.circuit(err)


def gen_mult(bits: int, variant: str = "plain") -> AigerCircuit:
    """The controller must output the 2·bits-bit product a·b; purely combinational."""
    if bits < 1:
        raise ValueError("bits must be >= 1")
    b = AigBuilder(_simplify_flag(variant))
    a = [b.input(f"a{k}") for k in range(bits)]
    y = [b.input(f"b{k}") for k in range(bits)]
    p = [b.input(f"{CONTROLLABLE_PREFIX}p{k}") for k in range(2 * bits)]
    acc = [FALSE] * (2 * bits)
    for j in range(bits):
        row = [FALSE] * j + [b.AND(a[k], y[j]) for k in range(bits)]
        row += [FALSE] * (2 * bits - len(row))
        acc = _add_bits(b, acc, row)
    bad = b.OR_all(b.XOR(u, v) for u, v in zip(p, acc))
    return b.circuit(bad)


def random_game(rng: random.Random, nx: int, ni: int, nc: int, ngates: int | None = None) -> AigerCircuit:
    """A random AIG game; the error output reads the latches or a gate."""
    b = AigBuilder(simplify=True)
    ins = [b.input(f"i{k}") for k in range(ni)]
    ctl = [b.input(f"{CONTROLLABLE_PREFIX}c{k}") for k in range(nc)]
    lat = [b.latch(f"x{k}") for k in range(nx)]
    pool = ins + ctl + lat
    ngates = ngates if ngates is not None else rng.randint(nx + 1, 3 * (nx + ni + nc) + 2)
    for _ in range(ngates):
        if len(pool) < 2:
            break
        u, v = rng.sample(pool, 2)
        g = b.AND(u ^ rng.randint(0, 1), v ^ rng.randint(0, 1))
        if g > 1:
            pool.append(g)
    for l in lat:
        b.set_next(l, rng.choice(pool) ^ rng.randint(0, 1))
    state_part = lat + [g for g, _, _ in b.ands]
    if not state_part:
        state_part = pool
    out = rng.choice(state_part[-max(1, len(state_part) // 2):]) ^ rng.randint(0, 1)
    return b.circuit(out)


FAMILIES = {
    "cnt": gen_cnt,
    "unreal": gen_unreal,
    "bs": gen_bs,
    "add": gen_add,
    "mult": gen_mult,
}

"""Reduction of winning-region existence to effectively propositional logic.

Every Boolean variable becomes a domain variable over the two constants
``top``/``bot`` read through the unary predicate ``p``.  Controls become
predicates ``c_j(X, I)``, the region is the predicate ``w(X)``, and the
transition relation enters the clause ``w(X) ∧ T ⇒ w(Y)`` (Y = next state)
through Skolem predicates for gates and for the one-sided negated
next-state equalities.
"""

from __future__ import annotations

import enum
import itertools
import re
from dataclasses import dataclass, field

from .game import SafetySpec
from .sat import Session

# a literal: (positive, predicate, args); args are variable names or constants
Lit = tuple[bool, str, tuple[str, ...]]
EClause = tuple[Lit, ...]

CONSTANTS = ("top", "bot")
DEFAULT_LIMIT = 2_000_000


@dataclass
class EprProblem:
    name: str
    sizes: tuple[int, int, int]
    predicates: dict[str, int] = field(default_factory=dict)
    families: dict[str, list[EClause]] = field(default_factory=dict)

    def clauses(self) -> list[EClause]:
        return [c for fam in ("init", "safe", "trans") for c in self.families.get(fam, [])]

    def ground_size(self) -> int:
        """Ground literal occurrences after instantiating each clause over its own variables."""
        total = 0
        for c in self.clauses():
            total += (2 ** len(clause_vars(c))) * len(c)
        return total


def clause_vars(c: EClause) -> list[str]:
    seen: dict[str, None] = {}
    for _, _, args in c:
        for a in args:
            if a not in CONSTANTS:
                seen[a] = None
    return list(seen)


def encode_epr(spec: SafetySpec, check: bool = True) -> EprProblem:
    if check:
        spec.check_deterministic(samples=64)
    nx, ni, nc = spec.sizes
    X = [f"X{k}" for k in range(nx)]
    I = [f"I{k}" for k in range(ni)]
    Y = [f"Y{k}" for k in range(nx)]
    prob = EprProblem(spec.name, (nx, ni, nc))
    prob.predicates["p"] = 1
    prob.predicates["w"] = nx
    xi_args = tuple(X + I)
    atom: dict[int, tuple[str, tuple[str, ...]]] = {}
    for v, a in zip(spec.x, X):
        atom[v] = ("p", (a,))
    for v, a in zip(spec.i, I):
        atom[v] = ("p", (a,))
    for v, a in zip(spec.xn, Y):
        atom[v] = ("p", (a,))
    for k, v in enumerate(spec.c, 1):
        atom[v] = (f"c{k}", xi_args)
        prob.predicates[f"c{k}"] = len(xi_args)

    order = {a: n for n, a in enumerate(X + I + Y)}

    def args_of(names) -> tuple[str, ...]:
        return tuple(sorted(set(names), key=order.__getitem__))

    def lit(l: int) -> Lit:
        pred, args = atom[abs(l)]
        return (l > 0, pred, args)

    trans: list[EClause] = []
    for n, (g, a, b) in enumerate(spec.gates):
        args = args_of(atom[abs(a)][1] + atom[abs(b)][1])
        name = f"g{n}"
        prob.predicates[name] = len(args)
        atom[g] = (name, args)
        trans.append((lit(-g), lit(a)))
        trans.append((lit(-g), lit(b)))
        trans.append((lit(g), lit(-a), lit(-b)))

    # t_k -> (y_k xor f_k); the main clause is ¬w(X) ∨ ⋁ t_k ∨ w(Y)
    main: list[Lit] = [(False, "w", tuple(X))]
    for k, (yv, f) in enumerate(zip(spec.xn, spec.next_fn)):
        name = f"t{k}"
        if isinstance(f, bool):
            args = args_of(atom[yv][1])
            prob.predicates[name] = len(args)
            t = (True, name, args)
            # y xor true = ¬y, y xor false = y
            trans.append(((False, name, args), lit(-yv if f else yv)))
        else:
            args = args_of(atom[yv][1] + atom[abs(f)][1])
            prob.predicates[name] = len(args)
            t = (True, name, args)
            trans.append(((False, name, args), lit(yv), lit(f)))
            trans.append(((False, name, args), lit(-yv), lit(-f)))
        main.append(t)
    main.append((True, "w", tuple(Y)))
    trans.insert(0, tuple(main))

    init = [tuple([lit(-l) for l in spec.init] + [(True, "w", tuple(X))])]
    safe = [tuple([(False, "w", tuple(X))] + [lit(l) for l in c]) for c in spec.P]
    prob.families = {"init": init, "safe": safe, "trans": trans}
    return prob


def _fmt_lit(l: Lit) -> str:
    pos, pred, args = l
    s = f"{pred}({','.join(args)})" if args else pred
    return s if pos else "~" + s


def write_tptp(p: EprProblem) -> str:
    nx, ni, nc = p.sizes
    out = [f"% safety game {p.name}", f"% sizes: x={nx} i={ni} c={nc}", "% winning region predicate w",
           "cnf(p_top, axiom, p(top)).", "cnf(p_bot, axiom, ~p(bot))."]
    for fam in ("init", "safe", "trans"):
        cls = p.families.get(fam, [])
        if not cls:
            continue
        out.append(f"% {fam}")
        for n, c in enumerate(cls):
            body = " | ".join(_fmt_lit(l) for l in c) if c else "$false"
            out.append(f"cnf({fam}_{n}, axiom, ({body})).")
    return "\n".join(out) + "\n"


_CNF_RE = re.compile(r"^cnf\(\s*([a-z0-9_]+)\s*,\s*([a-z_]+)\s*,\s*(.*)\)\.\s*$")
_ATOM_RE = re.compile(r"^(~?)\s*([a-z][a-z0-9_]*)(?:\(([^()]*)\))?$")


def read_tptp(text: str) -> list[tuple[str, EClause]]:
    """Minimal reader for the cnf-form subset written by :func:`write_tptp`."""
    out = []
    for n, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line or line.startswith("%"):
            continue
        m = _CNF_RE.match(line)
        if not m:
            raise ValueError(f"line {n}: cannot parse {line!r}")
        name, _, body = m.groups()
        body = body.strip()
        if body.startswith("(") and body.endswith(")"):
            body = body[1:-1]
        lits = []
        if body.strip() != "$false":
            for part in body.split("|"):
                am = _ATOM_RE.match(part.strip())
                if not am:
                    raise ValueError(f"line {n}: bad literal {part!r}")
                neg, pred, args = am.groups()
                lits.append((not neg, pred, tuple(a.strip() for a in args.split(",")) if args else ()))
        out.append((name, tuple(lits)))
    return out


class GroundVerdict(enum.Enum):
    REALIZABLE = "Realizable"
    UNREALIZABLE = "Unrealizable"
    TOO_LARGE = "TooLarge"


def ground_check(p: EprProblem, limit: int = DEFAULT_LIMIT) -> GroundVerdict:
    """Instantiate over {top, bot} and decide with the SAT layer."""
    if p.ground_size() > limit:
        return GroundVerdict.TOO_LARGE
    ids: dict[tuple[str, tuple[str, ...]], int] = {}

    def gid(pred: str, args: tuple[str, ...]) -> int:
        key = (pred, args)
        v = ids.get(key)
        if v is None:
            v = ids[key] = len(ids) + 1
        return v

    s = Session()
    s.add_clause([gid("p", ("top",))])
    s.add_clause([-gid("p", ("bot",))])
    for c in p.clauses():
        vs = clause_vars(c)
        for vals in itertools.product(CONSTANTS, repeat=len(vs)):
            sub = dict(zip(vs, vals))
            s.add_clause([(1 if pos else -1) * gid(pred, tuple(sub.get(a, a) for a in args))
                          for pos, pred, args in c])
    return GroundVerdict.REALIZABLE if s.solve() else GroundVerdict.UNREALIZABLE


def skolem_scopes(p: EprProblem) -> dict[str, set[str]]:
    """For every Skolem predicate, the variables of the clauses that mention it."""
    scopes: dict[str, set[str]] = {}
    for c in p.families.get("trans", []):
        for _, pred, args in c:
            if pred[0] in "gt":
                scopes.setdefault(pred, set()).update(a for a in args if a not in CONSTANTS)
    return scopes

"""Command-line frontend.

Exit codes: 10 realizable, 20 unrealizable, 0 for other successful
commands, 1 on errors (and failed checks), 2 when a resource budget runs out.
"""

from __future__ import annotations

import argparse
import json
import logging
import random
import sys
from pathlib import Path

from . import __version__
from .aiger import AigerError, parse_aag, to_safety_spec, write_aag
from .bench import FAMILIES, random_game
from .epr import DEFAULT_LIMIT, GroundVerdict, encode_epr, ground_check, write_tptp
from .formula import Cnf, read_dimacs, write_dimacs
from .learning import LearnOptions, Status, learn_qbf, learn_sat
from .parallel import synth_parallel
from .template import TemplateOptions, synth_template
from .verify import Mode, OracleLimit, check_winning_region, explicit_attractor

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_BUDGET = 2
EXIT_REALIZABLE = 10
EXIT_UNREALIZABLE = 20
STATS_SCHEMA = 1

log = logging.getLogger("safetysynth")


class CliError(Exception):
    pass


def _load(path: str):
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror or exc}") from exc
    try:
        return to_safety_spec(parse_aag(text), name=p.stem)
    except AigerError as exc:
        raise CliError(f"{path}: {exc}") from exc


def _verdict_exit(status: Status) -> int:
    return {Status.REALIZABLE: EXIT_REALIZABLE, Status.UNREALIZABLE: EXIT_UNREALIZABLE,
            Status.BUDGET: EXIT_BUDGET}.get(status, EXIT_ERROR)


def _verdict_text(status: Status) -> str:
    return {Status.REALIZABLE: "REALIZABLE", Status.UNREALIZABLE: "UNREALIZABLE",
            Status.BUDGET: "BUDGET_EXCEEDED"}.get(status, status.value.upper())


def region_dimacs(spec, region: Cnf) -> str:
    comments = [f"region of {spec.name}"]
    for v, lit in zip(spec.x, spec.latch_lits):
        comments.append(f"latch {lit if lit is not None else 'err'} var {v}")
    return write_dimacs(region, None, comments)


def region_from_dimacs(spec, text: str) -> Cnf:
    """Map a region file back onto the spec's state variables via its latch comments."""
    f, _, comments = read_dimacs(text)
    by_lit = {str(lit if lit is not None else "err"): v for v, lit in zip(spec.x, spec.latch_lits)}
    rename = {}
    for c in comments:
        parts = c.split()
        if len(parts) == 4 and parts[0] == "latch" and parts[2] == "var":
            if parts[1] not in by_lit:
                raise CliError(f"region mentions unknown latch {parts[1]}")
            rename[int(parts[3])] = by_lit[parts[1]]
    if rename:
        f = f.rename(rename)
    extra = f.vars() - set(spec.x)
    if extra:
        raise CliError(f"region uses variables that are not latches: {sorted(extra)[:5]}")
    return f


def cmd_synth(args) -> int:
    spec = _load(args.spec)
    opts = LearnOptions(use_rg=args.rg, use_rc=args.rc, budget=args.budget, seed=args.seed,
                        compress_every=args.compress_every)
    backend = args.backend
    if backend == "learnsat":
        v = learn_sat(spec, opts)
    elif backend == "learnqbf":
        v = learn_qbf(spec, opts)
    elif backend == "template":
        v = synth_template(spec, TemplateOptions(budget=args.budget or 10**6, seed=args.seed, dual=args.dual))
    else:
        v = synth_parallel(spec, args.threads, opts, seed=args.seed or 0)
    print(_verdict_text(v.status))
    if v.detail:
        log.info("%s", v.detail)
    if args.out_region and v.region is not None:
        Path(args.out_region).write_text(region_dimacs(spec, v.region))
    if args.stats:
        st = v.stats
        report = {
            "schema": STATS_SCHEMA,
            "backend": backend,
            "spec": spec.name,
            "sizes": dict(zip(("x", "i", "c"), spec.sizes)),
            "verdict": v.status.value,
            "mode": v.mode,
            "wall_time_ms": st.get("wall_time_ms", 0.0),
            "clauses_learned": st.get("clauses_learned", 0),
            "restarts": st.get("restarts", 0),
            "solver_queries": st.get("solver_queries", st.get("rounds", 0)),
            "threads": st.get("threads", {}),
        }
        if backend == "template":
            report["template_n"] = st.get("N")
        Path(args.stats).write_text(json.dumps(report, indent=2, default=str) + "\n")
    return _verdict_exit(v.status)


def cmd_check(args) -> int:
    spec = _load(args.spec)
    try:
        text = Path(args.region).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {args.region}: {exc.strerror or exc}") from exc
    try:
        W = region_from_dimacs(spec, text)
    except ValueError as exc:
        raise CliError(f"{args.region}: {exc}") from exc
    rep = check_winning_region(spec, W, Mode(args.mode))
    print(rep.summary())
    if args.json:
        print(json.dumps(rep.to_json()))
    return EXIT_OK if rep.ok else EXIT_ERROR


def cmd_oracle(args) -> int:
    spec = _load(args.spec)
    try:
        ex = explicit_attractor(spec, limit=args.limit)
    except OracleLimit as exc:
        print(f"oracle refused: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    print("REALIZABLE" if ex.realizable else "UNREALIZABLE")
    if args.verbose:
        print(f"c winning states {len(ex.states)} of {2 ** ex.nx}, iterations {ex.iterations}")
    return EXIT_REALIZABLE if ex.realizable else EXIT_UNREALIZABLE


def cmd_gen(args) -> int:
    if args.family == "random":
        rng = random.Random(args.seed)
        c = random_game(rng, args.nx, args.ni, args.nc)
    else:
        if args.bits is None:
            raise CliError("--bits is required for this family")
        gen = FAMILIES[args.family]
        kw = {}
        if args.variant:
            kw["variant"] = args.variant
        if args.family == "bs" and args.uncontrollable:
            kw["controllable"] = False
        try:
            c = gen(args.bits, **kw)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
    text = write_aag(c)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_epr_export(args) -> int:
    spec = _load(args.spec)
    prob = encode_epr(spec)
    out = args.output or str(Path(args.spec).with_suffix(".p"))
    Path(out).write_text(write_tptp(prob))
    if not args.ground:
        return EXIT_OK
    v = ground_check(prob, args.limit)
    if v is GroundVerdict.TOO_LARGE:
        print("TOO_LARGE")
        return EXIT_BUDGET
    print("REALIZABLE" if v is GroundVerdict.REALIZABLE else "UNREALIZABLE")
    return EXIT_REALIZABLE if v is GroundVerdict.REALIZABLE else EXIT_UNREALIZABLE


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="safetysynth", description="SAT-based safety game solving.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", help="decide realizability and compute a winning region")
    s.add_argument("spec", help="ASCII AIGER (.aag) file")
    s.add_argument("--backend", choices=("learnsat", "learnqbf", "template", "parallel"), default="learnsat",
                   help="synthesis engine (default: learnsat)")
    s.add_argument("--rg", action=argparse.BooleanOptionalAction, default=True,
                   help="reachability-based generalization (default: on)")
    s.add_argument("--rc", action=argparse.BooleanOptionalAction, default=False,
                   help="reachability-restricted counterexamples (default: off)")
    s.add_argument("--threads", type=int, choices=(1, 2, 3), default=2,
                   help="worker threads for --backend parallel (default: 2)")
    s.add_argument("--seed", type=int, default=None, help="solver seed (default: none)")
    s.add_argument("--budget", type=int, default=None,
                   help="iteration budget; template: refinement rounds (default: unlimited)")
    s.add_argument("--compress-every", type=int, default=50,
                   help="compress F after this many new clauses, 0 disables (default: 50)")
    s.add_argument("--dual", action="store_true", help="template: try the antagonist dual first")
    s.add_argument("--out-region", help="write the region as DIMACS with latch comments")
    s.add_argument("--stats", help="write a JSON stats report")
    s.set_defaults(func=cmd_synth)

    c = sub.add_parser("check", help="verify a region file against a spec")
    c.add_argument("spec")
    c.add_argument("region")
    c.add_argument("--mode", choices=[m.value for m in Mode], default="strict")
    c.add_argument("--json", action="store_true", help="also print the report as JSON")
    c.set_defaults(func=cmd_check)

    o = sub.add_parser("oracle", help="explicit-state attractor (small specs)")
    o.add_argument("spec")
    o.add_argument("--limit", type=int, default=20, help="maximum |x|+|i|+|c| (default: 20)")
    o.set_defaults(func=cmd_oracle)

    g = sub.add_parser("gen", help="write a benchmark circuit")
    g.add_argument("family", choices=sorted(FAMILIES) + ["random"])
    g.add_argument("--bits", type=int)
    g.add_argument("--variant", help="n/plain or y/optimized")
    g.add_argument("--uncontrollable", action="store_true", help="bs: disconnect the control")
    g.add_argument("--nx", type=int, default=3)
    g.add_argument("--ni", type=int, default=2)
    g.add_argument("--nc", type=int, default=2)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("-o", "--output")
    g.set_defaults(func=cmd_gen)

    e = sub.add_parser("epr-export", help="write the EPR encoding in TPTP cnf form")
    e.add_argument("spec")
    e.add_argument("-o", "--output", help="output .p file (default: next to the spec)")
    e.add_argument("--ground", action="store_true", help="also decide it by grounding")
    e.add_argument("--limit", type=int, default=DEFAULT_LIMIT,
                   help=f"grounding limit in literal occurrences (default: {DEFAULT_LIMIT})")
    e.set_defaults(func=cmd_epr_export)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())

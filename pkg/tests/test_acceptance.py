"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v`` (the lines are repeated in
the terminal summary) or directly with ``python3 tests/test_acceptance.py``.
"""

from __future__ import annotations

import functools
import random
import statistics
import sys
import time

from corpus import corpus_specs
from oracles import check_cnf_negate, check_compress, random_ea_case, witness_ok
from safetysynth.aiger import to_safety_spec
from safetysynth.bench import gen_add, gen_bs, gen_cnt, gen_mult, random_game
from safetysynth.epr import DEFAULT_LIMIT, GroundVerdict, encode_epr, ground_check, read_tptp, write_tptp
from safetysynth.learning import LearnOptions, Status, learn_qbf, learn_sat
from safetysynth.parallel import synth_parallel
from safetysynth.qesolve import solve_ea
from safetysynth.template import TemplateOptions, synth_template
from safetysynth.verify import check_winning_region, compare_regions, explicit_attractor

RESULTS: dict[int, tuple[bool, str]] = {}
FLAGS = [(False, False), (True, False), (False, True), (True, True)]


def report(n: int, ok: bool, detail: str) -> None:
    RESULTS[n] = (ok, detail)
    print(f"criterion {n}: {'PASS' if ok else 'FAIL'} ({detail})", flush=True)
    assert ok, detail


# -- shared, cached runs ------------------------------------------------------------

@functools.lru_cache(maxsize=None)
def corpus():
    specs = corpus_specs()
    return [(name, spec, explicit_attractor(spec)) for name, spec in specs]


@functools.lru_cache(maxsize=None)
def learned(backend: str, rg: bool, rc: bool):
    """Verdicts of one backend/flag combination over the corpus, with total time."""
    fn = learn_sat if backend == "sat" else learn_qbf
    t0 = time.perf_counter()
    out = [(name, spec, truth, fn(spec, LearnOptions(use_rg=rg, use_rc=rc))) for name, spec, truth in corpus()]
    return out, time.perf_counter() - t0


@functools.lru_cache(maxsize=None)
def parallel_runs():
    out = []
    for name, spec, truth in corpus():
        for threads in (1, 2, 3):
            for seed in range(5):
                out.append((name, spec, truth, threads, seed, synth_parallel(spec, threads, seed=seed)))
    return out


# -- criteria -----------------------------------------------------------------------

def test_criterion_1_oracle_equivalence():
    n = len(corpus())
    bad = []
    elapsed = 0.0
    for backend in ("sat", "qbf"):
        runs, dt = learned(backend, False, False)
        elapsed += dt
        for name, spec, truth, v in runs:
            if v.status not in (Status.REALIZABLE, Status.UNREALIZABLE) or v.realizable != truth.realizable:
                bad.append((backend, name, "verdict"))
            elif v.realizable and not compare_regions(v.region, truth.region_cnf(spec), spec.vm).equivalent:
                bad.append((backend, name, "region"))
    ok = n >= 200 and not bad and elapsed < 300
    report(1, ok, f"{n} specs, {len(bad)} mismatches {bad[:3]}, {elapsed:.1f} s for both backends")


def test_criterion_2_region_conditions():
    checked = 0
    failures = []

    def check(tag, spec, v):
        nonlocal checked
        if v.realizable:
            checked += 1
            rep = check_winning_region(spec, v.region, v.mode)
            if not rep.ok:
                failures.append((tag, spec.name, rep.summary()))

    for backend in ("sat", "qbf"):
        for rg, rc in FLAGS:
            for name, spec, truth, v in learned(backend, rg, rc)[0]:
                check(f"{backend}/rg={rg}/rc={rc}", spec, v)
    for name, spec, truth, threads, seed, v in parallel_runs():
        check(f"parallel/{threads}/{seed}", spec, v)
    # template backend on the realizable specs with a small state space
    for name, spec, truth in corpus():
        if truth.realizable and len(spec.x) <= 4:
            check("template", spec, synth_template(spec, TemplateOptions(max_n=8)))
    for gen, bits in ((gen_add, 2), (gen_mult, 2)):
        spec = to_safety_spec(gen(bits))
        check("template", spec, synth_template(spec))
    report(2, checked > 0 and not failures, f"{checked} regions checked, {len(failures)} failures {failures[:3]}")


def test_criterion_3_rg_rc_verdicts():
    bad = []
    for backend in ("sat", "qbf"):
        for rg, rc in FLAGS:
            for name, spec, truth, v in learned(backend, rg, rc)[0]:
                if v.status not in (Status.REALIZABLE, Status.UNREALIZABLE) or v.realizable != truth.realizable:
                    bad.append((backend, rg, rc, name))
    report(3, not bad, f"{len(corpus())} specs x 2 backends x 4 flag sets, {len(bad)} mismatches {bad[:3]}")


def test_criterion_4_template_pinned():
    rows = []
    ok = True
    for gen in (gen_add, gen_mult):
        for bits in (2, 3, 4):
            spec = to_safety_spec(gen(bits))
            t0 = time.perf_counter()
            v = synth_template(spec)
            dt = time.perf_counter() - t0
            good = v.realizable and v.stats.get("N", 99) <= 2 and dt < 30 and check_winning_region(spec, v.region).ok
            ok &= good
            rows.append(f"{gen.__name__[4:]}{bits}: N={v.stats.get('N')} {dt:.1f}s")
    report(4, ok, ", ".join(rows))


def test_criterion_5_sizes():
    got = {
        "cnt4": to_safety_spec(gen_cnt(4)).sizes,
        "add2": to_safety_spec(gen_add(2)).sizes,
        "mult2": to_safety_spec(gen_mult(2)).sizes,
    }
    ok = got["cnt4"] == (5, 1, 1) and got["add2"] == (2, 4, 2) and got["mult2"][1:] == (4, 4)
    report(5, ok, ", ".join(f"{k} x/i/c={v}" for k, v in got.items()))


def test_criterion_6_parallel():
    runs = parallel_runs()
    bad = []
    unverified = []
    for name, spec, truth, threads, seed, v in runs:
        if v.status not in (Status.REALIZABLE, Status.UNREALIZABLE) or v.realizable != truth.realizable:
            bad.append((name, threads, seed, v.status.value))
        elif v.realizable and not check_winning_region(spec, v.region, v.mode).ok:
            unverified.append((name, threads, seed))
    speed = {}
    for threads in (1, 2, 3):
        speed[threads] = sum(v.stats["wall_time_ms"] for *_, t, s, v in runs if t == threads) / 1000
    ok = not bad and not unverified
    report(6, ok, f"{len(runs)} runs, {len(bad)} disagreements, {len(unverified)} unverified regions; "
                  f"total time by threads {', '.join(f'{k}: {t:.1f}s' for k, t in speed.items())}")


def test_criterion_7_epr():
    specs = [(name, spec, truth) for name, spec, truth in corpus() if spec.sizes[0] + spec.sizes[1] <= 6]
    rng = random.Random(77)
    while len(specs) < 150:
        nx = rng.randint(1, 4)
        spec = to_safety_spec(random_game(rng, nx, rng.randint(0, 6 - nx), rng.randint(0, 3)))
        if spec.sizes[0] + spec.sizes[1] <= 6:
            specs.append((f"extra{len(specs)}", spec, explicit_attractor(spec)))
    bad = []
    trips = 0
    for name, spec, truth in specs:
        prob = encode_epr(spec)
        got = ground_check(prob)
        if got is GroundVerdict.TOO_LARGE or (got is GroundVerdict.REALIZABLE) != truth.realizable:
            bad.append(name)
        parsed = read_tptp(write_tptp(prob))
        trips += [c for _, c in parsed[2:]] == prob.clauses()
    big = encode_epr(to_safety_spec(gen_cnt(8)))
    too_large = ground_check(big) is GroundVerdict.TOO_LARGE
    ok = not bad and trips == len(specs) and too_large
    report(7, ok, f"{len(specs)} specs, {len(bad)} mismatches, {trips} round-trips, "
                  f"cnt8 ground size {big.ground_size():,} vs limit {DEFAULT_LIMIT:,}: "
                  f"{'TooLarge' if too_large else 'accepted'}")


def _median_time(spec_factory, repeats):
    times = []
    for _ in range(repeats):
        spec = spec_factory()
        t0 = time.perf_counter()
        v = learn_sat(spec)
        times.append(time.perf_counter() - t0)
        assert v.realizable
    return statistics.median(times)


def test_criterion_8_scalability():
    t_cnt8 = _median_time(lambda: to_safety_spec(gen_cnt(8)), 1)
    bs = {b: _median_time(lambda b=b: to_safety_spec(gen_bs(b)), 5 if b < 32 else 3) for b in (8, 16, 32)}
    ratios = [bs[16] / bs[8], bs[32] / bs[16]]
    ok = t_cnt8 < 60 and bs[16] < 60 and all(r < 10 for r in ratios)
    report(8, ok, f"cnt8 {t_cnt8:.2f}s, bs8/16/32 median {bs[8]:.3f}/{bs[16]:.3f}/{bs[32]:.3f}s, "
                  f"step ratios {ratios[0]:.1f}x {ratios[1]:.1f}x")


def test_criterion_9_formula_properties():
    rng = random.Random(9)
    cases = 1000
    neg_fail = sum(not check_cnf_negate(rng) for _ in range(cases))
    comp_fail = sum(not check_compress(rng) for _ in range(cases))
    ea_fail = 0
    for _ in range(cases):
        p, truth = random_ea_case(rng)
        r = solve_ea(p)
        ea_fail += r.sat != truth or (r.sat and not witness_ok(p, r.witness))
    ok = neg_fail == comp_fail == ea_fail == 0
    report(9, ok, f"{cases} cases each; failures cnf_negate={neg_fail} compress={comp_fail} solve_ea={ea_fail}")


if __name__ == "__main__":
    tests = [v for k, v in sorted(globals().items()) if k.startswith("test_criterion_")]
    failed = 0
    for t in tests:
        try:
            t()
        except AssertionError:
            failed += 1
    sys.exit(1 if failed else 0)

import random

import pytest

from corpus import always_safe, one_latch
from safetysynth.aiger import to_safety_spec
from safetysynth.bench import gen_cnt, random_game
from safetysynth.epr import (DEFAULT_LIMIT, GroundVerdict, encode_epr, ground_check, read_tptp, skolem_scopes,
                             write_tptp)
from safetysynth.verify import explicit_attractor

# hand-audited encoding of x0' = c0, P = ¬x0, I = ¬x0
ONE_LATCH_TPTP = """\
% safety game one_latch
% sizes: x=1 i=0 c=1
% winning region predicate w
cnf(p_top, axiom, p(top)).
cnf(p_bot, axiom, ~p(bot)).
% init
cnf(init_0, axiom, (p(X0) | w(X0))).
% safe
cnf(safe_0, axiom, (~w(X0) | ~p(X0))).
% trans
cnf(trans_0, axiom, (~w(X0) | t0(X0,Y0) | w(Y0))).
cnf(trans_1, axiom, (~t0(X0,Y0) | p(Y0) | c1(X0))).
cnf(trans_2, axiom, (~t0(X0,Y0) | ~p(Y0) | ~c1(X0))).
"""


def test_one_latch_golden():
    p = encode_epr(one_latch(True))
    assert write_tptp(p) == ONE_LATCH_TPTP
    assert p.predicates["w"] == 1 and p.predicates["c1"] == 1
    assert [f for f in ("init", "safe", "trans") if p.families[f]] == ["init", "safe", "trans"]


def test_no_controls_no_control_predicates():
    p = encode_epr(one_latch(False))
    assert not any(name.startswith("c") for name in p.predicates)


def test_true_property_has_no_safety_family():
    p = encode_epr(always_safe())
    assert p.families["safe"] == []
    assert "cnf(safe_" not in write_tptp(p)


def test_ground_check_one_latch():
    assert ground_check(encode_epr(one_latch(True))) is GroundVerdict.REALIZABLE
    assert ground_check(encode_epr(one_latch(False))) is GroundVerdict.UNREALIZABLE


def test_cnt8_is_too_large():
    p = encode_epr(to_safety_spec(gen_cnt(8)))
    assert p.ground_size() > DEFAULT_LIMIT
    assert ground_check(p) is GroundVerdict.TOO_LARGE


def test_tptp_round_trip():
    p = encode_epr(to_safety_spec(gen_cnt(3)))
    parsed = read_tptp(write_tptp(p))
    assert parsed[:2] == [("p_top", ((True, "p", ("top",)),)), ("p_bot", ((False, "p", ("bot",)),))]
    assert [c for _, c in parsed[2:]] == p.clauses()


def test_read_tptp_rejects_garbage():
    with pytest.raises(ValueError):
        read_tptp("fof(a, axiom, p).\n")


def test_skolem_scopes_cover_arguments():
    p = encode_epr(to_safety_spec(gen_cnt(2)))
    scopes = skolem_scopes(p)
    for name, scope in scopes.items():
        assert len(scope) >= p.predicates[name]
    # every control predicate may depend on the whole current state and inputs
    nx, ni, _ = p.sizes
    assert p.predicates["c1"] == nx + ni


def test_deterministic_output():
    a = write_tptp(encode_epr(to_safety_spec(gen_cnt(2))))
    b = write_tptp(encode_epr(to_safety_spec(gen_cnt(2))))
    assert a == b


def test_ground_check_matches_oracle_on_random_games():
    rng = random.Random(17)
    for _ in range(60):
        nx = rng.randint(1, 3)
        s = to_safety_spec(random_game(rng, nx, rng.randint(0, 6 - nx), rng.randint(0, 2)))
        if s.sizes[0] + s.sizes[1] > 6:
            continue
        got = ground_check(encode_epr(s))
        assert (got is GroundVerdict.REALIZABLE) == explicit_attractor(s).realizable

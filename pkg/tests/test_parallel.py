import pytest

from corpus import one_latch, small_corpus
from safetysynth import parallel
from safetysynth.aiger import to_safety_spec
from safetysynth.bench import gen_bs, gen_cnt
from safetysynth.learning import LearnOptions, Status, learn_sat
from safetysynth.parallel import CexDb, SharedClauseDb, synth_parallel
from safetysynth.verify import check_winning_region, explicit_attractor


def test_one_latch_two_threads():
    s = one_latch(True)
    v = synth_parallel(s, threads=2)
    assert v.status is Status.REALIZABLE
    assert check_winning_region(s, v.region).ok
    assert set(v.stats["threads"]) == {"learnsat0", "learnsat1"}


def test_single_thread_is_learn_sat():
    opts = LearnOptions(use_rg=True)
    a = synth_parallel(to_safety_spec(gen_bs(8)), threads=1, opts=opts, seed=5)
    b = learn_sat(to_safety_spec(gen_bs(8)), LearnOptions(use_rg=True, seed=5))
    assert [sorted(c) for c in a.region] == [sorted(c) for c in b.region]
    for key in ("iterations", "clauses_learned", "restarts", "solver_queries"):
        assert a.stats[key] == b.stats[key]


def test_three_threads_report_generalizer():
    v = synth_parallel(to_safety_spec(gen_cnt(4)), threads=3, seed=1)
    assert v.realizable and "generalizer" in v.stats["threads"]
    assert v.stats["verified"]


def test_thread_count_validated():
    with pytest.raises(ValueError):
        synth_parallel(one_latch(True), threads=4)


def test_worker_failure_is_reported(monkeypatch):
    def boom(self):
        raise RuntimeError("worker crashed")

    monkeypatch.setattr(parallel.SharedLearnSat, "run", boom)
    v = synth_parallel(to_safety_spec(gen_cnt(3)), threads=2)
    assert v.status is Status.FAILED and "worker crashed" in v.detail


def test_initial_state_unsafe():
    from safetysynth.aiger import parse_aag
    s = to_safety_spec(parse_aag("aag 2 1 1 1 0\n2\n4 2\n1\n"))
    assert synth_parallel(s, threads=2).status is Status.UNREALIZABLE


def test_shared_db_epochs_and_cursors():
    db = SharedClauseDb()
    db.push_f([1, 2], "a")
    db.push_u([3], "a", epoch=0)
    assert [e.clause for e in db.read_f(0)] == [(1, 2)]
    assert db.bump() == (1, 1)
    db.push_u([4], "b", epoch=0)  # stale epoch: dropped
    db.push_u([5], "b", epoch=1)
    assert [e.clause for e in db.read_u(0)] == [(3,), (5,)]
    assert db.read_f(1) == []


def test_cex_db_bounded():
    q = CexDb(maxsize=2)
    for k in range(5):
        q.put((k,), ())
    assert q.get() == ((0,), ()) and q.get() == ((1,), ()) and q.get(timeout=0.01) is None


@pytest.mark.parametrize("threads", [2, 3])
def test_small_corpus_agrees(threads):
    for name, s in small_corpus():
        truth = explicit_attractor(s).realizable
        for seed in range(2):
            v = synth_parallel(s, threads=threads, seed=seed)
            assert v.status in (Status.REALIZABLE, Status.UNREALIZABLE), (name, v.detail)
            assert v.realizable == truth, name

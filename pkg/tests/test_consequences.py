import pytest

from growthlab import derivations as dv
from growthlab.consequences import ConsequenceLog, Verdict, consequence_step, equal_semi, make_oracle
from growthlab.fixtures import cyclic, free, surface2, z2
from growthlab.words import rotations


def test_relator_conjugates_found_first():
    p = z2()
    log = consequence_step(ConsequenceLog(p), 20)
    for r in rotations(p.relators[0]):
        assert r in log


def test_hand_derived_consequence_appears():
    p = z2()
    log = ConsequenceLog(p)
    target = p.parse_word("aabAAB")
    for _ in range(100):
        if target in log:
            break
        log.step(100)
    assert target in log
    d = log.discovered[target]
    assert dv.evaluate(d, p.relators) == target


def test_discovered_words_all_carry_derivations():
    p = z2()
    log = consequence_step(ConsequenceLog(p), 300)
    for w, d in log.discovered.items():
        assert dv.evaluate(d, p.relators) == w


def test_free_log_stays_empty():
    log = consequence_step(ConsequenceLog(free(2)), 500)
    assert len(log) == 0


def test_equal_semi_examples():
    p = z2()
    log = ConsequenceLog(p)
    ab, ba = p.parse_word("ab"), p.parse_word("ba")
    assert equal_semi(log, ab, ab) is Verdict.YES
    log.step(10)
    assert equal_semi(log, ab, ba) is Verdict.YES
    flog = consequence_step(ConsequenceLog(free(2)), 200)
    assert equal_semi(flog, ab, ba) is Verdict.UNKNOWN


def test_yes_is_permanent():
    p = cyclic(6)
    log = ConsequenceLog(p)
    u, v = p.parse_word("a^4"), p.parse_word("a^-2")
    log.step(20)
    assert equal_semi(log, u, v)
    log.step(200)
    assert equal_semi(log, u, v)


def test_snapshot_is_immutable_view():
    log = consequence_step(ConsequenceLog(z2()), 10)
    snap = log.snapshot()
    log.step(50)
    assert snap <= log.snapshot() and isinstance(snap, frozenset)


@pytest.mark.parametrize("make, kind", [(lambda: free(2), "free"), (z2, "confluent"), (surface2, "confluent")])
def test_make_oracle_picks_strongest(make, kind):
    assert make_oracle(make()).kind == kind


def test_semi_only_oracle():
    o = make_oracle(z2(), semi_only=True)
    assert o.kind == "semi" and not o.exact
    with pytest.raises(TypeError):
        o.normalize(b"\x00")

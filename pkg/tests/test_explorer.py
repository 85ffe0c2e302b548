import pytest
from hypothesis import given, settings, strategies as st

from growthlab.census import exact_balls
from growthlab.consequences import make_oracle
from growthlab.explorer import (
    cusp_sequence, cusp_word, enumerate_gensets, nielsen_canonicalize, sample_egr,
    wellorder_report,
)
from growthlab.fixtures import free, z2
from growthlab.ordinals import RealSample
from growthlab.words import GenSetSpec, invert, multiply, standard_genset

F2 = free(2)


def key(*words, p=F2):
    return nielsen_canonicalize(p, [p.parse_word(w) for w in words]).format(p)


def names(stream):
    return [s.format(F2) for s in stream]


# --- enumeration


def test_enumerate_length_two():
    assert names(enumerate_gensets(F2, 2, 2)) == [["a", "b"]]


def test_enumerate_length_three():
    got = names(enumerate_gensets(F2, 2, 3))
    for pair in (["a", "ab"], ["b", "ab"], ["a", "AB"]):
        assert pair in got
    assert ["aa", "b"] not in got


def test_single_generator_never_generates_f2():
    stream = enumerate_gensets(F2, 1, 4)
    assert list(stream) == [] and stream.unknown


def test_trivial_members_are_filtered():
    from growthlab.fixtures import cyclic
    stream = enumerate_gensets(cyclic(3), 1, 3)
    list(stream)
    assert any(s.members == (bytes([0, 0, 0]),) for s in stream.trivial)


# --- Nielsen keys


@pytest.mark.parametrize("tup, out", [(("a", "ab"), ("a", "b")), (("a", "b"), ("a", "b")),
                                      (("ab", "b"), ("a", "b"))])
def test_nielsen_examples(tup, out):
    assert key(*tup) == out


def test_key_ignores_order_and_inversion():
    assert key("ab", "aab") == key("BAA", "ab") == key("aab", "BA")


def test_non_free_rejected():
    with pytest.raises(ValueError):
        nielsen_canonicalize(z2(), [b"\x00"])


def _apply(ws, i, j, sign, side):
    v = ws[j] if sign > 0 else invert(ws[j])
    ws = list(ws)
    ws[i] = multiply(ws[i], v) if side == "r" else multiply(v, ws[i])
    return ws


@settings(max_examples=40)
@given(st.lists(st.tuples(st.integers(0, 1), st.sampled_from([1, -1]), st.sampled_from("rl")), max_size=6))
def test_nielsen_moves_from_basis_return_to_basis(moves):
    ws = [F2.parse_word("a"), F2.parse_word("b")]
    for i, sign, side in moves:
        ws = _apply(ws, i, 1 - i, sign, side)
    assert nielsen_canonicalize(F2, ws).format(F2) == ("a", "b")


# --- sampling


def test_sample_merges_orbits_and_finds_minimum():
    sample = sample_egr(F2, enumerate_gensets(F2, 2, 4), 10)
    assert len(sample.entries) == 1
    entry = sample.entries[0]
    assert entry.genset.format(F2) == ["a", "b"] and entry.multiplicity == 25
    assert entry.bound.witness_count == 2 * 3 ** 10 - 1


def test_orbit_members_share_censuses():
    oracle = make_oracle(F2)
    ref = exact_balls(oracle, standard_genset(F2), 8).ball_sizes
    for s in enumerate_gensets(F2, 2, 4):
        assert exact_balls(oracle, s, 8, method="bfs").ball_sizes == ref


def test_empty_stream_gives_empty_sample():
    sample = sample_egr(F2, [], 6)
    assert sample.entries == [] and sample.values() == []


def test_z2_samples_trend_to_one():
    p = z2()
    sample = sample_egr(p, [standard_genset(p), GenSetSpec.of([p.parse_word("ab"), p.parse_word("b")])], 10)
    assert len(sample.entries) == 2
    for e in sample.entries:
        assert e.ratio.dominant_root == pytest.approx(1.0)
        assert e.bound.value > 1


def test_radius_guard():
    with pytest.raises(ValueError):
        sample_egr(F2, [], 1)


# --- well-order probe


def test_report_small_sample():
    rep = wellorder_report([3.0, 3.0, 3.2], 0.01)
    assert [(c.lo, c.count) for c in rep.clusters] == [(3.0, 2), (3.2, 1)]
    assert rep.minimum.lo == 3.0 and rep.chain_length == 1


def test_report_increasing_sequence():
    rep = wellorder_report([1 - 1 / n for n in range(1, 51)], 0.0001)
    assert len(rep.clusters) == 50 and rep.minimum.lo == 0 and not rep.descending_chain_found


def test_report_finds_descending_chain():
    rep = wellorder_report([5.0, 4.0, 3.0, 3.5], 0.1)
    assert rep.descending_chain == [5.0, 4.0, 3.0]


def test_report_on_f2_sample():
    sample = sample_egr(F2, enumerate_gensets(F2, 2, 4), 10)
    rep = wellorder_report(sample, 0.05)
    assert rep.minimum.indices == [sample.entries[0].stream_index]
    assert sample.entries[0].orbit_key.format(F2) == ("a", "b")


def test_report_on_real_sample_uses_multiplicity():
    rep = wellorder_report(RealSample.of([1.0, 1.0, 2.0]), 0.5)
    assert rep.minimum.count == 2


def test_report_needs_positive_epsilon():
    with pytest.raises(ValueError):
        wellorder_report([1.0, 2.0], 0.0)


# --- cusp sequence


def test_cusp_words():
    assert F2.format_word(cusp_word(F2, 1)) == "ab"
    assert F2.format_word(cusp_word(F2, 3)) == "ababbabbb"


def test_cusp_domination_and_monotonicity():
    seq = cusp_sequence(F2, standard_genset(F2), steps=4, radius=6)
    assert seq.all_dominated
    bounds = [step.bound.value for step in seq.steps]
    assert bounds == sorted(bounds)
    assert seq.target_sizes[:2] == (1, 7)


def test_absorbed_generator_is_degenerate():
    s = standard_genset(F2)
    seq = cusp_sequence(F2, s, words=[F2.parse_word("a")], radius=5)
    base = exact_balls(make_oracle(F2), s, 5).ball_sizes
    assert seq.steps[0].sizes == base and seq.steps[0].genset == s


def test_radius_one_matches_when_words_are_long():
    seq = cusp_sequence(F2, standard_genset(F2), steps=3, radius=1)
    for step in seq.steps[1:]:
        assert step.sizes == seq.target_sizes == (1, 7)

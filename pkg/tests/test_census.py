import pytest
from hypothesis import given, settings, strategies as st

from growthlab import derivations as dv
from growthlab.census import (
    CensusError, UpperCensusEngine, evaluate_product, exact_balls, generates_semi, is_free_basis,
    subgroup_rank, upper_balls,
)
from growthlab.consequences import make_oracle
from growthlab.fixtures import cyclic, free, surface2, z2
from growthlab.words import GenSetSpec, invert, multiply, parse_presentation, standard_genset
from conftest import cyclic_bfs, free_bfs, z2_bfs


def gs(p, *words):
    return GenSetSpec.of([p.parse_word(w) for w in words])


def balls(p, s, n):
    return list(exact_balls(make_oracle(p), s, n).ball_sizes)


def test_spec_examples():
    f2 = free(2)
    assert balls(f2, standard_genset(f2), 2) == [1, 5, 17]
    assert balls(z2(), standard_genset(z2()), 3) == [1, 5, 13, 25]
    assert balls(z2(), standard_genset(z2()), 0) == [1]


@pytest.mark.parametrize("k", [1, 2, 3])
def test_free_against_bfs(k):
    p = free(k)
    s = standard_genset(p)
    assert balls(p, s, 6) == free_bfs("abc"[:k], 6)
    assert list(exact_balls(make_oracle(p), s, 6, method="bfs").ball_sizes) == free_bfs("abc"[:k], 6)


def test_z2_and_cyclic_against_bfs():
    assert balls(z2(), standard_genset(z2()), 8) == z2_bfs(8)
    assert balls(cyclic(6), standard_genset(cyclic(6)), 8) == cyclic_bfs(6, 8)


def test_non_basis_free_set_uses_search():
    p = free(2)
    s = gs(p, "a", "aa", "b")
    assert not is_free_basis(s)
    # <a, a^2, b> = F2 but with a redundant letter: radius 1 reaches a^{+-1}, a^{+-2}, b^{+-1}
    assert balls(p, s, 1) == [1, 7]


def test_subgroup_rank():
    p = free(2)
    assert subgroup_rank([p.parse_word(w) for w in ("a", "ab")]) == 2
    assert subgroup_rank([p.parse_word(w) for w in ("a", "aa")]) == 1
    assert subgroup_rank([p.parse_word(w) for w in ("ab", "ba", "a")]) == 2
    # the even-length subgroup has index 2, so rank 3
    assert subgroup_rank([p.parse_word(w) for w in ("ab", "ba", "aB")]) == 3


def test_surface_group_balls_are_submultiplicative():
    p = surface2()
    b = balls(p, standard_genset(p), 5)
    assert b[:3] == [1, 9, 65]
    assert all(b[i + j] <= b[i] * b[j] for i in range(1, 5) for j in range(1, 6 - i))


def test_trivial_member_rejected():
    p = cyclic(6)
    with pytest.raises(CensusError):
        exact_balls(make_oracle(p), gs(p, "a^6", "a"), 3)
    with pytest.raises(CensusError):
        exact_balls(make_oracle(z2(), semi_only=True), standard_genset(z2()), 3)


# --- upper censuses


def test_free_upper_equals_exact():
    p = free(2)
    s = gs(p, "a", "ab")
    for budget in (0, 50):
        assert list(upper_balls(p, s, 5, budget).upper_sizes) == balls(p, s, 5)


def test_z2_budget_zero_gives_free_counts_and_converges():
    p = z2()
    s = standard_genset(p)
    assert list(upper_balls(p, s, 4, 0).upper_sizes) == [1, 5, 17, 53, 161]
    assert list(upper_balls(p, s, 6, 200).upper_sizes) == z2_bfs(6)


def test_z6_large_budget_saturates():
    p = cyclic(6)
    sizes = upper_balls(p, standard_genset(p), 10, 200).upper_sizes
    assert all(x <= 6 for x in sizes) and sizes[-1] == 6


def test_surface_upper_converges_to_exact():
    p = surface2()
    s = standard_genset(p)
    assert list(upper_balls(p, s, 3, 100).upper_sizes) == balls(p, s, 3)


def test_cap_is_enforced():
    p = z2()
    with pytest.raises(CensusError, match="cap"):
        upper_balls(p, standard_genset(p), 8, 0, cap=100)


@settings(max_examples=15)
@given(st.lists(st.integers(0, 60), min_size=2, max_size=5))
def test_upper_counts_monotone_in_budget_and_sound(budgets):
    p = z2()
    s = standard_genset(p)
    truth = z2_bfs(5)
    engine = UpperCensusEngine(p, s)
    prev = None
    for b in sorted(budgets):
        engine.advance(b)
        engine.extend(5)
        sizes = engine.sizes(5)
        assert all(m >= t for m, t in zip(sizes, truth))
        if prev is not None:
            assert all(m <= q for m, q in zip(sizes, prev))
        prev = sizes


# --- generation


def _check_witnesses(p, s, status):
    for i, wit in status.witnesses.items():
        w = evaluate_product(s, wit.product)
        assert dv.evaluate(wit.derivation, p.relators) == multiply(w, invert(p.generator_word(i)))


def test_generates_nielsen_pair():
    p = free(2)
    s = gs(p, "a", "ab")
    st_ = generates_semi(p, s)
    assert st_.generates and st_.verdict == "generates"
    _check_witnesses(p, s, st_)
    assert evaluate_product(s, st_.witnesses[1].product) == p.parse_word("b")


def test_proper_subgroup_unknown():
    p = free(2)
    st_ = generates_semi(p, gs(p, "aa", "b"), budget=6)
    assert not st_.generates and st_.verdict == "unknown"


def test_z2_skewed_set_generates():
    p = z2()
    s = gs(p, "ab", "b")
    st_ = generates_semi(p, s)
    assert st_.generates
    _check_witnesses(p, s, st_)


def test_z6_needs_relators():
    p = cyclic(6)
    s = gs(p, "a^5")
    st_ = generates_semi(p, s)
    assert st_.generates
    _check_witnesses(p, s, st_)


def test_generates_with_long_generator_names():
    p = parse_presentation("< x, y | x y x^-1 y^-1 >")
    assert generates_semi(p, standard_genset(p)).generates

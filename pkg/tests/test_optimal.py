import itertools
import math
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import valid_choice_sequences
from ietlab.line import ContractError, Permutation, rotations
from ietlab.metrics import scaled_report, segment_count
from ietlab.optimal import (
    CutChoice,
    brute_edge_orders,
    brute_first_step_feasible,
    build_optimal_protocol,
    count_cut_choice_codes,
    count_optimal_cut_sets,
    count_optimal_perms,
    cut_color_orders,
    default_order,
    enumerate_optimal_perms,
    is_optimal_capable,
    solve_edge_colors,
)


def orders(perm, k=2):
    return {s.letters() for s in solve_edge_colors(perm, k)}


def fixing_one(L):
    return [Permutation((1,) + p) for p in itertools.permutations(range(2, L + 1))]


def test_solver_examples():
    assert orders("132") == {"BG"}
    assert orders("14253") == {"BBGG"}
    assert orders("14325") == {"GGBB", "GBBG", "BGGB", "BBGG"}


def test_solver_rejects_perm_not_fixing_one():
    with pytest.raises(ContractError):
        solve_edge_colors("321", 2)


@pytest.mark.parametrize("L,k", [(3, 2), (4, 2), (5, 2), (6, 2), (7, 2), (3, 3), (4, 3), (5, 3), (6, 3), (7, 3)])
def test_solver_matches_brute_orders(L, k):
    for perm in fixing_one(L):
        solved = sorted({s.cut_color_order for s in solve_edge_colors(perm, k)})
        assert solved == brute_edge_orders(perm, k), perm


@pytest.mark.parametrize("L,k", [(3, 2), (5, 2), (7, 2), (4, 3), (7, 3), (5, 4)])
def test_capability_matches_first_step_oracle(L, k):
    members = set(enumerate_optimal_perms(L, k))
    for p in itertools.permutations(range(1, L + 1)):
        assert (Permutation(p) in members) == brute_first_step_feasible(p, k), p


def test_enumeration_examples():
    assert [str(p) for p in enumerate_optimal_perms(3, 2)] == ["132", "321", "213"]
    assert {str(p) for p in enumerate_optimal_perms(4, 3)} == {"1324", "3241", "2413", "4132"}
    assert {str(p) for p in enumerate_optimal_perms(5, 4)} == {"13524", "35241", "52413", "24135", "41352"}
    assert is_optimal_capable("1635427", 2)
    assert is_optimal_capable("1324", 3)
    assert not is_optimal_capable("1234", 3)
    assert not is_optimal_capable("2341", 3)


def test_enumeration_divisibility_guard():
    for L, k in ((4, 2), (5, 3)):
        with pytest.raises(ContractError):
            enumerate_optimal_perms(L, k)


def test_even_lengths_never_capable_for_two_colors():
    for L in (2, 4, 6):
        assert not any(is_optimal_capable(p, 2) for p in itertools.permutations(range(1, L + 1)))


@pytest.mark.parametrize("n", [1, 2, 3])
def test_count_optimal_perms(n):
    assert count_optimal_perms(n) == len(enumerate_optimal_perms(2 * n + 1, 2)) == [3, 20, 252][n - 1]


def test_rotation_closure():
    for L, k in ((5, 2), (4, 3), (7, 3)):
        for p in itertools.permutations(range(1, L + 1)):
            cap = is_optimal_capable(p, k)
            assert all(is_optimal_capable(r, k) == cap for r in rotations(p))


def test_two_color_solutions_balance_cut_colors():
    for L in (3, 5, 7):
        n = (L - 1) // 2
        for perm in fixing_one(L):
            for sol in solve_edge_colors(perm, 2):
                assert sol.cut_color_order.count(0) == n
                assert sol.cut_color_order.count(1) == n


def test_three_colors_keep_repeating_order():
    for perm in fixing_one(4):
        for sol in solve_edge_colors(perm, 3):
            cols = sol.cut_color_order
            assert all((b - a) % 3 == 1 for a, b in zip(cols, cols[1:]))
    assert default_order("1324", 3) == (0, 1, 2)
    assert default_order("13524", 4) == (0, 1, 2, 3)


def test_small_constructions():
    p = build_optimal_protocol("132", 2, 1)
    assert list(p.cut_sets[0]) == [F(1, 4), F(3, 4)]
    final = p.run()[-1]
    assert final.colors == [0, 1, 0, 1] and set(final.lengths) == {F(1, 4)}
    p = build_optimal_protocol("132", 2, 2)
    assert [list(c) for c in p.cut_sets] == [[F(1, 3), F(2, 3)], [F(1, 6), F(1, 2)]]


def check_optimal(protocol, L, k):
    N = protocol.N
    final = protocol.run()[-1]
    total = N * (L - 1) + k
    assert segment_count(final) == total
    assert set(final.lengths) == {F(1, total)}
    cols = final.colors
    assert all((b - a) % k == 1 for a, b in zip(cols, cols[1:]))
    assert scaled_report(final, N, L, k).Phi == 1


@pytest.mark.parametrize("perm,k", [("321", 2), ("1324", 3), ("2413", 3), ("13524", 4), ("14325", 2), ("1635427", 2)])
def test_default_construction_reaches_phi_one(perm, k):
    for N in range(0, 9):
        check_optimal(build_optimal_protocol(perm, k, N), len(perm), k)


@pytest.mark.parametrize("N", [1, 2, 3])
def test_choice_counts_small(N):
    seqs = valid_choice_sequences("132", 2, N)
    assert len(seqs) == count_optimal_cut_sets(N)
    for seq in seqs:
        check_optimal(build_optimal_protocol("132", 2, N, list(seq)), 3, 2)


def test_count_formulas():
    assert [count_optimal_cut_sets(N) for N in range(1, 6)] == [1, 3, 18, 180, 2700]
    assert all(count_optimal_cut_sets(N) == math.prod(math.comb(t + 1, 2) for t in range(1, N + 1)) for N in range(1, 12))
    assert count_cut_choice_codes(1, 2) == 3


@settings(max_examples=40, deadline=None)
@given(st.sampled_from(["132", "321", "14253", "14325", "1324", "3241"]), st.integers(1, 5), st.randoms(use_true_random=False))
def test_random_valid_choices_reach_phi_one(perm, N, rnd):
    k = 3 if len(perm) == 4 else 2
    seqs = valid_choice_sequences(perm, k, min(N, 3))
    seq = rnd.choice(seqs)
    check_optimal(build_optimal_protocol(perm, k, len(seq), list(seq)), len(perm), k)


def test_bad_choices_name_the_iteration():
    good = build_optimal_protocol("132", 2, 2).choices
    with pytest.raises(ContractError, match="iteration 2"):
        build_optimal_protocol("132", 2, 2, [good[0], CutChoice((0, 1), (2, 1))])
    with pytest.raises(ContractError, match="iteration 1"):
        build_optimal_protocol("132", 2, 1, [CutChoice((1, 0), (1, 1))])
    with pytest.raises(ContractError):
        build_optimal_protocol("123", 2, 1)
    with pytest.raises(ContractError):
        build_optimal_protocol("132", 2, 2, [good[0]])

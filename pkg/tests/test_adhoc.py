from fractions import Fraction as F

from hypothesis import assume, given, settings
from hypothesis import strategies as st

from ietlab.adhoc import AdHocState, adhoc_cuts, adhoc_step, adhoc_trajectory, advance, default_perm, run_adhoc, select_segments
from ietlab.line import CutSet
from ietlab.metrics import segment_count


def phis(N_max, k=2, perm="132"):
    return [r.Phi for r in run_adhoc(k, perm, N_max)]


def test_default_perms():
    assert [str(default_perm(k)) for k in (2, 3, 4)] == ["132", "1324", "13524"]


def test_first_step_is_symmetric_halving():
    assert phis(1) == [1, 1]
    state = adhoc_step(AdHocState.start(2))
    assert list(state.history[0]) == [F(1, 4), F(3, 4)]


def test_golden_values():
    series = phis(63)
    for N in (1, 3, 7, 15, 31, 63):
        assert series[N] == 1
    assert series[20] == F(21, 16)
    for i in range(2, 7):
        assert series[2**i - 2] == 2 - F(1, 2 ** (i - 1))


def test_bounded_and_never_reassembles():
    states = adhoc_trajectory(2, "132", 200)
    assert max(s.report().Phi for s in states[1:]) < 2
    for s in states:
        assert segment_count(s.line) == 2 * s.N + 2
        assert all(length.denominator & (length.denominator - 1) == 0 for length in s.line.lengths)
    assert states[-1].fallbacks == 0


def test_more_colors_keep_maximal_segment_count():
    for k in (3, 4):
        L = k + 1
        for s in adhoc_trajectory(k, None, 30):
            assert segment_count(s.line) == s.N * (L - 1) + k


def test_selection_respects_order():
    # order is relative to the first segment's color
    colors = [1, 0, 1, 0]
    lengths = [F(1, 8), F(1, 8), F(1, 8), F(5, 8)]
    assert select_segments(colors, lengths, (0, 1), 2) == ([0, 3], False)
    colors = [0, 1, 0, 1]
    lengths = [F(1, 8), F(1, 8), F(1, 8), F(5, 8)]
    assert select_segments(colors, lengths, (0, 1), 2) == ([0, 3], False)
    lengths = [F(1, 8), F(1, 2), F(1, 4), F(1, 8)]
    # longest black (pos 2) has only a short gray after it; still feasible
    assert select_segments(colors, lengths, (0, 1), 2) == ([2, 3], True)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 10), st.integers(0, 1), st.integers(-1000, 1000).filter(bool))
def test_self_correction_after_perturbed_cut(N0, which, micro):
    state = adhoc_trajectory(2, "132", N0)[-1]
    cuts, _ = adhoc_cuts(state)
    delta = F(micro, 10**6)
    moved = list(cuts)
    moved[which] += delta
    # keep the perturbed cut inside the segment it was meant for
    starts = [F(0)]
    for length in state.line.lengths:
        starts.append(starts[-1] + length)
    seg = next(p for p in range(len(starts) - 1) if starts[p] < cuts[which] < starts[p + 1])
    assume(starts[seg] < moved[which] < starts[seg + 1])
    state = advance(state, CutSet(tuple(moved)))
    for _ in range(12):
        state = adhoc_step(state)
        assert segment_count(state.line) == 2 * state.N + 2

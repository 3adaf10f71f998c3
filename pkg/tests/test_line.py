from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import cut_sets, permutations_of, rational_lines
from ietlab.line import (
    FLOAT,
    ColoredLine,
    ContractError,
    CutSet,
    Permutation,
    apply_iet,
    is_irreducible,
    is_rotation,
    normalize,
    parse_perm,
    rotations,
)
from ietlab.metrics import segment_count


def line(*pairs):
    return ColoredLine(tuple((c, F(l)) for c, l in pairs), max(c for c, _ in pairs) + 1)


def test_two_color_halving_step():
    out = apply_iet(line((0, "1/2"), (1, "1/2")), [F(1, 4), F(3, 4)], "132")
    assert out.segments == ((0, F(1, 4)), (1, F(1, 4)), (0, F(1, 4)), (1, F(1, 4)))


def test_three_color_step_1324():
    ic = ColoredLine.equal_colors(3)
    out = apply_iet(ic, [F(1, 6), F(1, 2), F(5, 6)], "1324")
    assert out.colors == [0, 1, 2, 0, 1, 2]
    assert set(out.lengths) == {F(1, 6)}


def test_piece_order_convention():
    # 3142: the third piece goes first
    ic = ColoredLine(tuple((c, F(1, 4)) for c in range(4)), 4)
    out = apply_iet(ic, [F(1, 4), F(1, 2), F(3, 4)], "3142")
    assert out.colors == [2, 0, 3, 1]


def test_cut_count_mismatch():
    with pytest.raises(ContractError):
        apply_iet(ColoredLine.equal_colors(2), [F(1, 2)], "132")


def test_cut_on_interface_is_legal():
    ic = ColoredLine.equal_colors(2)
    # pieces B1/2 | G1/4 | G1/4 reassemble into the same line
    assert apply_iet(ic, [F(1, 2), F(3, 4)], "132") == ic


def test_cutset_strict():
    for bad in ([F(0), F(1, 2)], [F(1, 2), F(1, 2)], [F(1, 2), F(1)], [F(2, 3), F(1, 3)]):
        with pytest.raises(ContractError):
            CutSet(tuple(bad))


def test_line_must_sum_to_one():
    with pytest.raises(ContractError):
        ColoredLine(((0, F(1, 2)), (1, F(1, 3))), 2)
    with pytest.raises(ContractError):
        ColoredLine(((0, F(1, 2)), (1, F(0)), (1, F(1, 2))), 2)


def test_normalize_examples():
    assert normalize(line((0, "1/4"), (0, "1/4"), (1, "1/2"))) == line((0, "1/2"), (1, "1/2"))
    done = line((0, "1/2"), (1, "1/2"))
    assert normalize(done) == done
    wrap = line((1, "1/4"), (0, "1/2"), (1, "1/4"))
    assert normalize(wrap) == wrap


def test_irreducible():
    assert is_irreducible("3142")
    assert not is_irreducible("132")
    assert not is_irreducible("123")
    assert is_irreducible("321")


def test_rotations():
    assert [str(p) for p in rotations("1324")] == ["1324", "3241", "2413", "4132"]
    assert is_rotation("123")
    assert is_rotation("2341")
    assert not is_rotation("321")


def test_permutation_text_forms():
    assert str(parse_perm("3142")) == "3142"
    assert parse_perm("3,1,4,2") == parse_perm("3142")
    long = Permutation(tuple(range(10, 0, -1)))
    assert str(long) == "10,9,8,7,6,5,4,3,2,1"
    assert parse_perm(str(long)) == long
    with pytest.raises(ContractError):
        parse_perm("1224")


def test_float_mode_snaps_near_interface():
    ic = ColoredLine.equal_colors(2, FLOAT)
    out = apply_iet(ic, [0.5 + 1e-14, 0.75], "132")
    assert segment_count(out) == segment_count(apply_iet(ic, [0.5, 0.75], "132"))


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_measure_preserved(data):
    ln = data.draw(rational_lines())
    perm = data.draw(permutations_of())
    cuts = data.draw(cut_sets(len(perm) - 1))
    out = apply_iet(ln, cuts, perm)
    for c in range(ln.k):
        assert out.color_measure(c) == ln.color_measure(c)
    assert sum(out.lengths) == 1
    assert normalize(out) == out


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_identity_is_noop(data):
    ln = data.draw(rational_lines())
    L = data.draw(st.integers(2, 6))
    cuts = data.draw(cut_sets(L - 1))
    assert apply_iet(ln, cuts, Permutation.identity(L)) == normalize(ln)


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_normalize_idempotent(data):
    ln = data.draw(rational_lines())
    once = normalize(ln)
    assert normalize(once) == once


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_rotated_perm_is_shift_of_output(data):
    ln = data.draw(rational_lines())
    perm = data.draw(permutations_of())
    cuts = data.draw(cut_sets(len(perm) - 1))
    r = data.draw(st.integers(0, len(perm) - 1))
    base = apply_iet(ln, cuts, perm)
    rotated = apply_iet(ln, cuts, perm.rotate(r))
    # the rotated output starts where piece perm(r+1) starts in the base output
    pieces = [cuts[j - 2] if j > 1 else F(0) for j in range(1, len(perm) + 1)]
    ends = list(cuts) + [F(1)]
    sizes = [ends[i] - pieces[i] for i in range(len(perm))]
    shift = sum(sizes[perm[j] - 1] for j in range(r))
    assert _circular_profile(rotated) == _circular_profile(base, shift)


def _circular_profile(ln, shift=F(0)):
    """Color as a step function on the circle, starting at ``shift``."""
    pts = []
    pos = F(0)
    for color, length in ln.segments:
        pts.append(((pos - shift) % 1, color))
        pos += length
    pts.sort()
    if pts[0][0] != 0:
        pts.insert(0, (F(0), pts[-1][1]))
    out = []
    for p, c in pts:
        if not out or out[-1][1] != c:
            out.append((p, c))
    return out


@settings(max_examples=150, deadline=None)
@given(st.data())
def test_segment_growth_bounded(data):
    ln = data.draw(rational_lines())
    perm = data.draw(permutations_of())
    cuts = data.draw(cut_sets(len(perm) - 1))
    assert segment_count(apply_iet(ln, cuts, perm)) <= segment_count(ln) + len(perm) - 1

import functools
import itertools
from fractions import Fraction

from hypothesis import strategies as st

from ietlab.line import ColoredLine, CutSet, Permutation, apply_iet, parse_perm
from ietlab.metrics import segment_count
from ietlab.optimal import CutChoice, cut_color_orders


@st.composite
def rational_lines(draw, max_segments=8, max_k=4):
    k = draw(st.integers(2, max_k))
    n = draw(st.integers(k, max_segments))
    weights = draw(st.lists(st.integers(1, 20), min_size=n, max_size=n))
    colors = list(range(k)) + draw(st.lists(st.integers(0, k - 1), min_size=n - k, max_size=n - k))
    colors = draw(st.permutations(colors))
    total = sum(weights)
    return ColoredLine(tuple((c, Fraction(w, total)) for c, w in zip(colors, weights)), k)


@st.composite
def permutations_of(draw, min_len=2, max_len=6):
    L = draw(st.integers(min_len, max_len))
    return Permutation(tuple(draw(st.permutations(range(1, L + 1)))))


@st.composite
def cut_sets(draw, count, denominator=97):
    picks = draw(st.lists(st.integers(1, denominator - 1), min_size=count, max_size=count, unique=True))
    return CutSet(tuple(Fraction(p, denominator) for p in sorted(picks)))


@functools.lru_cache(maxsize=None)
def valid_choice_sequences(perm, k, N):
    """All CutChoice sequences that add L-1 segments every iteration.

    Brute force on the forward dynamics: at each iteration try every
    feasible color order and every assignment of segment ranks, cutting the
    chosen segments at their midpoints.
    """
    perm = parse_perm(perm)
    L = len(perm)
    out = []

    def walk(line, prefix):
        if len(prefix) == N:
            out.append(tuple(prefix))
            return
        lead = line.colors[0]
        for order in cut_color_orders(perm, k):
            hits = [[p for p, c in enumerate(line.colors) if c == (lead + o) % k] for o in order]
            for idx in itertools.product(*(range(1, len(h) + 1) for h in hits)):
                pos = [hits[j][i - 1] for j, i in enumerate(idx)]
                if any(b < a for a, b in zip(pos, pos[1:])):
                    continue
                starts = [sum(line.lengths[:p], Fraction(0)) for p in range(len(line.lengths) + 1)]
                # several cuts in one segment split it evenly
                cuts = []
                seen = {}
                for p in pos:
                    m = pos.count(p)
                    seen[p] = seen.get(p, 0) + 1
                    cuts.append(starts[p] + line.lengths[p] * seen[p] / (m + 1))
                nxt = apply_iet(line, cuts, perm)
                if segment_count(nxt) == segment_count(line) + L - 1:
                    walk(nxt, prefix + [CutChoice(tuple(order), idx)])

    walk(ColoredLine.equal_colors(k), [])
    return out


ACCEPTANCE: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)

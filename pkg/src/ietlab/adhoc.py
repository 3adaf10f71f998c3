"""The ad hoc method: every iteration, cut the longest segment of each color in half.

This is one-iteration-horizon optimization.  Cuts must still follow a
feasible cut-color order (for 132: a black segment, then a gray segment to
its right) so that no same-colored segments ever reconnect.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from typing import Sequence

from .line import ColoredLine, ContractError, CutSet, Permutation, apply_iet, parse_perm
from .metrics import MixReport, scaled_report, segment_count
from .optimal import default_order, enumerate_optimal_perms

log = logging.getLogger(__name__)


def default_perm(k: int) -> Permutation:
    """Smallest permutation that mixes k colors optimally: 132, 1324, 13524, ..."""
    return min(p for p in enumerate_optimal_perms(k + 1, k, check=False) if p[0] == 1)


@dataclass(frozen=True)
class AdHocState:
    line: ColoredLine
    N: int
    perm: Permutation
    history: tuple = ()
    fallbacks: int = 0

    @classmethod
    def start(cls, k: int, perm=None, line: ColoredLine | None = None) -> "AdHocState":
        perm = default_perm(k) if perm is None else parse_perm(perm)
        if line is None:
            line = ColoredLine.equal_colors(k)
        return cls(line, 0, perm)

    @property
    def k(self) -> int:
        return self.line.k

    def report(self) -> MixReport:
        return scaled_report(self.line, self.N, len(self.perm), self.k)


def select_segments(colors: Sequence[int], lengths: Sequence, order: Sequence[int], k: int):
    """Pick one segment per cut slot following ``order``.

    Slot by slot, take the longest segment of the required color (leftmost on
    ties) among those that still leave room for the remaining slots to the
    right.  Returns (positions, changed) where ``changed`` says whether some
    slot could not take the leftmost longest segment of its color.
    """
    lead = colors[0]
    want = [(lead + o) % k for o in order]
    m = len(colors)
    latest = [0] * len(want)
    bound = m
    for j in range(len(want) - 1, -1, -1):
        p = bound - 1
        while p >= 0 and colors[p] != want[j]:
            p -= 1
        if p < 0:
            raise ContractError("no order-respecting choice of segments for order %s" % (tuple(order),))
        latest[j] = p
        bound = p

    positions = []
    taken = set()
    changed = False
    prev = -1
    for j, color in enumerate(want):
        best = None
        for p in range(prev + 1, latest[j] + 1):
            if colors[p] == color and (best is None or lengths[p] > lengths[best]):
                best = p
        unconstrained = None
        for p in range(m):
            if colors[p] == color and p not in taken and (unconstrained is None or lengths[p] > lengths[unconstrained]):
                unconstrained = p
        if best != unconstrained:
            changed = True
        positions.append(best)
        taken.add(best)
        prev = best
    return positions, changed


def adhoc_cuts(state: AdHocState) -> tuple:
    """Midpoint cuts for the next step, plus whether the order forced a fallback."""
    line = state.line
    order = default_order(state.perm, state.k)
    positions, changed = select_segments(line.colors, line.lengths, order, state.k)
    starts = [0]
    for length in line.lengths:
        starts.append(starts[-1] + length)
    cuts = CutSet(tuple(starts[p] + line.lengths[p] / 2 for p in positions))
    return cuts, changed


def advance(state: AdHocState, cuts) -> AdHocState:
    """Apply the state's permutation with the given cuts."""
    if not isinstance(cuts, CutSet):
        cuts = CutSet(tuple(cuts))
    before = segment_count(state.line)
    line = apply_iet(state.line, cuts, state.perm)
    gained = segment_count(line) - before
    if gained != len(state.perm) - 1:
        log.warning("iteration %d added %d segments instead of %d", state.N + 1, gained, len(state.perm) - 1)
    return replace(state, line=line, N=state.N + 1, history=state.history + (cuts,))


def adhoc_step(state: AdHocState) -> AdHocState:
    cuts, changed = adhoc_cuts(state)
    new = advance(state, cuts)
    if changed:
        log.info("iteration %d: cut order forced a segment other than the longest", state.N + 1)
        new = replace(new, fallbacks=new.fallbacks + 1)
    return new


def adhoc_trajectory(k: int = 2, perm=None, N_max: int = 20, line: ColoredLine | None = None) -> list:
    """States for N = 0..N_max."""
    state = AdHocState.start(k, perm, line)
    states = [state]
    for _ in range(N_max):
        state = adhoc_step(state)
        states.append(state)
    return states


def run_adhoc(k: int = 2, perm=None, N_max: int = 20, line: ColoredLine | None = None) -> list:
    return [s.report() for s in adhoc_trajectory(k, perm, N_max, line)]

"""Periodic mixing metrics.

All metrics treat the line as a circle: a segment at the end of the line and
one at the start with the same color count as one segment.
"""

from __future__ import annotations

from dataclasses import dataclass, fields
from fractions import Fraction
from typing import Sequence

from .line import ColoredLine, ContractError, Scalar, normalize


def cyclic_segments(lengths: Sequence, colors: Sequence[int]):
    """Join the wrap-around pair; returns ``(lengths, colors, offset)``.

    ``offset`` is the start position of the first returned segment, which is
    negative when the last stored segment was folded into the first.
    """
    lengths = list(lengths)
    colors = list(colors)
    offset = 0
    if len(colors) > 1 and colors[0] == colors[-1]:
        last = lengths.pop()
        colors.pop()
        lengths[0] = lengths[0] + last
        offset = -last
    return lengths, colors, offset


def segment_count_lists(lengths, colors) -> int:
    if len(colors) > 1 and colors[0] == colors[-1]:
        return len(colors) - 1
    return len(colors)


def percent_unmixed_lists(lengths, colors):
    if len(colors) > 1 and colors[0] == colors[-1]:
        best = lengths[0] + lengths[-1]
        for length in lengths[1:-1]:
            if length > best:
                best = length
        return best
    return max(lengths)


def evenness_lists(lengths, colors, k: int | None = None, total=1):
    """Largest cyclic gap between consecutive segments of one color.

    ``total`` is the length of the whole line (1 unless lengths are integer units).
    """
    lengths, colors, pos = cyclic_segments(lengths, colors)
    first_start = {}
    last_end = {}
    worst = None
    for length, color in zip(lengths, colors):
        if color in last_end:
            gap = pos - last_end[color]
            if worst is None or gap > worst:
                worst = gap
        else:
            first_start[color] = pos
        pos = pos + length
        last_end[color] = pos
    if k is not None and len(first_start) != k:
        missing = sorted(set(range(k)) - set(first_start))
        raise ContractError("colors %s are absent from the line" % missing)
    for color, start in first_start.items():
        gap = start + total - last_end[color]
        if worst is None or gap > worst:
            worst = gap
    return worst


# The line-level wrappers normalize first; the list versions assume their
# input already has no adjacent same-colored segments.


def percent_unmixed(line: ColoredLine) -> Scalar:
    line = normalize(line)
    return percent_unmixed_lists(line.lengths, line.colors)


def evenness(line: ColoredLine) -> Scalar:
    line = normalize(line)
    return evenness_lists(line.lengths, line.colors, line.k)


def segment_count(line: ColoredLine) -> int:
    line = normalize(line)
    return segment_count_lists(line.lengths, line.colors)


@dataclass(frozen=True)
class MixReport:
    N: int
    L: int
    k: int
    segment_count: int
    U: Scalar
    D: Scalar
    U_hat: Scalar
    D_hat: Scalar
    Phi: Scalar

    CSV_HEADER = ("N", "L", "k", "segments", "U", "D", "U_hat", "D_hat", "Phi")

    def csv_row(self) -> list:
        return [str(self.N), str(self.L), str(self.k), str(self.segment_count)] + [
            format_scalar(getattr(self, name)) for name in ("U", "D", "U_hat", "D_hat", "Phi")
        ]


def format_scalar(value) -> str:
    """Rationals as ``num/den``, floats as the shortest round-trip decimal."""
    if isinstance(value, Fraction):
        return "%d/%d" % (value.numerator, value.denominator)
    if isinstance(value, int):
        return "%d/1" % value
    return repr(float(value))


def scale_factor(N: int, L: int, k: int) -> int:
    """Maximum number of segments after N iterations: N(L-1)+k."""
    return N * (L - 1) + k


def report_lists(lengths, colors, N: int, L: int, k: int) -> MixReport:
    if k < 2:
        raise ContractError("scaled evenness needs at least two colors, got k=%d" % k)
    if N < 0 or L < 2:
        raise ContractError("need N >= 0 and L >= 2")
    U = percent_unmixed_lists(lengths, colors)
    D = evenness_lists(lengths, colors, k)
    m = scale_factor(N, L, k)
    if isinstance(U, Fraction):
        U_hat = m * U
        D_hat = Fraction(m, k - 1) * D
        Phi = (U_hat + D_hat) / 2
    else:
        U_hat = m * U
        D_hat = m * D / (k - 1)
        Phi = (U_hat + D_hat) / 2
    return MixReport(N, L, k, segment_count_lists(lengths, colors), U, D, U_hat, D_hat, Phi)


def scaled_report(line: ColoredLine, N: int, L: int, k: int | None = None) -> MixReport:
    if k is None:
        k = line.k
    line = normalize(line)
    return report_lists(line.lengths, line.colors, N, L, k)


def phi_lists(lengths, colors, N: int, L: int, k: int, total=1) -> float:
    """Phi alone, for the sweep inner loop.

    With integer lengths summing to ``total`` the result is the correctly
    rounded float of the exact value.
    """
    m = N * (L - 1) + k
    U = percent_unmixed_lists(lengths, colors)
    D = U if k == 2 else evenness_lists(lengths, colors, total=total)
    if isinstance(U, int):
        return m * (U * (k - 1) + D) / (2 * (k - 1) * total)
    return (m * U + m * D / (k - 1)) / 2


def report_fields():
    return [f.name for f in fields(MixReport)]

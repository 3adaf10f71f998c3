"""Colored unit interval and the cut-and-shuffle map.

Permutations use one-line notation where output slot ``j`` receives cut
piece ``perm[j]``.  So ``3142`` puts the third piece first, then the first,
the fourth and the second.  The opposite convention is also common in the
literature; everything in this package uses the slot-receives-piece one.

Lengths are either all :class:`fractions.Fraction` (rational mode, exact) or
all ``float`` (float mode).  In float mode two interfaces closer than
:data:`FLOAT_TOL` are treated as the same interface.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, NamedTuple, Sequence, Union

Scalar = Union[Fraction, float]

FLOAT_TOL = 1e-12

RATIONAL = "rational"
FLOAT = "float"


class ContractError(ValueError):
    """An operation was called with arguments violating its preconditions."""


def as_scalar(value, mode: str) -> Scalar:
    if mode == RATIONAL:
        if type(value) is Fraction:
            return value
        if isinstance(value, float):
            raise ContractError("float value %r given in rational mode" % value)
        if isinstance(value, str):
            return Fraction(value)
        return Fraction(value)
    return float(value)


def mode_of(values: Iterable) -> str:
    values = list(values)
    if values and all(isinstance(v, Rational) for v in values):
        return RATIONAL
    return FLOAT


def exact_sum(values: Iterable[Fraction]) -> Fraction:
    """Sum of Fractions over their common denominator (one reduction at the end)."""
    values = list(values)
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return Fraction(sum(v.numerator * (den // v.denominator) for v in values), den)


class Segment(NamedTuple):
    color: int
    length: Scalar


@dataclass(frozen=True)
class ColoredLine:
    """Ordered colored segments partitioning [0, 1).

    The stored list is not cyclic: a segment at the start and one at the end
    with the same color stay separate here and are joined only by the metrics.
    """

    segments: tuple
    k: int

    def __post_init__(self):
        segs = tuple(Segment(int(c), l) for c, l in self.segments)
        if not segs:
            raise ContractError("a line needs at least one segment")
        mode = mode_of(s.length for s in segs)
        segs = tuple(Segment(s.color, as_scalar(s.length, mode)) for s in segs)
        for s in segs:
            if not 0 <= s.color < self.k:
                raise ContractError("color %d outside [0, %d)" % (s.color, self.k))
            if s.length <= 0:
                raise ContractError("segment lengths must be positive")
        if mode == RATIONAL:
            if exact_sum(s.length for s in segs) != 1:
                raise ContractError("segment lengths must sum to 1")
        elif abs(math.fsum(s.length for s in segs) - 1.0) > FLOAT_TOL:
            raise ContractError("segment lengths must sum to 1 (within %g)" % FLOAT_TOL)
        object.__setattr__(self, "segments", segs)

    @classmethod
    def from_lists(cls, colors: Sequence[int], lengths: Sequence, k: int | None = None) -> "ColoredLine":
        if k is None:
            k = max(colors) + 1
        return cls(tuple(zip(colors, lengths)), k)

    @classmethod
    def equal_colors(cls, k: int, mode: str = RATIONAL) -> "ColoredLine":
        """The k-color initial condition: one segment of each color, equal lengths, in order."""
        if k < 1:
            raise ContractError("k must be positive")
        length = Fraction(1, k) if mode == RATIONAL else 1.0 / k
        return cls(tuple((c, length) for c in range(k)), k)

    @property
    def mode(self) -> str:
        return RATIONAL if isinstance(self.segments[0].length, Fraction) else FLOAT

    @property
    def colors(self) -> list:
        return [s.color for s in self.segments]

    @property
    def lengths(self) -> list:
        return [s.length for s in self.segments]

    def __len__(self):
        return len(self.segments)

    def color_measure(self, color: int) -> Scalar:
        lengths = [s.length for s in self.segments if s.color == color]
        if self.mode == RATIONAL:
            return sum(lengths, Fraction(0))
        return math.fsum(lengths)

    def interfaces(self) -> list:
        """Positions of the left edges of segments 1..m-1."""
        out, pos = [], 0
        for s in self.segments[:-1]:
            pos += s.length
            out.append(pos)
        return out

    def to_float(self) -> "ColoredLine":
        return ColoredLine(tuple((c, float(l)) for c, l in self.segments), self.k)

    def rotated(self, shift: int) -> "ColoredLine":
        """Cyclic shift of the stored segment list (a rotation of the circle)."""
        shift %= len(self.segments)
        return ColoredLine(self.segments[shift:] + self.segments[:shift], self.k)


@dataclass(frozen=True)
class Permutation:
    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise ContractError("%r is not a permutation of 1..%d" % (images, len(images)))
        object.__setattr__(self, "images", images)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        text = text.strip()
        if "," in text:
            return cls(tuple(int(t) for t in text.split(",")))
        if not text.isdigit():
            raise ContractError("cannot parse permutation %r" % text)
        return cls(tuple(int(ch) for ch in text))

    @classmethod
    def identity(cls, L: int) -> "Permutation":
        return cls(tuple(range(1, L + 1)))

    def __len__(self):
        return len(self.images)

    def __getitem__(self, j):
        return self.images[j]

    def __iter__(self):
        return iter(self.images)

    def __str__(self):
        if len(self.images) <= 9:
            return "".join(str(i) for i in self.images)
        return ",".join(str(i) for i in self.images)

    def __repr__(self):
        return "Permutation(%s)" % self

    def rotate(self, r: int) -> "Permutation":
        """tau(i) = perm(i + r mod L)."""
        L = len(self.images)
        return Permutation(tuple(self.images[(i + r) % L] for i in range(L)))


def parse_perm(perm) -> Permutation:
    if isinstance(perm, Permutation):
        return perm
    if isinstance(perm, str):
        return Permutation.parse(perm)
    return Permutation(tuple(perm))


def is_irreducible(perm) -> bool:
    perm = parse_perm(perm)
    L = len(perm)
    top = 0
    for j in range(L - 1):
        top = max(top, perm[j])
        if top == j + 1:
            return False
    return True


def rotations(perm) -> list:
    perm = parse_perm(perm)
    return [perm.rotate(r) for r in range(len(perm))]


def is_rotation(perm) -> bool:
    perm = parse_perm(perm)
    L = len(perm)
    r = perm[0] - 1
    return all(perm[i] == (i + r) % L + 1 for i in range(L))


@dataclass(frozen=True)
class CutSet:
    cuts: tuple

    def __post_init__(self):
        cuts = tuple(self.cuts)
        if cuts:
            mode = mode_of(cuts)
            cuts = tuple(as_scalar(c, mode) for c in cuts)
        prev = 0
        for c in cuts:
            if not prev < c < 1:
                raise ContractError("cuts must satisfy 0 < c_1 < ... < c_{L-1} < 1, got %r" % (cuts,))
            prev = c
        object.__setattr__(self, "cuts", cuts)

    def __len__(self):
        return len(self.cuts)

    def __iter__(self):
        return iter(self.cuts)

    def __getitem__(self, j):
        return self.cuts[j]

    @property
    def mode(self) -> str:
        return mode_of(self.cuts) if self.cuts else RATIONAL


def _group_sum(values: list, exact: bool):
    if len(values) == 1:
        return values[0]
    if not exact:
        return math.fsum(values)
    if isinstance(values[0], Fraction):
        return exact_sum(values)
    return sum(values[1:], values[0])


def shuffle_lists(lengths: Sequence, colors: Sequence[int], cuts: Sequence, images: Sequence[int], tol: float = 0):
    """Cut-and-shuffle on plain lists, returning normalized ``(lengths, colors)``.

    This is the kernel behind :func:`apply_iet` and the sweeps.  A cut within
    ``tol`` of an existing interface lands on that interface.
    """
    pieces = []
    cur_l: list = []
    cur_c: list = []
    pos = 0
    ci = 0
    ncut = len(cuts)
    for length, color in zip(lengths, colors):
        start = pos
        end = pos + length
        while ci < ncut and cuts[ci] < end - tol:
            c = cuts[ci]
            if c - start > tol:
                cur_l.append(c - start)
                cur_c.append(color)
                start = c
            pieces.append((cur_l, cur_c))
            cur_l, cur_c = [], []
            ci += 1
        cur_l.append(end - start)
        cur_c.append(color)
        pos = end
    while ci < ncut:
        pieces.append((cur_l, cur_c))
        cur_l, cur_c = [], []
        ci += 1
    pieces.append((cur_l, cur_c))

    exact = tol == 0
    groups: list = []
    out_c: list = []
    for j in images:
        pl, pc = pieces[j - 1]
        for length, color in zip(pl, pc):
            if out_c and out_c[-1] == color:
                groups[-1].append(length)
            else:
                groups.append([length])
                out_c.append(color)
    return [_group_sum(g, exact) for g in groups], out_c


def normalize(line: ColoredLine) -> ColoredLine:
    """Merge adjacent same-colored segments (not the wrap-around pair)."""
    segs = line.segments
    if all(a.color != b.color for a, b in zip(segs, segs[1:])):
        return line
    exact = line.mode == RATIONAL
    groups: list = []
    colors: list = []
    for color, length in line.segments:
        if colors and colors[-1] == color:
            groups[-1].append(length)
        else:
            groups.append([length])
            colors.append(color)
    return ColoredLine(tuple(zip(colors, (_group_sum(g, exact) for g in groups))), line.k)


def apply_iet(line: ColoredLine, cuts, perm) -> ColoredLine:
    """Cut ``line`` at ``cuts`` and reassemble the pieces in order p_perm(1), ..., p_perm(L)."""
    perm = parse_perm(perm)
    if not isinstance(cuts, CutSet):
        cuts = CutSet(tuple(cuts))
    if len(cuts) != len(perm) - 1:
        raise ContractError("%d cuts given for a permutation of length %d" % (len(cuts), len(perm)))
    mode = line.mode
    if mode == RATIONAL and cuts.mode == FLOAT:
        line = line.to_float()
        mode = FLOAT
    if mode == RATIONAL:
        # exact: work in integer multiples of 1/Q, Q the common denominator
        values = line.lengths + list(cuts)
        Q = 1
        for v in values:
            Q = Q * v.denominator // math.gcd(Q, v.denominator)
        ints = [v.numerator * (Q // v.denominator) for v in values]
        n = len(line)
        lengths, colors = shuffle_lists(ints[:n], line.colors, ints[n:], perm.images, 0)
        lengths = [Fraction(x, Q) for x in lengths]
    else:
        lengths, colors = shuffle_lists(line.lengths, line.colors, [float(c) for c in cuts], perm.images, FLOAT_TOL)
    return ColoredLine(tuple(zip(colors, lengths)), line.k)

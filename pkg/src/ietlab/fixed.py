"""Fixed IETs: one cut set reused every iteration.

Includes the geometric piece-length construction (pieces x, rx, r^2 x, ...),
grid sweeps of Phi over the ordered cut simplex, local refinement of the
sweep minimum, and the long-run comparison against the ad hoc method.
"""

from __future__ import annotations

import itertools
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Sequence

from .adhoc import run_adhoc
from .line import FLOAT_TOL, RATIONAL, ColoredLine, ContractError, CutSet, Permutation, apply_iet, parse_perm, shuffle_lists
from .metrics import MixReport, phi_lists, scaled_report

THREADS_ENV = "IETLAB_THREADS"
HIGH_DIM_SPACING = 2e-2


@dataclass(frozen=True)
class KrotterSpec:
    L: int
    r: object
    perm: Permutation

    def __post_init__(self):
        object.__setattr__(self, "perm", parse_perm(self.perm))
        if self.L < 2 or self.L != len(self.perm):
            raise ContractError("L must be >= 2 and match the permutation length")
        if not self.r > 0:
            raise ContractError("ratio r must be positive")


def circle_ratio(i: int) -> float:
    """r = 1 + 1/(2^i pi), an effectively irrational piece-length ratio."""
    return 1.0 + 1.0 / (2.0**i * math.pi)


def krotter_cuts(spec_or_L, r=None) -> CutSet:
    """Cut locations for pieces of lengths x r^(i-1), x = (r-1)/(r^L-1).

    Rational r gives exact cuts; r = 1 gives equal pieces.
    """
    if isinstance(spec_or_L, KrotterSpec):
        L, r = spec_or_L.L, spec_or_L.r
    else:
        L = spec_or_L
    if L < 2:
        raise ContractError("L must be >= 2")
    if r == 1:
        return CutSet(tuple(Fraction(i, L) for i in range(1, L)))
    if isinstance(r, Rational):
        r = Fraction(r)
        x = (r - 1) / (r**L - 1)
    else:
        r = float(r)
        x = (r - 1.0) / (r**L - 1.0)
    cuts = []
    total = 0
    for i in range(L - 1):
        total = total + x * r**i
        cuts.append(total)
    return CutSet(tuple(cuts))


def run_fixed(ic: ColoredLine, cuts, perm, N: int) -> list:
    """Reports for N = 0..N applying the same cuts and permutation each time."""
    return [scaled_report(line, n, len(parse_perm(perm)), ic.k) for n, line in enumerate(fixed_lines(ic, cuts, perm, N))]


def fixed_lines(ic: ColoredLine, cuts, perm, N: int) -> list:
    perm = parse_perm(perm)
    lines = [ic]
    line = ic
    for _ in range(N):
        line = apply_iet(line, cuts, perm)
        lines.append(line)
    return lines


def find_period(ic: ColoredLine, cuts, perm, N_max: int):
    """Smallest N <= N_max at which the line returns exactly to ``ic``, else None."""
    perm = parse_perm(perm)
    line = ic
    for n in range(1, N_max + 1):
        line = apply_iet(line, cuts, perm)
        if line == ic:
            return n
    return None


# --- sweeps -----------------------------------------------------------------


def _grid_denominator(spacing: float) -> int | None:
    M = round(1.0 / spacing)
    if M >= 1 and abs(M * spacing - 1.0) < 1e-9:
        return M
    return None


def grid_axis(spacing: float, exact: bool = False) -> list:
    """Interior grid values m * spacing in (0, 1).

    When 1/spacing is an integer M the values are m/M (as Fractions if
    ``exact``), which keeps mirrored points 1 - c exactly on the grid.
    """
    if not spacing > 0:
        raise ContractError("spacing must be positive")
    M = _grid_denominator(spacing)
    if M is not None:
        return [Fraction(m, M) if exact else m / M for m in range(1, M)]
    out = []
    m = 1
    while m * spacing < 1.0 - FLOAT_TOL:
        out.append(m * spacing)
        m += 1
    return out


def simplex_grid(dim: int, spacing: float, exact: bool = False) -> list:
    """Points 0 < c_1 < ... < c_dim < 1 on the grid, in lexicographic order."""
    axis = grid_axis(spacing, exact)
    return [tuple(axis[i] for i in combo) for combo in itertools.combinations(range(len(axis)), dim)]


def phi_trajectory(ic_lengths, ic_colors, cuts: Sequence, images: Sequence[int], k: int, Ns: Sequence[int], total=1, tol=FLOAT_TOL) -> list:
    """Phi at each N in ``Ns`` (ascending) for one fixed IET."""
    L = len(images)
    lengths, colors = list(ic_lengths), list(ic_colors)
    out = []
    n = 0
    for target in Ns:
        while n < target:
            lengths, colors = shuffle_lists(lengths, colors, cuts, images, tol)
            n += 1
        out.append(phi_lists(lengths, colors, n, L, k, total))
    return out


def _eval_chunk(args):
    ic_lengths, ic_colors, images, k, Ns, total, tol, points = args
    return [phi_trajectory(ic_lengths, ic_colors, p, images, k, Ns, total, tol) for p in points]


def worker_count(workers: int | None = None) -> int:
    if workers is None:
        workers = os.cpu_count() or 1
    cap = os.environ.get(THREADS_ENV)
    if cap:
        workers = min(workers, max(1, int(cap)))
    return max(1, workers)


def _exact_lengths(ic: ColoredLine):
    """The line's lengths as Fractions, if float lengths are roundings of small-denominator rationals."""
    if ic.mode == RATIONAL:
        return list(ic.lengths)
    out = []
    for x in ic.lengths:
        f = Fraction(x).limit_denominator(10**6)
        if float(f) != x:
            return None
        out.append(f)
    return out if sum(out) == 1 else None


def _integer_setup(ic: ColoredLine, points: Sequence[tuple]):
    """Scale the line and rational points to integers, or None if not possible.

    Everything becomes a multiple of 1/Q with Q the common denominator, and
    cut-and-shuffle maps multiples of 1/Q to multiples of 1/Q, so the whole
    trajectory is exact in integers.
    """
    if not all(isinstance(c, Rational) for p in points for c in p):
        return None
    lengths = _exact_lengths(ic)
    if lengths is None:
        return None
    Q = 1
    for den in {f.denominator for f in lengths} | {Fraction(c).denominator for p in points for c in p}:
        Q = Q * den // math.gcd(Q, den)
    ints = [int(f * Q) for f in lengths]
    scaled = [tuple(int(Fraction(c) * Q) for c in p) for p in points]
    return ints, scaled, Q


def evaluate_points(perm, ic: ColoredLine, Ns: Sequence[int], points: Sequence[tuple], workers: int | None = None) -> list:
    """Phi rows (one per point, one column per N) in the order of ``points``.

    Points given as Fractions are evaluated exactly in integer arithmetic;
    float points use float mode with the merge tolerance.  Work is split into
    contiguous chunks and reassembled in chunk order, so the output does not
    depend on the number of workers.
    """
    perm = parse_perm(perm)
    Ns = sorted(Ns)
    exact = _integer_setup(ic, points)
    if exact is not None:
        lengths, points, total = exact
        base = (lengths, ic.colors, perm.images, ic.k, Ns, total, 0)
    else:
        points = [tuple(float(c) for c in p) for p in points]
        ic = ic.to_float()
        base = (ic.lengths, ic.colors, perm.images, ic.k, Ns, 1, FLOAT_TOL)
    workers = worker_count(workers)
    if workers == 1 or len(points) < 256:
        return _eval_chunk(base + (list(points),))
    size = -(-len(points) // (workers * 4))
    chunks = [list(points[i : i + size]) for i in range(0, len(points), size)]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        parts = list(pool.map(_eval_chunk, [base + (c,) for c in chunks]))
    return [row for part in parts for row in part]


@dataclass(frozen=True)
class SweepResult:
    perm: Permutation
    N: int
    grid_spacing: float
    phi_ave: float
    phi_min: float
    argmin: CutSet
    samples: int
    field: tuple = ()

    def to_json(self) -> dict:
        return {
            "perm": str(self.perm),
            "N": self.N,
            "grid_spacing": self.grid_spacing,
            "phi_ave": self.phi_ave,
            "phi_min": self.phi_min,
            "argmin": [float(c) for c in self.argmin],
            "samples": self.samples,
        }


# Near-ties within this margin go to the lexicographically first point, so a
# mirrored pair of minima always reports the same member.
ARGMIN_TIE = 1e-12


def _summarize(perm, N, spacing, points, values, keep_field) -> SweepResult:
    lowest = min(values)
    idx = next(i for i, v in enumerate(values) if v <= lowest + ARGMIN_TIE)
    field = tuple(zip(points, values)) if keep_field else ()
    return SweepResult(
        parse_perm(perm),
        N,
        spacing,
        math.fsum(values) / len(values),
        lowest,
        CutSet(points[idx]),
        len(values),
        field,
    )


def sweep_many(perm, ic: ColoredLine, Ns: Sequence[int], spacing: float, workers: int | None = None, keep_field: bool = False) -> dict:
    """Sweep several iteration counts at once, sharing trajectories; {N: SweepResult}."""
    perm = parse_perm(perm)
    dim = len(perm) - 1
    exact = simplex_grid(dim, spacing, exact=True)
    if not exact:
        raise ContractError("grid spacing %g leaves no interior points for %d cuts" % (spacing, dim))
    points = [tuple(float(c) for c in p) for p in exact]
    Ns = sorted(set(Ns))
    rows = evaluate_points(perm, ic, Ns, exact, workers)
    return {N: _summarize(perm, N, spacing, points, [row[i] for row in rows], keep_field) for i, N in enumerate(Ns)}


def sweep(perm, ic: ColoredLine, N: int, spacing: float | None = None, workers: int | None = None, keep_field: bool = False) -> SweepResult:
    """Phi at iteration N over the grid on 0 < c_1 < ... < c_{L-1} < 1.

    Reports the grid mean and minimum; the argmin is the lexicographically
    first grid point attaining the minimum.
    """
    perm = parse_perm(perm)
    if spacing is None:
        spacing = 5e-3 if len(perm) <= 3 else HIGH_DIM_SPACING
    return sweep_many(perm, ic, [N], spacing, workers, keep_field)[N]


def _on_grid(seed, spacing: float):
    """The seed as Fractions m/M if it lies on the rational grid of ``spacing``."""
    M = _grid_denominator(spacing)
    if M is None:
        return None
    out = []
    for c in seed:
        m = round(float(c) * M)
        if abs(float(c) * M - m) > 1e-9:
            return None
        out.append(Fraction(m, M))
    return tuple(out)


def refine_minimum(perm, ic: ColoredLine, N: int, seed, rounds: int = 5, factor: int = 10, spacing: float = 5e-3, window: int = 2, workers: int | None = None):
    """Progressively finer grids around the best point found so far.

    Each round searches +-``window`` cells of the previous spacing with a
    spacing ``factor`` times smaller, keeping only points inside the ordered
    simplex.  The incumbent is always re-evaluated, so the result never gets
    worse than the seed.  Seeds on a rational grid are refined exactly.
    """
    perm = parse_perm(perm)
    exact = _on_grid(seed, spacing)
    best = exact if exact is not None else tuple(float(c) for c in seed)
    dim = len(best)
    if dim != len(perm) - 1:
        raise ContractError("seed has %d cuts, permutation needs %d" % (dim, len(perm) - 1))
    best_phi = evaluate_points(perm, ic, [N], [best], 1)[0][0]
    h = Fraction(1, _grid_denominator(spacing)) if exact is not None else spacing
    for _ in range(rounds):
        fine = h / factor
        steps = range(-window * factor, window * factor + 1)
        axes = [[c + s * fine for s in steps] for c in best]
        points = []
        for p in itertools.product(*axes):
            if 0 < p[0] and p[-1] < 1 and all(a < b for a, b in zip(p, p[1:])):
                points.append(p)
        values = [row[0] for row in evaluate_points(perm, ic, [N], points, workers)]
        for p, v in zip(points, values):
            if v < best_phi - ARGMIN_TIE:
                best, best_phi = p, v
        h = fine
    return CutSet(tuple(float(c) for c in best)), best_phi


# --- long-run comparison ---------------------------------------------------


@dataclass(frozen=True)
class ComparisonTable:
    N_max: int
    i_values: tuple
    fixed: dict  # i -> list of Phi for N = 0..N_max
    adhoc: list

    def best_final(self) -> float:
        return min(series[-1] for series in self.fixed.values())

    def rows(self):
        header = ["N"] + ["fixed_i=%d" % i for i in self.i_values] + ["adhoc"]
        body = []
        for n in range(self.N_max + 1):
            body.append([n] + [self.fixed[i][n] for i in self.i_values] + [self.adhoc[n]])
        return header, body


def weak_mixing_comparison(i_values: Sequence[int] = (-1, 0, 1, 2), N_max: int = 100, perm="321", adhoc_perm="132") -> ComparisonTable:
    """Fixed IETs with r = 1 + 1/(2^i pi) against the ad hoc method, two colors."""
    perm = parse_perm(perm)
    ic = ColoredLine.equal_colors(2, "float")
    fixed = {}
    for i in i_values:
        cuts = krotter_cuts(len(perm), circle_ratio(i))
        fixed[i] = [float(r.Phi) for r in run_fixed(ic, cuts, perm, N_max)]
    adhoc = [float(r.Phi) for r in run_adhoc(2, adhoc_perm, N_max)]
    return ComparisonTable(N_max, tuple(i_values), fixed, adhoc)

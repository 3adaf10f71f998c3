"""Optimal variable IETs: edge-color systems, permutation enumeration and
exact construction of cut locations that give Phi = 1.

Colors are integers mod k.  A line that mixes optimally is, read around the
circle, the sequence 0, 1, ..., k-1 repeated.  Every junction created by the
shuffle must therefore join a right edge of color c to a left edge of color
c + 1 (mod k), and every cut must fall strictly inside a segment.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .line import (
    ColoredLine,
    ContractError,
    CutSet,
    Permutation,
    apply_iet,
    is_rotation,
    normalize,
    parse_perm,
    rotations,
    shuffle_lists,
)
from .metrics import segment_count_lists

MAX_BRUTE_L = 9


@dataclass(frozen=True)
class EdgeColorSolution:
    right_edges: tuple
    left_edges: tuple
    cut_color_order: tuple

    def letters(self, names: str = "BGWL") -> str:
        return "".join(names[c] for c in self.cut_color_order)


class _OffsetUnionFind:
    """Union-find over Z_k with value(x) = value(root(x)) + offset(x)."""

    def __init__(self, n: int, k: int):
        self.parent = list(range(n))
        self.offset = [0] * n
        self.k = k

    def find(self, x: int):
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root = x
        # compress from the top of the path down
        acc = 0
        for node in reversed(path):
            acc = (acc + self.offset[node]) % self.k
            self.offset[node] = acc
            self.parent[node] = root
        return root

    def relate(self, a: int, b: int, diff: int) -> bool:
        """Impose value(a) = value(b) + diff; False if inconsistent."""
        ra, rb = self.find(a), self.find(b)
        oa, ob = self.offset[a], self.offset[b]
        if ra == rb:
            return (oa - ob - diff) % self.k == 0
        self.parent[ra] = rb
        self.offset[ra] = (ob + diff - oa) % self.k
        return True


def _edge_systems(perm: Permutation, k: int):
    """All (left, right) edge colorings satisfying the cyclic junction system.

    Unknowns are the right-edge colors r_1..r_L; node L (index L) is pinned to
    zero so constants can be expressed as offsets from it.  Left edges follow
    from l_1 = 0 and l_{j+1} = r_j (cuts inside segments).
    """
    L = len(perm)
    ZERO = L
    uf = _OffsetUnionFind(L + 1, k)
    ok = uf.relate(L - 1, ZERO, k - 1)  # r_L = C_k

    def left(m: int):
        # l_m as (node, constant): value = value(node) + constant
        return (ZERO, 0) if m == 1 else (m - 2, 0)

    for j in range(L):
        a = perm[j]
        b = perm[(j + 1) % L]
        node, const = left(b)
        # l_b = r_a + 1  ->  r_a = l_b - 1
        ok = ok and uf.relate(a - 1, node, const - 1)
    if not ok:
        return []

    roots = sorted({uf.find(x) for x in range(L)} - {uf.find(ZERO)})
    zero_root = uf.find(ZERO)
    out = []
    for values in itertools.product(range(k), repeat=len(roots)):
        base = dict(zip(roots, values))
        base[zero_root] = (-uf.offset[ZERO]) % k
        r = tuple((base[uf.find(x)] + uf.offset[x]) % k for x in range(L))
        l = (0,) + r[:-1]
        out.append(EdgeColorSolution(r, l, r[:-1]))
    return sorted(out, key=lambda s: s.cut_color_order)


def solve_edge_colors(perm, k: int) -> list:
    """Solve the modular edge-color system for a permutation with perm(1) = 1.

    Returns every assignment of cut-piece edge colors (colors mod k, left edge
    of the line 0, right edge k-1) such that all cuts sit inside segments and
    each of the L cyclic junctions joins color c to color c+1.  The list is
    empty exactly when the permutation cannot add L-1 segments per iteration.
    """
    perm = parse_perm(perm)
    if perm[0] != 1:
        raise ContractError("solve_edge_colors needs perm(1) = 1, got %s; rotate it first" % perm)
    if k < 2:
        raise ContractError("need at least two colors")
    return _edge_systems(perm, k)


def canonical_rotation(perm) -> Permutation:
    """The rotation of ``perm`` that fixes 1."""
    perm = parse_perm(perm)
    return perm.rotate(perm.images.index(1))


def cut_color_orders(perm, k: int) -> list:
    """Feasible cut-color orders for any permutation, relative to the line's first color.

    Junction constraints are cyclic, so every rotation of a permutation has
    the same solutions.
    """
    return [s.cut_color_order for s in _edge_systems(canonical_rotation(perm), k)]


def _is_monotone(order) -> bool:
    return all(a <= b for a, b in zip(order, order[1:]))


def default_order(perm, k: int) -> tuple:
    """The nondecreasing feasible order: cuts in color 0 first, then color 1, and so on.

    Only a nondecreasing order can be realized on the k-equal-color start line,
    which has a single segment of each color.
    """
    for order in cut_color_orders(perm, k):
        if _is_monotone(order):
            return order
    raise ContractError("permutation %s cannot mix %d colors optimally" % (parse_perm(perm), k))


def is_optimal_capable(perm, k: int) -> bool:
    """Can a variable IET with this permutation add L-1 segments every iteration
    from the k-equal-color line while keeping the colors in repeating order?"""
    perm = parse_perm(perm)
    L = len(perm)
    if k < 2 or (L - 1) % k or is_rotation(perm):
        return False
    return any(_is_monotone(o) for o in cut_color_orders(perm, k))


def _eq25_bases(n: int):
    """Permutations with perm(1) = 1 of the closed form for two colors, L = 2n+1."""
    L = 2 * n + 1
    for p1 in itertools.permutations(range(2, n + 1)):
        pi1 = dict(zip(range(2, n + 1), p1))
        for p2 in itertools.permutations(range(n + 2, L + 1)):
            pi2 = dict(zip(range(n + 2, L + 1), p2))
            for kk in range(1, n + 1):
                seq = [1, pi2[n + 2]]
                for i in range(2, kk + 1):
                    seq += [pi1[i], pi2[i + n + 1]]
                seq.append(n + 1)
                for i in range(kk + 1, n + 1):
                    seq += [pi1[i], pi2[i + n + 1]]
                yield Permutation(tuple(seq))


def constructive_optimal_perms(L: int) -> list:
    """Two-color optimal permutations from the closed form plus all rotations."""
    if L < 3 or L % 2 == 0:
        return []
    seen = set()
    out = []
    for base in _eq25_bases((L - 1) // 2):
        for rot in rotations(base):
            if rot not in seen:
                seen.add(rot)
                out.append(rot)
    return out


def _brute_optimal_perms(L: int, k: int) -> list:
    if L > MAX_BRUTE_L:
        raise ContractError("brute permutation scan limited to L <= %d" % MAX_BRUTE_L)
    out = []
    for rest in itertools.permutations(range(2, L + 1)):
        base = Permutation((1,) + rest)
        if is_optimal_capable(base, k):
            out.extend(rotations(base))
    return out


def enumerate_optimal_perms(L: int, k: int, check: bool = True) -> list:
    """All permutations of length L that can mix k equal colors optimally.

    Each base permutation (fixing 1) is followed by its rotations.  For two
    colors the closed form generates the list; with ``check`` it is compared
    against the edge-color filter over S_L when L is small enough.
    """
    if k < 2:
        raise ContractError("need at least two colors")
    if L < 2 or (L - 1) % k:
        raise ContractError("L-1 must be a positive multiple of k (L=%d, k=%d)" % (L, k))
    if k == 2:
        perms = constructive_optimal_perms(L)
        if check and L <= MAX_BRUTE_L:
            brute = _brute_optimal_perms(L, k)
            if set(brute) != set(perms):
                raise AssertionError("closed form and edge-color filter disagree for L=%d" % L)
        return perms
    return _brute_optimal_perms(L, k)


def count_optimal_perms(n: int) -> int:
    """(n!)^2 (2n+1) two-color optimal permutations of length 2n+1."""
    if n < 1:
        raise ContractError("n must be >= 1")
    return math.factorial(n) ** 2 * (2 * n + 1)


def count_optimal_cut_sets(N: int) -> int:
    """Distinct optimal cut-set sequences for perm 132 over N iterations: (N!)^2 (N+1) / 2^N."""
    if N < 1:
        raise ContractError("N must be >= 1")
    num = math.factorial(N) ** 2 * (N + 1)
    assert num % 2**N == 0
    return num // 2**N


def count_cut_choice_codes(n: int, N: int) -> int:
    """binom(n(N+1), 2n): ordered 2n-tuple codes available at iteration N.

    Some permutations (e.g. 14325) admit more optima than this coding counts.
    """
    return math.comb(n * (N + 1), 2 * n)


@dataclass(frozen=True)
class CutChoice:
    """Where the cuts of one iteration go.

    ``order[j]`` is the color of the segment holding cut j, relative to the
    color of the line's first segment.  ``index[j]`` is the 1-based rank of
    that segment among the segments of its color.  For perm 132 this is the
    pair (i, j): cut the i-th black and the j-th gray segment.
    """

    order: tuple
    index: tuple

    def to_json(self):
        return {"order": list(self.order), "index": list(self.index)}

    @classmethod
    def from_json(cls, obj) -> "CutChoice":
        return cls(tuple(obj["order"]), tuple(obj["index"]))


@dataclass(frozen=True)
class VariableProtocol:
    perm: Permutation
    cut_sets: tuple
    k: int
    choices: tuple = field(default=())

    @property
    def N(self) -> int:
        return len(self.cut_sets)

    def run(self, ic: ColoredLine | None = None) -> list:
        """Lines for N = 0..N."""
        line = ic if ic is not None else ColoredLine.equal_colors(self.k)
        lines = [line]
        for cuts in self.cut_sets:
            line = apply_iet(line, cuts, self.perm)
            lines.append(line)
        return lines


def default_choice(colors: Sequence[int], order: Sequence[int], k: int) -> CutChoice:
    """Put each cut in the earliest segment of its color at or after the previous cut's segment."""
    lead = colors[0]
    pos = 0
    index = []
    for rel in order:
        want = (lead + rel) % k
        while colors[pos] != want:
            pos += 1
            if pos == len(colors):
                raise ContractError("no segment of color %d after the previous cut" % want)
        index.append(sum(1 for c in colors[: pos + 1] if c == want))
    return CutChoice(tuple(order), tuple(index))


def _locate(colors: Sequence[int], choice: CutChoice, k: int) -> list:
    """Segment positions for each cut of ``choice``; raises on bad input."""
    lead = colors[0]
    positions = []
    for rel, idx in zip(choice.order, choice.index):
        want = (lead + rel) % k
        hits = [p for p, c in enumerate(colors) if c == want]
        if not 1 <= idx <= len(hits):
            raise ContractError("no segment #%d of color %d" % (idx, want))
        positions.append(hits[idx - 1])
    if any(b < a for a, b in zip(positions, positions[1:])):
        raise ContractError("cut segments %s are not in left-to-right order" % positions)
    return positions


def _symbolic_step(line: list, colors_of: dict, positions: Sequence[int], perm: Permutation, new_node):
    """One forward iteration on node ids.

    Returns (pieces_flat, cut_bounds, new_line): the post-cut arrangement as a
    flat node list, the indices in it where each cut sits, and the shuffled line.
    """
    children = {}
    counts = {}
    for p in positions:
        counts[p] = counts.get(p, 0) + 1
    flat = []
    bounds = []
    pieces = [[]]
    for p, node in enumerate(line):
        m = counts.get(p, 0)
        if m:
            parts = [new_node(colors_of[node]) for _ in range(m + 1)]
            children[node] = parts
        else:
            parts = [node]
        for q, part in enumerate(parts):
            if q:
                bounds.append(len(flat))
                pieces.append([])
            flat.append(part)
            pieces[-1].append(part)
    new_line = [node for j in perm for node in pieces[j - 1]]
    return flat, bounds, new_line, children


def build_optimal_protocol(perm, k: int, N: int, choices: Sequence[CutChoice] | None = None) -> VariableProtocol:
    """Exact cut locations that leave N(L-1)+k equal segments after N iterations.

    Runs N iterations symbolically, tracking which atom each cut splits; gives
    every final atom length 1/(N(L-1)+k); then reads the cut locations of each
    iteration off as prefix sums of atom lengths in its pre-cut arrangement.
    """
    perm = parse_perm(perm)
    L = len(perm)
    if N < 0:
        raise ContractError("N must be >= 0")
    if not is_optimal_capable(perm, k):
        raise ContractError("permutation %s cannot mix %d colors optimally" % (perm, k))
    if choices is not None and len(choices) != N:
        raise ContractError("expected %d cut choices, got %d" % (N, len(choices)))
    orders = set(cut_color_orders(perm, k))
    order0 = default_order(perm, k)

    colors_of = {}
    counter = itertools.count()

    def new_node(color):
        node = next(counter)
        colors_of[node] = color
        return node

    line = [new_node(c) for c in range(k)]
    history = []
    used = []
    all_children = {}
    for it in range(N):
        colors = [colors_of[n] for n in line]
        if choices is None:
            choice = default_choice(colors, order0, k)
        else:
            choice = choices[it]
            if tuple(choice.order) not in orders:
                raise ContractError("iteration %d: cut color order %s is infeasible for %s" % (it + 1, choice.order, perm))
        try:
            positions = _locate(colors, choice, k)
        except ContractError as exc:
            raise ContractError("iteration %d: %s" % (it + 1, exc)) from None
        flat, bounds, line, children = _symbolic_step(line, colors_of, positions, perm, new_node)
        all_children.update(children)
        new_colors = [colors_of[n] for n in line]
        if any((b - a) % k != 1 for a, b in zip(new_colors, new_colors[1:] + new_colors[:1])):
            raise ContractError("iteration %d: choice %s does not keep the repeating color order" % (it + 1, choice))
        history.append((flat, bounds))
        used.append(choice)

    total = N * (L - 1) + k
    length = {n: Fraction(1, total) for n in line}

    def node_length(node):
        if node not in length:
            length[node] = sum((node_length(c) for c in all_children[node]), Fraction(0))
        return length[node]

    cut_sets = []
    for flat, bounds in history:
        prefix = [Fraction(0)]
        for node in flat:
            prefix.append(prefix[-1] + node_length(node))
        cut_sets.append(CutSet(tuple(prefix[b] for b in bounds)))
    return VariableProtocol(perm, tuple(cut_sets), k, tuple(used))


def _adds_max_lists(images, k: int, lengths, colors, cuts) -> bool:
    before = segment_count_lists(lengths, colors)
    lengths, colors = shuffle_lists(lengths, colors, cuts, images)
    if segment_count_lists(lengths, colors) != before + len(images) - 1:
        return False
    if len(colors) > 1 and colors[0] == colors[-1]:
        colors = colors[:-1]
    return all((b - a) % k == 1 for a, b in zip(colors, colors[1:] + colors[:1]))


def one_step_adds_max(perm, k: int, line: ColoredLine, cuts) -> bool:
    """Does one shuffle add L-1 segments and leave the repeating color order?"""
    perm = parse_perm(perm)
    line = normalize(line)
    return _adds_max_lists(perm.images, k, line.lengths, line.colors, list(cuts))


def rich_line(k: int, blocks: int) -> ColoredLine:
    """The repeating sequence 0..k-1 written ``blocks`` times, equal lengths."""
    m = k * blocks
    return ColoredLine(tuple((i % k, Fraction(1, m)) for i in range(m)), k)


def brute_edge_orders(perm, k: int) -> list:
    """Cut-color orders found by simulating one shuffle of a long repeating line.

    Every order of L-1 colors is realized by putting cut j in block j; the
    order is kept when the shuffle adds L-1 segments in repeating order.
    Independent of the edge-color algebra.  Lengths are integers (two units
    per segment) so the cuts at segment midpoints stay exact.
    """
    perm = parse_perm(perm)
    L = len(perm)
    m = k * L
    lengths = [2] * m
    colors = [i % k for i in range(m)]
    found = []
    for order in itertools.product(range(k), repeat=L - 1):
        cuts = [2 * (j * k + c) + 1 for j, c in enumerate(order)]
        if _adds_max_lists(perm.images, k, lengths, colors, cuts):
            found.append(tuple(order))
    return found


def brute_first_step_feasible(perm, k: int) -> bool:
    """Can one shuffle of the k-equal-color line add L-1 segments in repeating order?

    Tries every split of the L-1 cuts into monotone runs per color.
    """
    perm = parse_perm(perm)
    L = len(perm)
    unit = math.factorial(L)
    lengths = [unit] * k
    colors = list(range(k))
    for counts in itertools.product(range(L), repeat=k):
        if sum(counts) != L - 1:
            continue
        cuts = []
        for c, m in enumerate(counts):
            cuts += [c * unit + (i + 1) * unit // (m + 1) for i in range(m)]
        if _adds_max_lists(perm.images, k, lengths, colors, cuts):
            return True
    return False

"""Mixing by cutting and shuffling on the unit interval.

Interval exchange transformations (IETs) with fixed or per-iteration cut
locations, the mixing metrics U, D and Phi, exact construction of optimal
variable protocols, the ad hoc halving heuristic, and fixed-protocol sweeps.
"""

from .adhoc import AdHocState, adhoc_step, run_adhoc
from .fixed import KrotterSpec, SweepResult, krotter_cuts, refine_minimum, run_fixed, sweep, weak_mixing_comparison
from .line import (
    ColoredLine,
    ContractError,
    CutSet,
    Permutation,
    Segment,
    apply_iet,
    is_irreducible,
    is_rotation,
    normalize,
    rotations,
)
from .metrics import MixReport, evenness, percent_unmixed, scaled_report, segment_count
from .optimal import (
    CutChoice,
    EdgeColorSolution,
    VariableProtocol,
    build_optimal_protocol,
    count_optimal_cut_sets,
    count_optimal_perms,
    enumerate_optimal_perms,
    is_optimal_capable,
    solve_edge_colors,
)

__version__ = "0.1.0"

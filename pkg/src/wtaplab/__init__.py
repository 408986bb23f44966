"""wtaplab: a desk-scale laboratory for weighted tree augmentation.

Exact oracles, the cut and odd-cut relaxations with an exact rational
simplex, star-event structured solutions with their randomized rounding
and cleanup phase, and a subtree-event strong relaxation, all validated
against each other on small instances.
"""

from .core import (
    Instance,
    LinkClass,
    LinkInfo,
    LinkRecord,
    build_instance,
    classify_link,
    covering_links,
    is_feasible,
    shadow_complete,
    split_link,
)
from .exact import ExactSolution, add_q, brute_force_opt, uplink_dp_opt
from .lp import (
    FractionalSolution,
    LinearProgram,
    OddCutViolation,
    cut_lp,
    dump_lp,
    is_integral,
    odd_cut_lp,
    separate_odd_cut,
    solve_lp,
)
from .classic_round import (
    PartitionPiece,
    build_partition,
    odd_cut_rounding,
    split_round_2approx,
)
from .structured import (
    Copy,
    RoundingTrace,
    Star,
    StructuredEvent,
    StructuredSolution,
    build_structured_lp,
    conditional_sample,
    enumerate_stars,
    select_vcor,
    solve_structured,
    structured_rounding,
)
# the cleanup pass itself lives at wtaplab.cleanup.cleanup; re-exporting the
# bare function would shadow the submodule attribute
from .cleanup import (
    CleanupContext,
    ProtectionState,
    compute_Ai,
    compute_Qi,
    is_dominated,
    run_15,
    run_149,
)
from .strong import (
    StrongCandidate,
    StrongEvent,
    build_strong_lp,
    check_strong_feasibility,
    enumerate_subtrees,
    ext_set,
    extension_center,
    intended_solution,
    solve_strong_lp,
)
from .harness import (
    BenchConfig,
    TrialReport,
    gen_random_instance,
    parse_instance,
    run_benchmark,
    serialize_instance,
)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"

"""Quasi-cyclic sums: graphic min/max/p-sums, monomial quotient sums,
Shapiro-Diananda bounds and the functional equation for variable windows."""

from .cyclic_bounds import BOUNDS, bkp_lower_bound, diananda_lb, mavlo_bounds, mavlo_lhs, minimize_diananda
from .digraph import (
    Digraph,
    WeightedDigraph,
    check_automorphism,
    final_strong_components,
    girth,
    is_strongly_connected,
    parse_graph,
    read_graph,
    scc,
    shortest_cycle,
)
from .errors import (
    CapacityError,
    DomainError,
    ParseError,
    PreconditionError,
    QcsError,
    StructureError,
    ValidationError,
)
from .funceq import F_exact, F_residual, amgm_f, build_F_table, shallit_min, staircase_min
from .gp import OptReport, build_quotient_sum, minimize, verify_symmetry, verify_uniqueness
from .maxsum import maxsum_infimum, maxsum_witness
from .minsum import minsum_exact, minsum_oracle
from .sums import CyclicSumSpec, circulant, diananda_sum, graphic_p_sum, power_mean

__version__ = "0.1.0"

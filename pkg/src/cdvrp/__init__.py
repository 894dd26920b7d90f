"""Capacity- and distance-constrained vehicle routing with heterogeneous fleets.

Heuristic pipelines (bin packing + distance-bounded tours, balanced tree
peeling), exact desk-scale oracles, an independent verifier, text/JSON
serialization, a CLI and an HTTP service.
"""

from .binpack import BinClass, Item, Packing, pack_variable_bins, packing_groups
from .errors import (
    CdvrpError,
    GenerationError,
    InfeasibleError,
    InfeasibleItemError,
    InstanceFormatError,
    InvalidInstanceError,
    ResourceLimitError,
)
from .metric import (
    DEPOT,
    FleetSpec,
    MetricInstance,
    ValidationReport,
    VehicleClass,
    euclidean_instance,
    fleet,
    induced_subinstance,
    random_instance,
    validate_instance,
)
from .oracle import (
    OracleLimits,
    VerifyReport,
    exact_min_tours,
    exact_pack,
    exact_tsp,
    verify_solution,
)
from .solvers import (
    BalancedPaths,
    GadgetInstance,
    RoutedTour,
    RoutingSolution,
    balance_ratio,
    balanced_paths_to_solution,
    reduce_dcvrp_to_bdcvrp,
    solve_bdcvrp,
    solve_dvrp,
    solve_min_nht,
    solve_min_nt,
)
from .treetour import (
    Path,
    PeeledBundle,
    RootedTree,
    Tour,
    deepest_heavy_vertex,
    double_shortcut,
    minimum_spanning_tree,
    peel_bundle,
    split_tour_by_distance,
    tour_from_seq,
    tour_to_path,
)

__version__ = "0.1.0"

__all__ = [
    "DEPOT",
    "BalancedPaths",
    "BinClass",
    "CdvrpError",
    "FleetSpec",
    "GadgetInstance",
    "GenerationError",
    "InfeasibleError",
    "InfeasibleItemError",
    "InstanceFormatError",
    "InvalidInstanceError",
    "Item",
    "MetricInstance",
    "OracleLimits",
    "Packing",
    "Path",
    "PeeledBundle",
    "ResourceLimitError",
    "RootedTree",
    "RoutedTour",
    "RoutingSolution",
    "Tour",
    "ValidationReport",
    "VehicleClass",
    "VerifyReport",
    "balance_ratio",
    "balanced_paths_to_solution",
    "deepest_heavy_vertex",
    "double_shortcut",
    "euclidean_instance",
    "exact_min_tours",
    "exact_pack",
    "exact_tsp",
    "fleet",
    "induced_subinstance",
    "minimum_spanning_tree",
    "pack_variable_bins",
    "packing_groups",
    "peel_bundle",
    "random_instance",
    "reduce_dcvrp_to_bdcvrp",
    "solve_bdcvrp",
    "solve_dvrp",
    "solve_min_nht",
    "solve_min_nt",
    "split_tour_by_distance",
    "tour_from_seq",
    "tour_to_path",
    "validate_instance",
    "verify_solution",
]

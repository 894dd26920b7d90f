"""Routing pipelines: capacity packing + distance-bounded tours, balanced
tree peeling, the combined balanced pipeline and the tour-padding reduction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .binpack import classes_from_fleet, items_from_instance, pack_variable_bins, packing_groups
from .errors import InfeasibleError, InvalidInstanceError
from .metric import (
    DEPOT,
    FleetSpec,
    MetricInstance,
    VehicleClass,
    induced_subinstance,
    validate_instance,
)
from .treetour import (
    LENGTH_TOL,
    Path,
    Tour,
    deepest_heavy_vertex,
    double_shortcut,
    minimum_spanning_tree,
    peel_bundle,
    split_tour_by_distance,
    tour_from_seq,
    tour_to_path,
)


class RoutedTour(NamedTuple):
    tour: Tour
    class_id: int


@dataclass(frozen=True)
class RoutingSolution:
    """A set of depot tours with vehicle-class assignments.

    ``alpha`` is the min/max ratio of tour lengths (1.0 for zero or one
    tour). ``meta`` records the algorithm, its parameters and guarantee
    flags.
    """

    tours: tuple[RoutedTour, ...]
    alpha: float
    meta: dict = field(default_factory=dict)

    @property
    def pi(self) -> int:
        """Number of tours."""
        return len(self.tours)

    def lengths(self) -> list[float]:
        return [rt.tour.length for rt in self.tours]


@dataclass(frozen=True)
class BalancedPaths:
    """Output of the balanced peeling pass: open paths plus balance stats."""

    paths: tuple[Path, ...]
    k: int
    max_len: float
    min_len: float
    alpha: float
    meta: dict = field(default_factory=dict)


def balance_ratio(lengths: Sequence[float]) -> float:
    """Shortest over longest length; 1.0 for a single entry."""
    if not lengths:
        raise ValueError("balance ratio needs at least one length")
    if any(x <= 0 for x in lengths):
        raise ValueError(f"balance ratio needs positive lengths, got {min(lengths)}")
    return min(lengths) / max(lengths)


def _solution_alpha(lengths: Sequence[float]) -> float:
    """Balance of a solution; degenerate cases (<=1 tour, all-zero) count as 1."""
    if len(lengths) <= 1:
        return 1.0
    hi = max(lengths)
    if hi <= 0.0:
        return 1.0
    return min(lengths) / hi


def _sorted_tours(routed: list[RoutedTour]) -> tuple[RoutedTour, ...]:
    """Normalize tour order (by first customer) so assembly order never shows."""
    def key(rt: RoutedTour):
        inner = [v for v in rt.tour.seq if v != DEPOT]
        return (inner[0] if inner else -1, rt.class_id)

    return tuple(sorted(routed, key=key))


def _require_valid(inst: MetricInstance) -> None:
    report = validate_instance(inst)
    if not report.ok:
        first = report.violations[0]
        raise InvalidInstanceError(
            f"instance {inst.name!r} failed validation: {first.kind} at "
            f"{first.where} (magnitude {first.magnitude:g})",
            report=report,
        )


# ---------------------------------------------------------------------------
# distance-constrained tours over one vertex set
# ---------------------------------------------------------------------------


def solve_dvrp(inst: MetricInstance, distance_bound: float) -> list[Tour]:
    """Cover all customers with depot tours of length at most ``distance_bound``.

    Pipeline: spanning tree, doubling shortcut into one grand tour, then
    greedy splitting into budget-respecting depot tours. Deterministic.
    """
    if inst.n == 1:
        return []
    radius = inst.depot_radius
    if distance_bound < 2.0 * radius - 1e-12:
        far = inst.farthest_vertex()
        raise InfeasibleError(
            f"vertex {far} at distance {radius} from the depot is out of reach "
            f"for distance bound {distance_bound}"
        )
    tree = minimum_spanning_tree(inst)
    grand = double_shortcut(inst, tree.preorder())
    return split_tour_by_distance(inst, grand, distance_bound)


def solve_min_nt(inst: MetricInstance) -> RoutingSolution:
    """Minimize the tour count: pack demands onto vehicle classes, then route
    each bin's customers with the distance-bounded pipeline of its class.

    Every tour's load respects its class capacity because the whole bin
    does; every tour's length respects the class distance bound by
    construction of the splitting step.
    """
    _require_valid(inst)
    items = items_from_instance(inst)
    classes = classes_from_fleet(inst.fleet)
    packing = pack_variable_bins(items, classes)

    routed: list[RoutedTour] = []
    for class_id, vertices in packing_groups(packing):
        sub = induced_subinstance(inst, {DEPOT, *vertices})
        bound = inst.fleet.classes[class_id].distance_bound
        for tour in solve_dvrp(sub.instance, bound):
            seq = tuple(sub.to_parent[v] for v in tour.seq)
            routed.append(RoutedTour(tour_from_seq(inst, seq), class_id))

    tours = _sorted_tours(routed)
    lengths = [rt.tour.length for rt in tours]
    return RoutingSolution(
        tours=tours,
        alpha=_solution_alpha(lengths),
        meta={
            "algorithm": "min-nt",
            "parameters": {},
            "bin_total_capacity": packing.total_size,
        },
    )


# ---------------------------------------------------------------------------
# balanced peeling
# ---------------------------------------------------------------------------


def _pad_repetitions(tour_len: float, path_budget: float) -> int:
    """Smallest power-of-two repetition of a closed traversal reaching half the budget.

    Repetition count 1 means the single traversal already suffices. Doubling
    from below half the budget can never overshoot the full budget. Capped
    at 2**16: a traversal that much shorter than the budget stays short and
    the balance ratio just reports the shortfall.
    """
    target = path_budget / 2.0 - 1e-12
    reps = 1
    while reps * tour_len < target and reps < 2**16:
        reps *= 2
    return reps


def solve_min_nht(
    inst: MetricInstance, path_budget: float, pad: bool = False
) -> BalancedPaths:
    """Cover the metric with open paths of roughly balanced lengths.

    Builds a spanning tree and, while its weight exceeds ``path_budget``
    (or the doubled residual tree would still yield an overlong path),
    peels a subtree bundle of weight just over a quarter budget at the
    deepest heavy vertex, emitting it as a doubled-and-shortcut path. The
    residual tree becomes the final path. Anchors stay in the tree for
    connectivity but are skipped by every later path.

    When the largest tree edge is at most a quarter of the budget, every
    emitted path is no longer than the budget; otherwise the bound degrades
    by twice the largest edge (reported in ``meta['length_bound']``).

    With ``pad=True``, any path shorter than half the budget is replaced by
    a repeated traversal of its closed tour (power-of-two repetitions, the
    fewest that reach half the budget) minus one edge; repetition counts
    land in ``meta['repetitions']``.
    """
    if path_budget <= 0:
        raise ValueError(f"path budget must be positive, got {path_budget}")
    tree = minimum_spanning_tree(inst)
    max_edge = tree.max_edge()
    quarter = path_budget / 4.0

    covered: set[int] = set()
    emitted: list[tuple[Path, Tour]] = []
    peels = 0
    while True:
        residual = double_shortcut(inst, tree.preorder(), frozenset(covered))
        residual_path = tour_to_path(inst, residual)
        # Each peel removes more than a quarter budget, so the tree weight
        # eventually drops to where the doubled residual fits too.
        if (
            tree.total_weight <= path_budget
            and residual_path.length <= path_budget + 1e-12
        ):
            break
        v = deepest_heavy_vertex(tree, quarter)
        if v is None:
            break
        bundle = peel_bundle(tree, v, quarter)
        peels += 1
        tour = double_shortcut(inst, bundle.order, frozenset(covered))
        covered.add(bundle.anchor)
        covered.update(bundle.vertices)
        if tour.seq:
            emitted.append((tour_to_path(inst, tour), tour))

    if residual.seq or not emitted:
        emitted.append((residual_path, residual))

    repetitions: list[int] = []
    paths: list[Path] = []
    for path, tour in emitted:
        reps = 1
        if pad and path.length < path_budget / 2.0 and tour.length > LENGTH_TOL:
            reps = _pad_repetitions(tour.length, path_budget)
            if reps > 1:
                cyc = tour.seq[:-1]
                walk = cyc * reps + (tour.seq[0],)
                repeated = Tour(seq=walk, length=reps * tour.length, load=tour.load)
                path = tour_to_path(inst, repeated)
        repetitions.append(reps)
        paths.append(path)

    lengths = [p.length for p in paths]
    max_len = max(lengths)
    min_len = min(lengths)
    in_regime = max_edge <= quarter + 1e-12
    return BalancedPaths(
        paths=tuple(paths),
        k=len(paths),
        max_len=max_len,
        min_len=min_len,
        alpha=_solution_alpha(lengths),
        meta={
            "algorithm": "min-nht",
            "parameters": {"path_budget": path_budget, "pad": pad},
            "peel_count": peels,
            "repetitions": tuple(repetitions),
            "max_tree_edge": max_edge,
            "length_bound": path_budget if in_regime else path_budget + 2.0 * max_edge,
            "bound_is_tight": in_regime,
        },
    )


def balanced_paths_to_solution(
    inst: MetricInstance, bp: BalancedPaths
) -> RoutingSolution:
    """Close balanced paths into depot tours and assign vehicle classes.

    Each closed tour gets the tightest class that fits both its load and
    its length; a tour that fits no class makes the whole conversion
    infeasible. Used by the CLI and service front ends, where solutions
    must verify as depot tours.
    """
    routed: list[RoutedTour] = []
    for path in bp.paths:
        tour = _close_path(inst, path)
        if tour is None:
            continue
        fitting = [
            (cls.distance_bound, cid)
            for cid, cls in enumerate(inst.fleet.classes)
            if tour.load <= cls.capacity + 1e-12
            and tour.length <= cls.distance_bound + LENGTH_TOL
        ]
        if not fitting:
            raise InfeasibleError(
                f"closed path of length {tour.length:g} and load {tour.load:g} "
                f"fits no vehicle class"
            )
        routed.append(RoutedTour(tour, min(fitting)[1]))
    tours = _sorted_tours(routed)
    lengths = [rt.tour.length for rt in tours]
    meta = dict(bp.meta)
    meta.update({"k": bp.k, "path_alpha": bp.alpha})
    return RoutingSolution(tours=tours, alpha=_solution_alpha(lengths), meta=meta)


# ---------------------------------------------------------------------------
# combined balanced pipeline
# ---------------------------------------------------------------------------


def _close_path(inst: MetricInstance, path: Path) -> Optional[Tour]:
    """Cap an open path with the depot on both ends; None for depot-only paths."""
    seq = list(path.seq)
    if not seq or seq == [DEPOT]:
        return None
    if seq[0] != DEPOT:
        seq.insert(0, DEPOT)
    if seq[-1] != DEPOT:
        seq.append(DEPOT)
    return tour_from_seq(inst, seq)


def _balanced_bin_tours(
    sub: MetricInstance, bound: float
) -> tuple[list[Tour], dict]:
    """Balanced paths for one bin, closed into depot tours within ``bound``.

    First tries peeling with the full bound as the path budget; closing a
    path adds up to twice the depot radius, so on any overlong tour the bin
    is re-peeled once with the budget shrunk by that much.
    """
    radius = sub.depot_radius
    budgets = [bound]
    if bound - 2.0 * radius > 0:
        budgets.append(bound - 2.0 * radius)
    last_excess = None
    for budget in budgets:
        bp = solve_min_nht(sub, budget, pad=True)
        tours = [t for t in (_close_path(sub, p) for p in bp.paths) if t is not None]
        if all(t.length <= bound + LENGTH_TOL for t in tours):
            return tours, bp.meta
        last_excess = max(t.length - bound for t in tours)
    raise InfeasibleError(
        f"could not fit balanced tours under distance bound {bound} "
        f"(worst excess {last_excess:g})"
    )


def solve_bdcvrp(inst: MetricInstance, alpha_target: float) -> RoutingSolution:
    """Balanced capacity-and-distance routing.

    Composition: capacity bin packing, then per-bin balanced peeling with
    padding (budget = the bin's class distance bound), each path closed
    into a depot tour. Reports the achieved balance over all tours and
    whether it met ``alpha_target``; it never fails just because the target
    was missed.
    """
    if not 0.0 < alpha_target < 1.0:
        raise ValueError(f"alpha target must lie in (0, 1), got {alpha_target}")
    _require_valid(inst)
    items = items_from_instance(inst)
    classes = classes_from_fleet(inst.fleet)
    packing = pack_variable_bins(items, classes)

    routed: list[RoutedTour] = []
    repetitions: list[int] = []
    for class_id, vertices in packing_groups(packing):
        sub = induced_subinstance(inst, {DEPOT, *vertices})
        bound = inst.fleet.classes[class_id].distance_bound
        tours, bin_meta = _balanced_bin_tours(sub.instance, bound)
        repetitions.extend(bin_meta.get("repetitions", ()))
        for tour in tours:
            seq = tuple(sub.to_parent[v] for v in tour.seq)
            routed.append(RoutedTour(tour_from_seq(inst, seq), class_id))

    tours = _sorted_tours(routed)
    lengths = [rt.tour.length for rt in tours]
    alpha = _solution_alpha(lengths)
    return RoutingSolution(
        tours=tours,
        alpha=alpha,
        meta={
            "algorithm": "bdcvrp",
            "parameters": {"alpha_target": alpha_target},
            "composed": True,
            "balanced": alpha >= alpha_target - 1e-12,
            "repetitions": tuple(repetitions),
        },
    )


# ---------------------------------------------------------------------------
# padding reduction: equalize tour lengths with zero-demand chains
# ---------------------------------------------------------------------------


class PaddingRecord(NamedTuple):
    """Chain added to one tour: the new vertex ids and their in-chain spacings."""

    tour_index: int
    vertices: tuple[int, ...]
    spacings: tuple[float, ...]
    return_edge: float


@dataclass(frozen=True)
class GadgetInstance:
    """A base instance extended so every given tour stretches to the same length.

    ``instance`` is the padded metric (closed under shortest paths),
    ``padded_tours`` traverse the added zero-demand chains, and ``padding``
    records what was added per tour.
    """

    base: MetricInstance
    instance: MetricInstance
    padded_tours: tuple[Tour, ...]
    padding: tuple[PaddingRecord, ...]
    alpha_target: float


def _check_tours_feasible(inst: MetricInstance, tours: Sequence[Tour]) -> None:
    seen: dict[int, int] = {}
    for i, t in enumerate(tours):
        if len(t.seq) < 3 or t.seq[0] != DEPOT or t.seq[-1] != DEPOT:
            raise InfeasibleError(f"tour {i} does not start and end at the depot: {t.seq}")
        for v in t.interior:
            if not 0 < v < inst.n:
                raise InfeasibleError(f"tour {i} visits unknown vertex {v}")
            if v in seen:
                raise InfeasibleError(
                    f"vertex {v} appears in tours {seen[v]} and {i}"
                )
            seen[v] = i
    missing = [v for v in inst.customers if v not in seen]
    if missing:
        raise InfeasibleError(f"customer {missing[0]} is not covered by any tour")


def _chain_spacings(deficit: float, radius: float, return_edge: float) -> list[float]:
    """Spacings of the padding chain inserted before the return edge.

    Default: steps of the depot radius plus one remainder step. Every chain
    edge must stay a shortest path after metric closure, i.e. no longer
    than half the cycle the chain closes (deficit plus twice the return
    edge); when the radius would violate that, two equal steps of half the
    deficit are used instead.
    """
    if radius > 0:
        s = int(math.floor(deficit / radius + 1e-12))
        rem = deficit - s * radius
        if rem < 1e-12:
            rem = 0.0
        spacings = [radius] * s + ([rem] if rem else [])
    else:
        spacings = [deficit]
    half_cycle = (deficit + 2.0 * return_edge) / 2.0
    if max(spacings) > half_cycle + 1e-12:
        spacings = [deficit / 2.0, deficit / 2.0]
    return spacings


def reduce_dcvrp_to_bdcvrp(
    inst: MetricInstance, tours: Sequence[Tour], alpha: float
) -> GadgetInstance:
    """Pad every short tour with a zero-demand chain so all lengths match.

    For each tour shorter than the longest, the final customer-to-depot
    edge is detached and a chain of new vertices totalling exactly the
    length deficit is inserted before returning to the depot over an edge
    of the original final-leg length. The padded metric is completed by
    shortest-path closure; restricting it to the original vertices
    reproduces the base matrix exactly.
    """
    if not 0.0 < alpha < 1.0:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha}")
    tours = [tour_from_seq(inst, t.seq) for t in tours]  # recompute lengths
    _check_tours_feasible(inst, tours)
    if not tours:
        raise InfeasibleError("need at least one tour to pad against")

    radius = inst.depot_radius
    l_max = max(t.length for t in tours)
    n = inst.n
    new_edges: list[tuple[int, int, float]] = []
    records: list[PaddingRecord] = []
    padded_seqs: list[tuple[int, ...]] = []
    next_id = n
    for i, t in enumerate(tours):
        deficit = l_max - t.length
        if deficit <= 1e-12:
            padded_seqs.append(t.seq)
            continue
        last = t.seq[-2]
        b = float(inst.dist[last, DEPOT])
        spacings = _chain_spacings(deficit, radius, b)
        ids = list(range(next_id, next_id + len(spacings)))
        next_id += len(spacings)
        prev = last
        for vid, w in zip(ids, spacings):
            new_edges.append((prev, vid, w))
            prev = vid
        new_edges.append((prev, DEPOT, b))
        records.append(PaddingRecord(i, tuple(ids), tuple(spacings), b))
        padded_seqs.append(t.seq[:-1] + tuple(ids) + (DEPOT,))

    m = next_id
    big = np.full((m, m), np.inf)
    big[:n, :n] = inst.dist
    np.fill_diagonal(big, 0.0)
    for u, v, w in new_edges:
        big[u, v] = min(big[u, v], w)
        big[v, u] = big[u, v]
    # Floyd-Warshall metric closure
    for k in range(m):
        np.minimum(big, big[:, k, None] + big[None, k, :], out=big)

    demand = np.zeros(m)
    demand[:n] = inst.demand
    gadget_radius = float(big[DEPOT].max()) if m > 1 else 0.0
    bound = max(l_max, 2.0 * gadget_radius)
    if bound <= 0:
        bound = 1.0
    gadget_fleet = FleetSpec(
        (VehicleClass(capacity=max(float(demand.sum()), 1.0), distance_bound=bound),)
    )
    gadget = MetricInstance(
        dist=big,
        demand=demand,
        fleet=gadget_fleet,
        name=f"{inst.name}+padding",
    )
    padded = tuple(tour_from_seq(gadget, seq) for seq in padded_seqs)
    return GadgetInstance(
        base=inst,
        instance=gadget,
        padded_tours=padded,
        padding=tuple(records),
        alpha_target=alpha,
    )

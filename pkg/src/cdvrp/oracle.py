"""Exhaustive desk-scale baselines and the independent solution verifier.

The verifier recomputes every length and load from the instance's distance
matrix; it never trusts solver-cached values. The exact searches treat
infeasibility as a result, not an error, and raise
:class:`~cdvrp.errors.ResourceLimitError` only when their caps are hit.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import permutations
from typing import NamedTuple, Optional, Sequence

from .binpack import CAP_TOL, Bin, BinClass, Item, Packing, cheapest_class
from .errors import InfeasibleItemError, ResourceLimitError
from .metric import DEPOT, MetricInstance
from .solvers import RoutedTour, RoutingSolution, _solution_alpha
from .treetour import LENGTH_TOL, Tour, tour_from_seq, walk_length


@dataclass(frozen=True)
class OracleLimits:
    max_n: int = 7
    max_states: int = 2_000_000
    time_cap: float = 60.0

    def __post_init__(self):
        if self.max_n < 1 or self.max_states < 1 or self.time_cap <= 0:
            raise ValueError("oracle limits must be positive")


class VerifyViolation(NamedTuple):
    """One broken constraint: the tour involved (-1 for solution-level checks),
    the kind of constraint and the numeric excess."""

    tour: int
    kind: str
    magnitude: float
    note: str = ""


@dataclass(frozen=True)
class VerifyReport:
    ok: bool
    violations: tuple[VerifyViolation, ...]

    @classmethod
    def from_violations(cls, violations) -> "VerifyReport":
        violations = tuple(violations)
        return cls(ok=not violations, violations=violations)


def verify_solution(
    inst: MetricInstance,
    sol: RoutingSolution,
    alpha_target: Optional[float] = None,
) -> VerifyReport:
    """Independently check a routing solution against its instance.

    Checks, per tour: depot endpoints, recomputed load against the class
    capacity and recomputed length against the class distance bound. Across
    tours: every customer served by exactly one tour (repeat visits inside
    a single tour are allowed -- padded tours deliberately re-traverse
    their loop), and, when ``alpha_target`` is given, the min/max length
    balance.
    """
    out: list[VerifyViolation] = []
    n_classes = len(inst.fleet.classes)
    membership: dict[int, list[int]] = {}
    lengths: list[float] = []
    for i, (tour, class_id) in enumerate(sol.tours):
        if not 0 <= class_id < n_classes:
            raise ValueError(f"tour {i} references unknown vehicle class {class_id}")
        cls = inst.fleet.classes[class_id]
        seq = tour.seq
        if len(seq) < 2 or seq[0] != DEPOT or seq[-1] != DEPOT:
            out.append(VerifyViolation(i, "endpoint", 1.0, f"sequence {seq}"))
        customers = {v for v in seq if v != DEPOT}
        for v in customers:
            membership.setdefault(v, []).append(i)
        load = float(sum(inst.demand[v] for v in customers))
        length = walk_length(inst, seq)
        lengths.append(length)
        if load > cls.capacity + CAP_TOL:
            out.append(
                VerifyViolation(i, "capacity", load - cls.capacity, f"load {load:g}")
            )
        if length > cls.distance_bound + LENGTH_TOL:
            out.append(
                VerifyViolation(
                    i, "distance", length - cls.distance_bound, f"length {length:g}"
                )
            )

    for v in inst.customers:
        where = membership.get(v, [])
        if not where:
            out.append(VerifyViolation(-1, "coverage", 1.0, f"customer {v} unserved"))
        elif len(where) > 1:
            out.append(
                VerifyViolation(
                    -1, "duplicate", float(len(where) - 1), f"customer {v} in tours {where}"
                )
            )

    if alpha_target is not None and len(lengths) >= 2:
        achieved = _solution_alpha(lengths)
        if achieved < alpha_target - 1e-12:
            out.append(
                VerifyViolation(
                    -1, "balance", alpha_target - achieved, f"achieved {achieved:g}"
                )
            )
    return VerifyReport.from_violations(out)


# ---------------------------------------------------------------------------
# exhaustive searches
# ---------------------------------------------------------------------------


def _set_partitions(items: list):
    """All partitions of ``items`` into unordered blocks, each exactly once."""
    if not items:
        yield []
        return
    head, rest = items[0], items[1:]
    for part in _set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[head] + part[i]] + part[i + 1 :]
        yield [[head]] + part


class _Budget:
    def __init__(self, limits: OracleLimits):
        self.limits = limits
        self.states = 0
        self.start = time.monotonic()

    def spend(self, k: int = 1):
        self.states += k
        if self.states > self.limits.max_states:
            raise ResourceLimitError(
                f"search exceeded {self.limits.max_states} states"
            )
        if self.states % 4096 == 0 and time.monotonic() - self.start > self.limits.time_cap:
            raise ResourceLimitError(f"search exceeded {self.limits.time_cap}s")


def _best_block_tour(
    inst: MetricInstance, block: tuple[int, ...], budget: _Budget, cache: dict
) -> tuple[float, tuple[int, ...]]:
    """Cheapest closed depot tour through a customer block, by enumeration.

    Ties go to the lexicographically smallest visiting order.
    """
    key = frozenset(block)
    hit = cache.get(key)
    if hit is not None:
        return hit
    d = inst.dist
    best_len = float("inf")
    best_seq = None
    for perm in permutations(sorted(block)):
        budget.spend()
        seq = (DEPOT, *perm, DEPOT)
        length = walk_length(inst, seq)
        if length < best_len - 1e-15:
            best_len = length
            best_seq = seq
    cache[key] = (best_len, best_seq)
    return best_len, best_seq


def exact_min_tours(
    inst: MetricInstance, limits: OracleLimits = OracleLimits()
) -> Optional[RoutingSolution]:
    """Provably minimum tour count by exhausting customer partitions.

    Each block is routed by its optimal permutation and assigned the lowest
    vehicle class that fits both its load and its length; a partition is
    feasible when every block has such a class. Returns None when no
    partition is feasible (a first-class outcome, not an error).
    """
    if inst.n > limits.max_n:
        raise ResourceLimitError(
            f"instance has {inst.n} vertices, oracle cap is {limits.max_n}"
        )
    customers = list(inst.customers)
    if not customers:
        return RoutingSolution(
            tours=(), alpha=1.0, meta={"algorithm": "exact-min-tours", "optimal": True}
        )

    budget = _Budget(limits)
    cache: dict = {}
    classes = inst.fleet.classes

    def block_assignment(block) -> Optional[tuple[int, tuple[int, ...]]]:
        load = float(sum(inst.demand[v] for v in block))
        length, seq = _best_block_tour(inst, tuple(block), budget, cache)
        for cid, cls in enumerate(classes):
            if load <= cls.capacity + CAP_TOL and length <= cls.distance_bound + LENGTH_TOL:
                return cid, seq
        return None

    best = None
    for part in _set_partitions(customers):
        budget.spend()
        if best is not None and len(part) >= best[0]:
            continue
        assignment = []
        for block in part:
            got = block_assignment(block)
            if got is None:
                assignment = None
                break
            assignment.append(got)
        if assignment is not None:
            best = (len(part), assignment)

    if best is None:
        return None
    routed = [
        RoutedTour(tour_from_seq(inst, seq), cid) for cid, seq in best[1]
    ]
    routed.sort(key=lambda rt: rt.tour.seq[1])
    lengths = [rt.tour.length for rt in routed]
    return RoutingSolution(
        tours=tuple(routed),
        alpha=_solution_alpha(lengths),
        meta={"algorithm": "exact-min-tours", "optimal": True},
    )


def exact_pack(
    items: Sequence[Item],
    classes: Sequence[BinClass],
    limits: OracleLimits = OracleLimits(max_n=8),
) -> Packing:
    """Minimum total opened capacity by exhausting item partitions.

    Each block gets the cheapest class that holds its total size. Raises
    :class:`InfeasibleItemError` when one item fits no class at all.
    """
    if len(items) > limits.max_n:
        raise ResourceLimitError(
            f"{len(items)} items exceed the oracle cap of {limits.max_n}"
        )
    if not classes:
        raise ValueError("need at least one bin class")
    max_cap = max(c.capacity for c in classes)
    for it in items:
        if it.size > max_cap + CAP_TOL:
            raise InfeasibleItemError(it.vertex, it.size, max_cap)
    if not items:
        return Packing(bins=())

    budget = _Budget(limits)
    best = None
    for part in _set_partitions(list(items)):
        budget.spend()
        bins = []
        total = 0.0
        ok = True
        for block in part:
            size = sum(it.size for it in block)
            if size > max_cap + CAP_TOL:
                ok = False
                break
            cls = cheapest_class(classes, size)
            total += cls.capacity
            bins.append(
                Bin(cls.class_id, cls.capacity, tuple(sorted(block, key=lambda i: i.vertex)))
            )
        if not ok:
            continue
        key = (total, len(bins))
        if best is None or key < best[0]:
            best = (key, tuple(bins))
    return Packing(bins=best[1])


def exact_tsp(
    inst: MetricInstance, limits: OracleLimits = OracleLimits(max_n=10)
) -> Tour:
    """Optimal closed tour through every vertex, by pruned enumeration.

    Branches over customers in ascending id so the first optimum found is
    the lexicographically smallest, which makes ties deterministic.
    """
    if inst.n > limits.max_n:
        raise ResourceLimitError(
            f"instance has {inst.n} vertices, oracle cap is {limits.max_n}"
        )
    customers = list(inst.customers)
    if not customers:
        return tour_from_seq(inst, (DEPOT,))
    d = inst.dist
    budget = _Budget(limits)
    best_len = float("inf")
    best_seq: Optional[tuple[int, ...]] = None

    def dfs(prefix: list[int], used: set[int], length: float):
        nonlocal best_len, best_seq
        budget.spend()
        if length >= best_len:
            return
        if len(prefix) == len(customers) + 1:
            total = length + d[prefix[-1], DEPOT]
            if total < best_len:
                best_len = total
                best_seq = (*prefix, DEPOT)
            return
        for v in customers:
            if v not in used:
                used.add(v)
                prefix.append(v)
                dfs(prefix, used, length + d[prefix[-2], v])
                prefix.pop()
                used.remove(v)

    dfs([DEPOT], set(), 0.0)
    return tour_from_seq(inst, best_seq)

"""Problem model: a finite metric with a depot, per-vertex demands and a vehicle fleet.

The depot is always vertex 0. Distances and demands are double-precision
reals; all comparisons elsewhere in the package use explicit tolerances.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np

from .errors import GenerationError

DEPOT = 0

#: Default relative tolerance for the triangle-inequality check.
DEFAULT_TRI_TOL = 1e-9


@dataclass(frozen=True)
class VehicleClass:
    """One vehicle type: capacity, route-length bound and available count.

    ``multiplicity=None`` means an unbounded number of vehicles of this
    class may be used.
    """

    capacity: float
    distance_bound: float
    multiplicity: Optional[int] = None

    def __post_init__(self):
        if self.capacity < 0:
            raise ValueError(f"vehicle capacity must be >= 0, got {self.capacity}")
        if self.distance_bound <= 0:
            raise ValueError(
                f"vehicle distance bound must be > 0, got {self.distance_bound}"
            )
        if self.multiplicity is not None and self.multiplicity < 1:
            raise ValueError(f"multiplicity must be >= 1, got {self.multiplicity}")


@dataclass(frozen=True)
class FleetSpec:
    """The vehicle classes stationed at the depot."""

    classes: tuple[VehicleClass, ...]

    def __post_init__(self):
        object.__setattr__(self, "classes", tuple(self.classes))
        if not self.classes:
            raise ValueError("a fleet needs at least one vehicle class")

    @property
    def t_min(self) -> float:
        """Smallest distance bound over all classes."""
        return min(c.distance_bound for c in self.classes)

    @property
    def max_capacity(self) -> float:
        return max(c.capacity for c in self.classes)


def fleet(*classes: tuple) -> FleetSpec:
    """Shorthand: ``fleet((Q, T), ...)`` builds a FleetSpec of unbounded classes."""
    return FleetSpec(tuple(VehicleClass(q, t) for q, t in classes))


@dataclass(frozen=True, eq=False)
class MetricInstance:
    """A routing instance: symmetric distance matrix, demands and fleet.

    ``dist`` is an n-by-n float array, ``demand`` has length n with
    ``demand[0] == 0`` for the depot. Instances are immutable after
    construction; the arrays are marked read-only.
    """

    dist: np.ndarray
    demand: np.ndarray
    fleet: FleetSpec
    name: str = "unnamed"
    coords: Optional[np.ndarray] = None

    def __post_init__(self):
        dist = np.array(self.dist, dtype=float)
        demand = np.array(self.demand, dtype=float)
        if dist.ndim != 2 or dist.shape[0] != dist.shape[1]:
            raise ValueError(f"distance matrix must be square, got shape {dist.shape}")
        if demand.shape != (dist.shape[0],):
            raise ValueError(
                f"demand vector length {demand.shape} does not match "
                f"matrix size {dist.shape[0]}"
            )
        dist.setflags(write=False)
        demand.setflags(write=False)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "demand", demand)
        if self.coords is not None:
            coords = np.array(self.coords, dtype=float)
            coords.setflags(write=False)
            object.__setattr__(self, "coords", coords)

    @property
    def n(self) -> int:
        return self.dist.shape[0]

    @property
    def customers(self) -> range:
        return range(1, self.n)

    @property
    def depot_radius(self) -> float:
        """Largest distance from the depot to any vertex."""
        if self.n == 1:
            return 0.0
        return float(self.dist[DEPOT, 1:].max())

    def farthest_vertex(self) -> int:
        if self.n == 1:
            return DEPOT
        return int(self.dist[DEPOT, 1:].argmax()) + 1


class Violation(NamedTuple):
    """One validation failure: what kind, where and by how much."""

    kind: str
    where: tuple[int, ...]
    magnitude: float


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    violations: tuple[Violation, ...]

    @classmethod
    def from_violations(cls, violations: Sequence[Violation]) -> "ValidationReport":
        violations = tuple(violations)
        return cls(ok=not violations, violations=violations)


def validate_instance(
    inst: MetricInstance, tri_tol: float = DEFAULT_TRI_TOL
) -> ValidationReport:
    """Check metric, demand and fleet-feasibility properties of an instance.

    Reports every violation of: zero diagonal, exact symmetry, the triangle
    inequality (within ``tri_tol``, relative to the detour length), demand
    signs (depot demand must be 0, customer demands >= 0), and the depot
    radius bound (radius must not exceed half the smallest distance bound,
    otherwise some vertex is unreachable by some vehicle class).

    Triangle violations are reported once per unordered endpoint pair, as
    ``(i, j, k)`` with ``j`` the intermediate vertex and ``i < k``.
    """
    d = inst.dist
    n = inst.n
    out: list[Violation] = []

    for i in range(n):
        if d[i, i] != 0.0:
            out.append(Violation("diagonal", (i,), float(abs(d[i, i]))))
    asym = np.argwhere(d != d.T)
    for i, j in asym:
        if i < j:
            out.append(Violation("symmetry", (int(i), int(j)), float(abs(d[i, j] - d[j, i]))))

    if n >= 3:
        # excess[i, j, k] = d(i, k) - d(i, j) - d(j, k)
        detour = d[:, :, None] + d[None, :, :]
        excess = d[:, None, :] - detour
        slack = tri_tol * np.maximum(1.0, detour)
        bad = excess > slack
        idx = np.arange(n)
        bad &= idx[:, None, None] != idx[None, :, None]  # i != j
        bad &= idx[None, :, None] != idx[None, None, :]  # j != k
        bad &= idx[:, None, None] < idx[None, None, :]  # canonical i < k
        for i, j, k in np.argwhere(bad):
            out.append(
                Violation("triangle", (int(i), int(j), int(k)), float(excess[i, j, k]))
            )

    if inst.demand[DEPOT] != 0.0:
        out.append(Violation("demand", (DEPOT,), float(abs(inst.demand[DEPOT]))))
    for v in np.argwhere(inst.demand < 0.0).ravel():
        if v != DEPOT:
            out.append(Violation("demand", (int(v),), float(-inst.demand[v])))

    radius = inst.depot_radius
    limit = inst.fleet.t_min / 2.0
    if radius > limit:
        out.append(Violation("radius", (inst.farthest_vertex(),), float(radius - limit)))

    return ValidationReport.from_violations(out)


def euclidean_instance(
    points: Sequence[Sequence[float]],
    demands: Sequence[float],
    fleet: FleetSpec,
    name: str = "euclidean",
) -> MetricInstance:
    """Build an instance from 2D coordinates; the first point is the depot.

    The triangle inequality holds by construction up to floating-point
    rounding.
    """
    pts = np.array(points, dtype=float)
    if pts.ndim != 2 or pts.shape[1] != 2:
        raise ValueError(f"points must be an (n, 2) array, got shape {pts.shape}")
    dem = np.asarray(demands, dtype=float)
    if len(dem) != len(pts):
        raise ValueError(
            f"{len(pts)} points but {len(dem)} demands"
        )
    if dem[DEPOT] != 0.0:
        raise ValueError(f"depot demand must be 0, got {dem[DEPOT]}")
    diff = pts[:, None, :] - pts[None, :, :]
    dist = np.sqrt((diff**2).sum(axis=-1))
    np.fill_diagonal(dist, 0.0)
    return MetricInstance(dist=dist, demand=dem, fleet=fleet, name=name, coords=pts)


def random_instance(
    n: int,
    seed: int,
    box: float = 1.0,
    demand_range: tuple[float, float] = (1.0, 1.0),
    fleet: FleetSpec = None,
    max_retries: int = 200,
) -> MetricInstance:
    """Sample a uniform Euclidean instance inside a square box.

    Deterministic for a fixed seed. Point sets whose depot radius exceeds
    half the smallest fleet distance bound are rejected and resampled;
    after ``max_retries`` failures a :class:`GenerationError` is raised.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 vertices, got {n}")
    if fleet is None:
        raise ValueError("random_instance requires a fleet")
    lo, hi = demand_range
    rng = np.random.default_rng(seed)
    limit = fleet.t_min / 2.0
    for _ in range(max_retries):
        pts = rng.uniform(0.0, box, size=(n, 2))
        dem = rng.uniform(lo, hi, size=n)
        dem[DEPOT] = 0.0
        inst = euclidean_instance(pts, dem, fleet, name=f"random-n{n}-s{seed}")
        if inst.depot_radius <= limit:
            return inst
    raise GenerationError(
        f"could not place {n} points in a box of side {box} with depot radius "
        f"<= {limit} after {max_retries} attempts"
    )


@dataclass(frozen=True)
class SubInstance:
    """A restriction of an instance to a vertex subset, densely reindexed.

    ``to_parent[new]`` is the original id of new vertex ``new``;
    ``from_parent`` maps original ids back to subset ids.
    """

    instance: MetricInstance
    to_parent: tuple[int, ...]
    from_parent: dict[int, int] = field(repr=False)


def induced_subinstance(inst: MetricInstance, subset) -> SubInstance:
    """Restrict an instance to ``subset`` (which must contain the depot).

    All retained pairwise distances and demands are preserved exactly.
    """
    keep = sorted(set(int(v) for v in subset))
    if not keep or keep[0] != DEPOT:
        raise ValueError("subset must contain the depot (vertex 0)")
    if keep[-1] >= inst.n:
        raise ValueError(f"vertex {keep[-1]} out of range for n={inst.n}")
    idx = np.array(keep, dtype=int)
    sub = MetricInstance(
        dist=inst.dist[np.ix_(idx, idx)],
        demand=inst.demand[idx],
        fleet=inst.fleet,
        name=f"{inst.name}[{len(keep)}]",
        coords=None if inst.coords is None else inst.coords[idx],
    )
    return SubInstance(
        instance=sub,
        to_parent=tuple(keep),
        from_parent={old: new for new, old in enumerate(keep)},
    )

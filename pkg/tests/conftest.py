"""Shared instance builders for the test suite."""

import numpy as np

from cdvrp import FleetSpec, MetricInstance, VehicleClass, euclidean_instance, fleet, random_instance

# unit square: depot r=(0,0), customers a=(1,0), b=(0,1), c=(1,1)
I1_POINTS = [(0.0, 0.0), (1.0, 0.0), (0.0, 1.0), (1.0, 1.0)]
R, A, B, C = 0, 1, 2, 3


def make_i1(fleet_spec=None, demands=(0, 1, 1, 1)):
    if fleet_spec is None:
        fleet_spec = fleet((3, 6))
    return euclidean_instance(I1_POINTS, demands, fleet_spec, name="i1")


def make_line(n_customers=6, spacing=0.5, fleet_spec=None):
    """Collinear points: depot at 0, customers at spacing, 2*spacing, ..."""
    if fleet_spec is None:
        fleet_spec = fleet((10, 10))
    pts = [(spacing * i, 0.0) for i in range(n_customers + 1)]
    return euclidean_instance(pts, [0] + [1] * n_customers, fleet_spec, name="line")


def star_metric(spokes=5, radius=1.0, fleet_spec=None):
    """All customers at ``radius`` from the depot, pairwise at 2*radius."""
    if fleet_spec is None:
        fleet_spec = fleet((10, 10))
    n = spokes + 1
    d = np.full((n, n), 2.0 * radius)
    d[0, :] = radius
    d[:, 0] = radius
    np.fill_diagonal(d, 0.0)
    return MetricInstance(
        dist=d, demand=[0] + [1] * spokes, fleet=fleet_spec, name="star"
    )


def random_fleet(rng, n_classes, demand_hi):
    """Classes whose largest capacity always fits the largest demand."""
    caps = np.sort(rng.uniform(demand_hi, 4.0 * demand_hi, n_classes))
    bounds = np.sort(rng.uniform(4.0, 12.0, n_classes))
    return FleetSpec(
        tuple(VehicleClass(float(q), float(t)) for q, t in zip(caps, bounds))
    )


def corpus(count, seed0=0, n_lo=2, n_hi=10, demand_hi=1.5):
    """Deterministic stream of valid random instances with mixed fleets."""
    out = []
    for k in range(count):
        rng = np.random.default_rng(10_000 + seed0 + k)
        n = int(rng.integers(n_lo, n_hi + 1))
        n_classes = int(rng.integers(1, 4))
        fl = random_fleet(rng, n_classes, demand_hi)
        out.append(
            random_instance(
                n, seed=seed0 + k, box=1.0, demand_range=(0.2, demand_hi), fleet=fl
            )
        )
    return out

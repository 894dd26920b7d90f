"""Variable-size bin packing of customer demands onto vehicle capacity classes.

The objective is the total capacity of the bins opened, not the bin count:
opening one large bin can beat several snug small ones and vice versa.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Sequence

from .errors import InfeasibleItemError
from .metric import FleetSpec, MetricInstance

#: Slack for capacity comparisons on real-valued demands.
CAP_TOL = 1e-12


class Item(NamedTuple):
    vertex: int
    size: float


class BinClass(NamedTuple):
    class_id: int
    capacity: float


@dataclass(frozen=True)
class Bin:
    class_id: int
    capacity: float
    items: tuple[Item, ...]

    @property
    def load(self) -> float:
        return sum(i.size for i in self.items)


@dataclass(frozen=True)
class Packing:
    bins: tuple[Bin, ...]

    @property
    def total_size(self) -> float:
        """Sum of the capacities of all opened bins (the packing objective)."""
        return sum(b.capacity for b in self.bins)


def classes_from_fleet(fleet: FleetSpec) -> list[BinClass]:
    return [BinClass(i, c.capacity) for i, c in enumerate(fleet.classes)]


def items_from_instance(inst: MetricInstance) -> list[Item]:
    """Every customer as an item, including zero-demand ones (they must be packed to be routed)."""
    return [Item(v, float(inst.demand[v])) for v in inst.customers]


def cheapest_class(classes: Sequence[BinClass], size: float) -> BinClass:
    """Smallest-capacity class that fits ``size``; ties to the smaller class id."""
    fitting = [c for c in classes if c.capacity + CAP_TOL >= size]
    return min(fitting, key=lambda c: (c.capacity, c.class_id))


def _bfd_pass(
    items: Sequence[Item], classes: Sequence[BinClass], opener: BinClass
) -> list[list]:
    """One best-fit-decreasing pass.

    New bins open at the ``opener`` class (or the cheapest sufficient class
    if the item does not fit the opener). Each bin is ``[class_id, capacity,
    load, items]``.
    """
    order = sorted(items, key=lambda it: (-it.size, it.vertex))
    bins: list[list] = []
    for it in order:
        best = None
        for idx, b in enumerate(bins):
            residual = b[1] - b[2] - it.size
            if residual >= -CAP_TOL:
                key = (residual, b[0], idx)
                if best is None or key < best[0]:
                    best = (key, idx)
        if best is not None:
            b = bins[best[1]]
            b[2] += it.size
            b[3].append(it)
        else:
            cls = opener
            if opener.capacity + CAP_TOL < it.size:
                cls = cheapest_class(classes, it.size)
            bins.append([cls.class_id, cls.capacity, it.size, [it]])
    return bins


def _shrink(bins: list[list], classes: Sequence[BinClass]) -> tuple[Bin, ...]:
    """Relabel each bin to the cheapest class that still holds its load."""
    out = []
    for _, _, load, members in bins:
        cls = cheapest_class(classes, load)
        out.append(
            Bin(cls.class_id, cls.capacity, tuple(sorted(members, key=lambda i: i.vertex)))
        )
    return tuple(out)


def pack_variable_bins(items: Sequence[Item], classes: Sequence[BinClass]) -> Packing:
    """Pack items to minimize total opened capacity (deterministic heuristic).

    Runs one best-fit-decreasing pass per candidate opening class, shrinks
    every bin to the cheapest class that still holds it, and keeps the
    cheapest packing (ties: fewer bins, then the lower-id opening class).

    Raises :class:`InfeasibleItemError` when some item exceeds every class
    capacity.
    """
    if not classes:
        raise ValueError("need at least one bin class")
    max_cap = max(c.capacity for c in classes)
    for it in items:
        if it.size < 0:
            raise ValueError(f"negative item size {it.size} at vertex {it.vertex}")
        if it.size > max_cap + CAP_TOL:
            raise InfeasibleItemError(it.vertex, it.size, max_cap)
    if not items:
        return Packing(bins=())

    best = None
    for opener in sorted(classes, key=lambda c: c.class_id):
        bins = _shrink(_bfd_pass(items, classes, opener), classes)
        total = sum(b.capacity for b in bins)
        key = (total, len(bins), opener.class_id)
        if best is None or key < best[0]:
            best = (key, bins)
    return Packing(bins=best[1])


def packing_groups(p: Packing) -> list[tuple[int, tuple[int, ...]]]:
    """One ``(class_id, vertex tuple)`` per opened bin; groups partition the items."""
    return [(b.class_id, tuple(i.vertex for i in b.items)) for b in p.bins]

"""Rooted spanning trees, bounded-weight subtree peeling and tree-doubling tours."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

from .errors import InfeasibleError
from .metric import DEPOT, MetricInstance

LENGTH_TOL = 1e-9
_STEP_TOL = 1e-12


@dataclass(frozen=True)
class Tour:
    """A closed walk; ``seq`` repeats the start vertex at the end.

    Degenerate tours hold a single vertex (or nothing) and have length 0.
    ``load`` counts each visited customer's demand once, even if the walk
    passes it several times.
    """

    seq: tuple[int, ...]
    length: float
    load: float

    @property
    def interior(self) -> tuple[int, ...]:
        """Vertices strictly between the two endpoint occurrences."""
        if len(self.seq) <= 2:
            return ()
        return self.seq[1:-1]


@dataclass(frozen=True)
class Path:
    """An open walk with its length."""

    seq: tuple[int, ...]
    length: float


def walk_length(inst: MetricInstance, seq: Sequence[int]) -> float:
    d = inst.dist
    return float(sum(d[seq[k], seq[k + 1]] for k in range(len(seq) - 1)))


def tour_from_seq(inst: MetricInstance, seq: Sequence[int]) -> Tour:
    """Build a Tour from an explicit closed sequence, recomputing length and load."""
    seq = tuple(seq)
    if len(seq) >= 2 and seq[0] != seq[-1]:
        raise ValueError(f"closed sequence must end where it starts: {seq}")
    load = float(sum(inst.demand[v] for v in set(seq)))
    return Tour(seq=seq, length=walk_length(inst, seq), load=load)


class RootedTree:
    """A spanning tree rooted at the depot with cached subtree weights.

    ``inner[v]`` is the total weight of edges strictly inside the subtree
    rooted at ``v`` (excluding v's own parent edge), so ``inner[root]``
    equals the whole tree weight. Peeling mutates the tree in place.
    """

    def __init__(self, root: int, parent: dict[int, Optional[int]], edge_w: dict[int, float]):
        self.root = root
        self.parent = parent
        self.edge_w = edge_w
        self.children: dict[int, list[int]] = {v: [] for v in parent}
        for v, p in parent.items():
            if p is not None:
                self.children[p].append(v)
        for kids in self.children.values():
            kids.sort()
        self.depth: dict[int, int] = {}
        for v in self._preorder_from(root):
            p = parent[v]
            self.depth[v] = 0 if p is None else self.depth[p] + 1
        self.inner: dict[int, float] = {}
        self._recompute_inner_into(self.inner)
        self.total_weight: float = self.inner[root]

    # -- traversal -----------------------------------------------------

    def _preorder_from(self, start: int) -> list[int]:
        order = []
        stack = [start]
        while stack:
            v = stack.pop()
            order.append(v)
            stack.extend(reversed(self.children[v]))
        return order

    def preorder(self) -> list[int]:
        """Depth-first preorder from the root, children in ascending id order."""
        return self._preorder_from(self.root)

    def subtree(self, v: int) -> list[int]:
        return self._preorder_from(v)

    @property
    def vertices(self):
        return self.parent.keys()

    def max_edge(self) -> float:
        return max(self.edge_w.values(), default=0.0)

    def edges(self) -> list[tuple[int, int, float]]:
        return [
            (p, v, self.edge_w[v]) for v, p in self.parent.items() if p is not None
        ]

    # -- bookkeeping ---------------------------------------------------

    def _recompute_inner_into(self, out: dict[int, float]) -> None:
        for v in reversed(self._preorder_from(self.root)):
            out[v] = sum(out[c] + self.edge_w[c] for c in self.children[v])

    def recompute_inner(self) -> dict[int, float]:
        """Fresh subtree weights from scratch (for consistency checks)."""
        out: dict[int, float] = {}
        self._recompute_inner_into(out)
        return out


def minimum_spanning_tree(inst: MetricInstance, live: Optional[Iterable[int]] = None) -> RootedTree:
    """Kruskal MST over ``live`` vertices (default: all), rooted at the depot.

    Ties between equal-weight edges are broken toward the lexicographically
    smaller ``(min endpoint, max endpoint)`` pair, which makes the tree
    deterministic.
    """
    verts = sorted(set(live)) if live is not None else list(range(inst.n))
    if not verts:
        raise ValueError("live vertex set is empty")
    if DEPOT not in verts:
        raise ValueError("live vertex set must contain the depot")
    d = inst.dist
    edges = [
        (float(d[u, v]), u, v)
        for i, u in enumerate(verts)
        for v in verts[i + 1 :]
    ]
    edges.sort()

    comp = {v: v for v in verts}

    def find(x):
        while comp[x] != x:
            comp[x] = comp[comp[x]]
            x = comp[x]
        return x

    adj: dict[int, list[tuple[int, float]]] = {v: [] for v in verts}
    taken = 0
    for w, u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            comp[ru] = rv
            adj[u].append((v, w))
            adj[v].append((u, w))
            taken += 1
            if taken == len(verts) - 1:
                break

    parent: dict[int, Optional[int]] = {DEPOT: None}
    edge_w: dict[int, float] = {DEPOT: 0.0}
    stack = [DEPOT]
    while stack:
        u = stack.pop()
        for v, w in adj[u]:
            if v not in parent:
                parent[v] = u
                edge_w[v] = w
                stack.append(v)
    return RootedTree(DEPOT, parent, edge_w)


def deepest_heavy_vertex(tree: RootedTree, threshold: float) -> Optional[int]:
    """Deepest vertex whose subtree weight strictly exceeds ``threshold``.

    Depth ties go to the smallest vertex id; returns None when no subtree
    is heavy enough (the root included).
    """
    best = None
    for v in tree.vertices:
        if tree.inner[v] > threshold:
            key = (tree.depth[v], -v)
            if best is None or key > best[0]:
                best = (key, v)
    return None if best is None else best[1]


@dataclass(frozen=True)
class PeeledBundle:
    """A subtree group detached from the tree, hanging off ``anchor``.

    The anchor itself stays in the tree; ``order`` is the anchor-first
    preorder of the bundle, ready for doubling.
    """

    anchor: int
    vertices: frozenset[int]
    edges: tuple[tuple[int, int], ...]
    weight: float
    order: tuple[int, ...] = field(repr=False)


def peel_bundle(tree: RootedTree, v: int, stop_threshold: float) -> PeeledBundle:
    """Detach child subtrees of ``v`` until their weight exceeds ``stop_threshold``.

    Child chunks (subtree plus its connecting edge) are taken in ascending
    child id; accumulation stops as soon as the running weight passes the
    threshold, so the bundle weight exceeds it by at most one chunk. The
    tree's cached weights are updated along v's ancestor path.
    """
    kids = tree.children[v]
    if not kids:
        raise ValueError(f"vertex {v} has no children to peel")
    chosen = []
    weight = 0.0
    for c in list(kids):
        chosen.append(c)
        weight += tree.inner[c] + tree.edge_w[c]
        if weight > stop_threshold:
            break

    members: list[int] = []
    edges: list[tuple[int, int]] = []
    order: list[int] = [v]
    for c in chosen:
        sub = tree.subtree(c)
        members.extend(sub)
        order.extend(sub)
        edges.append((v, c))
        edges.extend((tree.parent[x], x) for x in sub if x != c)

    for x in members:
        del tree.parent[x]
        del tree.edge_w[x]
        del tree.children[x]
        del tree.depth[x]
        del tree.inner[x]
    tree.children[v] = [c for c in kids if c not in set(chosen)]
    a = v
    while a is not None:
        tree.inner[a] -= weight
        a = tree.parent[a]
    tree.total_weight -= weight

    return PeeledBundle(
        anchor=v,
        vertices=frozenset(members),
        edges=tuple(edges),
        weight=weight,
        order=tuple(order),
    )


def double_shortcut(
    inst: MetricInstance, order: Sequence[int], covered: frozenset = frozenset()
) -> Tour:
    """Close a tree preorder into a tour, shortcutting repeats and covered vertices.

    By the triangle inequality the result is at most twice the weight of
    the tree (or bundle) that produced ``order``. Vertices in ``covered``
    are skipped entirely.
    """
    seen = set()
    kept = []
    for v in order:
        if v in covered or v in seen:
            continue
        seen.add(v)
        kept.append(v)
    if not kept:
        return Tour(seq=(), length=0.0, load=0.0)
    if len(kept) == 1:
        return tour_from_seq(inst, (kept[0],))
    return tour_from_seq(inst, tuple(kept) + (kept[0],))


def tour_to_path(inst: MetricInstance, t: Tour) -> Path:
    """Delete the heaviest edge of a closed walk (ties: last occurrence).

    The walk is rotated so the deleted edge's endpoints become the two path
    ends; every other consecutive pair is preserved.
    """
    if len(t.seq) <= 2:
        seq = t.seq[:1]
        return Path(seq=seq, length=0.0)
    d = inst.dist
    m = len(t.seq) - 1  # number of edges in the closed walk
    k_best = 0
    w_best = -1.0
    for k in range(m):
        w = d[t.seq[k], t.seq[k + 1]]
        if w >= w_best:
            w_best = w
            k_best = k
    cyc = t.seq[:-1]
    cut = (k_best + 1) % m
    seq = cyc[cut:] + cyc[:cut]
    return Path(seq=seq, length=walk_length(inst, seq))


def split_tour_by_distance(
    inst: MetricInstance, t: Tour, budget: float
) -> list[Tour]:
    """Split one grand tour into depot-rooted tours of length at most ``budget``.

    Walks the tour's customers in order, cutting a segment just before its
    internal length would exceed ``budget - 2 * radius`` (radius taken over
    the tour's own vertices); each segment becomes ``depot + segment +
    depot``. Requires ``budget >= 2 * radius``, otherwise the farthest
    customer cannot be reached at all.
    """
    customers = [v for v in t.seq if v != DEPOT]
    # preserve first-visit order in case the walk repeats vertices
    seen = set()
    customers = [v for v in customers if not (v in seen or seen.add(v))]
    if not customers:
        return []
    d = inst.dist
    radius = max(float(d[DEPOT, c]) for c in customers)
    if budget < 2.0 * radius - _STEP_TOL:
        far = max(customers, key=lambda c: d[DEPOT, c])
        raise InfeasibleError(
            f"distance budget {budget} cannot reach vertex {far} at distance "
            f"{d[DEPOT, far]} from the depot and return"
        )
    internal_budget = budget - 2.0 * radius

    segments: list[list[int]] = [[customers[0]]]
    acc = 0.0
    for prev, cur in zip(customers, customers[1:]):
        step = float(d[prev, cur])
        if acc + step > internal_budget + _STEP_TOL:
            segments.append([cur])
            acc = 0.0
        else:
            segments[-1].append(cur)
            acc += step
    return [
        tour_from_seq(inst, (DEPOT, *seg, DEPOT)) for seg in segments
    ]

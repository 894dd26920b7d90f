"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines.
"""

import math
import time

import numpy as np
import pytest

from cdvrp import (
    double_shortcut,
    exact_min_tours,
    exact_pack,
    exact_tsp,
    fleet,
    minimum_spanning_tree,
    pack_variable_bins,
    reduce_dcvrp_to_bdcvrp,
    solve_bdcvrp,
    solve_dvrp,
    solve_min_nht,
    solve_min_nt,
    verify_solution,
)
from cdvrp.binpack import classes_from_fleet, items_from_instance
from cdvrp.cli import run_cli
from conftest import corpus, make_i1, make_line

SQRT2 = math.sqrt(2.0)


def _report(criterion, ok, detail=""):
    line = f"{'PASS' if ok else 'FAIL'} criterion {criterion}: {detail}"
    print(line)
    assert ok, line


def test_criterion_1_feasibility_suite():
    """200 random instances: min-nt and bdcvrp outputs verify cleanly in <10s."""
    start = time.monotonic()
    instances = corpus(200, seed0=0, n_lo=2, n_hi=10)
    failures = 0
    for inst in instances:
        for sol in (solve_min_nt(inst), solve_bdcvrp(inst, 0.5)):
            report = verify_solution(inst, sol)
            if not report.ok:
                failures += 1
                print("violations on", inst.name, report.violations)
    elapsed = time.monotonic() - start
    _report(
        1,
        failures == 0 and elapsed < 10.0,
        f"200 instances, {failures} failures, {elapsed:.2f}s",
    )


def test_criterion_2_oracle_dominance():
    """Exact oracles never beaten; greedy packing within 2x of optimal; <60s."""
    start = time.monotonic()
    instances = corpus(40, seed0=5000, n_lo=2, n_hi=6)
    dominance_ok = True
    worst_ratio = 1.0
    worst_pi_ratio = 1.0
    for inst in instances:
        heuristic = solve_min_nt(inst)
        exact = exact_min_tours(inst)
        if exact is None or exact.pi > heuristic.pi:
            dominance_ok = False
            print("tour-count dominance broken on", inst.name)
        elif exact.pi > 0:
            worst_pi_ratio = max(worst_pi_ratio, heuristic.pi / exact.pi)
        items = items_from_instance(inst)
        classes = classes_from_fleet(inst.fleet)
        greedy_size = pack_variable_bins(items, classes).total_size
        exact_size = exact_pack(items, classes).total_size
        if exact_size > greedy_size + 1e-12:
            dominance_ok = False
            print("packing dominance broken on", inst.name)
        if exact_size > 0:
            worst_ratio = max(worst_ratio, greedy_size / exact_size)
    elapsed = time.monotonic() - start
    _report(
        2,
        dominance_ok and worst_ratio <= 2.0 and elapsed < 60.0,
        f"40 instances, worst packing ratio {worst_ratio:.3f}, "
        f"worst tour-count ratio {worst_pi_ratio:.3f}, {elapsed:.2f}s",
    )


def test_criterion_3_doubling_bound():
    """Doubled-tree tour never exceeds twice the optimal tour (n <= 8)."""
    instances = corpus(40, seed0=7000, n_lo=2, n_hi=8)
    worst = 0.0
    ok = True
    for inst in instances:
        tree = minimum_spanning_tree(inst)
        tour = double_shortcut(inst, tree.preorder())
        best = exact_tsp(inst)
        if tour.length > 2.0 * best.length + 1e-9:
            ok = False
            print("doubling bound broken on", inst.name)
        if best.length > 0:
            worst = max(worst, tour.length / best.length)
    _report(3, ok, f"40 instances, worst tour ratio {worst:.3f}")


def test_criterion_4_min_nht_guarantees():
    """Path bound, exact coverage and peel budget on 100 in-regime instances,
    plus the worked line example reproduced exactly."""
    ok = True
    for inst in corpus(100, seed0=9000, n_lo=2, n_hi=12):
        tree = minimum_spanning_tree(inst)
        total, max_edge = tree.total_weight, tree.max_edge()
        budget = max(4.0 * max_edge, total / 3.0, 1e-6)
        bp = solve_min_nht(inst, budget)
        counts = {}
        for p in bp.paths:
            for v in p.seq:
                counts[v] = counts.get(v, 0) + 1
        if not all(counts.get(v, 0) == 1 for v in inst.customers):
            ok = False
            print("coverage broken on", inst.name)
        if any(c != 1 for c in counts.values()):
            ok = False
            print("repeat emission on", inst.name)
        if any(p.length > budget + 1e-9 for p in bp.paths):
            ok = False
            print("length bound broken on", inst.name)
        if bp.meta["peel_count"] > math.ceil(4.0 * total / budget):
            ok = False
            print("peel budget broken on", inst.name)

    bp = solve_min_nht(make_line(), 2.0)
    example_ok = (
        bp.k == 2
        and [p.length for p in bp.paths] == [1.0, 1.5]
        and bp.alpha == 2.0 / 3.0
    )
    if not example_ok:
        print("line example mismatch:", bp.k, [p.length for p in bp.paths], bp.alpha)
    _report(4, ok and example_ok, "100 instances + worked line example")


def test_criterion_5_padding_gadget():
    """50 instance/solution pairs: padded lengths equal, zero added demand,
    gadget validates, base matrix recovered exactly."""
    from cdvrp import validate_instance

    pairs = 0
    ok = True
    k = 0
    while pairs < 50:
        inst = corpus(1, seed0=11000 + k, n_lo=3, n_hi=8)[0]
        k += 1
        sol = solve_min_nt(inst)
        pairs += 1
        gadget = reduce_dcvrp_to_bdcvrp(inst, [rt.tour for rt in sol.tours], 0.5)
        l_max = max(t.length for t in gadget.padded_tours)
        if any(abs(t.length - l_max) > 1e-9 for t in gadget.padded_tours):
            ok = False
            print("padded length mismatch on", inst.name)
        if not np.all(gadget.instance.demand[inst.n :] == 0.0):
            ok = False
            print("added demand nonzero on", inst.name)
        if not validate_instance(gadget.instance).ok:
            ok = False
            print("gadget invalid on", inst.name)
        if not np.array_equal(gadget.instance.dist[: inst.n, : inst.n], inst.dist):
            ok = False
            print("base matrix not recovered on", inst.name)
    _report(5, ok, f"{pairs} pairs")


def test_criterion_6_dvrp_distance_bound():
    """Every distance-constrained tour respects its budget; the tight unit
    square case yields exactly three singleton tours."""
    ok = True
    for inst in corpus(40, seed0=13000, n_lo=2, n_hi=10):
        bound = max(2.0 * inst.depot_radius, 1.0)
        if any(t.length > bound + 1e-9 for t in solve_dvrp(inst, bound)):
            ok = False
            print("bound broken on", inst.name)
    tours = solve_dvrp(make_i1(fleet((3, 6))), 3.0)
    lengths = sorted(t.length for t in tours)
    example_ok = len(tours) == 3 and lengths == pytest.approx([2.0, 2.0, 2 * SQRT2])
    if not example_ok:
        print("tight example mismatch:", lengths)
    _report(6, ok and example_ok, "40 instances + tight unit-square example")


def test_criterion_7_determinism(tmp_path):
    """Fixed seeds and inputs give byte-identical instance and solution files."""
    gen = ["gen", "--n", "8", "--seed", "21", "--fleet", "3:8,5:11", "--demands", "0.3:1.2"]
    a, b = tmp_path / "a.vrp", tmp_path / "b.vrp"
    assert run_cli(gen + ["-o", str(a)]) == 0
    assert run_cli(gen + ["-o", str(b)]) == 0
    identical = a.read_bytes() == b.read_bytes()

    for alg, extra in (
        ("min-nt", []),
        ("min-nht", ["--lambda", "6"]),
        ("bdcvrp", ["--alpha", "0.5"]),
    ):
        s1, s2 = tmp_path / f"{alg}1.json", tmp_path / f"{alg}2.json"
        assert run_cli(["solve", str(a), "--alg", alg, *extra, "-o", str(s1)]) == 0
        assert run_cli(["solve", str(a), "--alg", alg, *extra, "-o", str(s2)]) == 0
        identical = identical and s1.read_bytes() == s2.read_bytes()
    _report(7, identical, "gen + three solvers, byte-identical reruns")

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cdvrp import (
    GenerationError,
    MetricInstance,
    euclidean_instance,
    fleet,
    induced_subinstance,
    random_instance,
    validate_instance,
)
from conftest import A, B, C, R, make_i1

SQRT2 = math.sqrt(2.0)


class TestValidateInstance:
    def test_smallest_valid_metric(self):
        inst = MetricInstance(
            dist=[[0, 1], [1, 0]], demand=[0, 1], fleet=fleet((1, 4))
        )
        assert validate_instance(inst).ok

    def test_triangle_violation_reported_with_witness(self):
        d = np.array([[0, 1, 1], [1, 0, 5], [1, 5, 0]], dtype=float)
        inst = MetricInstance(dist=d, demand=[0, 1, 1], fleet=fleet((3, 12)))
        report = validate_instance(inst)
        assert not report.ok
        kinds = {(v.kind, v.where) for v in report.violations}
        assert ("triangle", (1, 0, 2)) in kinds
        tri = next(v for v in report.violations if v.kind == "triangle")
        assert tri.magnitude == pytest.approx(3.0)

    def test_radius_exceeds_half_min_bound(self):
        inst = make_i1(fleet((3, 2)))
        report = validate_instance(inst)
        assert not report.ok
        radius = next(v for v in report.violations if v.kind == "radius")
        assert radius.where == (C,)
        assert radius.magnitude == pytest.approx(SQRT2 - 1.0)

    def test_symmetry_and_diagonal_and_demand_kinds(self):
        d = np.array([[0.5, 1, 1], [2, 0, 1], [1, 1, 0]], dtype=float)
        inst = MetricInstance(dist=d, demand=[1, -2, 1], fleet=fleet((3, 12)))
        kinds = {v.kind for v in validate_instance(inst).violations}
        assert {"diagonal", "symmetry", "demand"} <= kinds

    def test_malformed_matrix_is_structural_error(self):
        with pytest.raises(ValueError):
            MetricInstance(dist=[[0, 1]], demand=[0, 1], fleet=fleet((1, 4)))


class TestEuclideanInstance:
    def test_three_four_five(self):
        inst = euclidean_instance([(0, 0), (3, 4)], [0, 1], fleet((1, 10)))
        assert inst.dist[0, 1] == pytest.approx(5.0)

    def test_unit_square_distances(self):
        inst = make_i1()
        assert inst.dist[R, C] == pytest.approx(SQRT2)
        assert inst.dist[A, C] == pytest.approx(1.0)

    def test_depot_only(self):
        inst = euclidean_instance([(0, 0)], [0], fleet((1, 4)))
        assert inst.n == 1
        assert inst.dist.shape == (1, 1)
        assert inst.dist[0, 0] == 0.0

    def test_length_mismatch_rejected(self):
        with pytest.raises(ValueError):
            euclidean_instance([(0, 0), (1, 0)], [0], fleet((1, 4)))

    @given(
        st.lists(
            st.tuples(
                st.floats(-50, 50, allow_nan=False), st.floats(-50, 50, allow_nan=False)
            ),
            min_size=1,
            max_size=8,
        )
    )
    @settings(max_examples=60, deadline=None)
    def test_triangle_inequality_by_construction(self, points):
        inst = euclidean_instance(
            points, [0] + [1] * (len(points) - 1), fleet((9, 1e9))
        )
        d = inst.dist
        n = inst.n
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    assert d[i, k] <= d[i, j] + d[j, k] + 1e-12


class TestRandomInstance:
    def test_deterministic_for_seed(self):
        fl = fleet((10, 10))
        a = random_instance(5, seed=7, fleet=fl)
        b = random_instance(5, seed=7, fleet=fl)
        assert np.array_equal(a.dist, b.dist)
        assert np.array_equal(a.demand, b.demand)

    def test_single_vertex(self):
        inst = random_instance(1, seed=3, fleet=fleet((1, 1)))
        assert inst.n == 1
        assert inst.depot_radius == 0.0

    def test_generated_instance_validates(self):
        inst = random_instance(6, seed=1, box=1.0, fleet=fleet((10, 10)))
        assert validate_instance(inst).ok

    def test_unsatisfiable_radius_fails(self):
        # box of side 10 but distance bound 0.2: radius <= 0.1 is hopeless
        with pytest.raises(GenerationError):
            random_instance(8, seed=0, box=10.0, fleet=fleet((1, 0.2)), max_retries=20)


class TestInducedSubinstance:
    def test_full_subset_is_identity(self):
        inst = make_i1()
        sub = induced_subinstance(inst, range(inst.n))
        assert np.array_equal(sub.instance.dist, inst.dist)
        assert sub.to_parent == (0, 1, 2, 3)

    def test_depot_and_far_corner(self):
        inst = make_i1()
        sub = induced_subinstance(inst, {R, C})
        assert sub.instance.n == 2
        assert sub.instance.dist[0, 1] == pytest.approx(SQRT2)
        assert sub.to_parent == (R, C)
        assert sub.from_parent == {R: 0, C: 1}

    def test_depot_only_subset(self):
        sub = induced_subinstance(make_i1(), {R})
        assert sub.instance.n == 1

    def test_missing_depot_rejected(self):
        with pytest.raises(ValueError):
            induced_subinstance(make_i1(), {A, B})

    def test_distances_preserved_exactly(self):
        inst = random_instance(9, seed=11, fleet=fleet((5, 9)))
        sub = induced_subinstance(inst, {0, 2, 5, 7})
        for i, oi in enumerate(sub.to_parent):
            for j, oj in enumerate(sub.to_parent):
                assert sub.instance.dist[i, j] == inst.dist[oi, oj]

import json
import math

import numpy as np
import pytest

from cdvrp import InstanceFormatError, fleet, solve_min_nt, verify_solution
from cdvrp.fileio import (
    dump_solution_doc,
    format_instance,
    parse_instance,
    parse_solution,
    solution_from_doc,
    write_solution,
)
from conftest import make_i1

MINIMAL = """\
SIZE 2
MATRIX
1
DEMANDS
0 1
FLEET
0 1 4 inf
"""

I1_TEXT = """\
NAME i1
SIZE 4
FLEET
0 3 6 inf
DEMANDS
0 1 1 1
COORDS
0 0
1 0
0 1
1 1
"""


class TestParseInstance:
    def test_minimal_matrix_file(self):
        inst = parse_instance(MINIMAL)
        assert inst.n == 2
        assert inst.dist[0, 1] == 1.0
        assert inst.fleet.classes[0].capacity == 1.0
        assert inst.fleet.classes[0].multiplicity is None

    def test_i1_coords_expand_to_euclidean(self):
        inst = parse_instance(I1_TEXT)
        assert inst.name == "i1"
        assert inst.dist[0, 3] == pytest.approx(math.sqrt(2))
        assert inst.dist[1, 3] == pytest.approx(1.0)

    def test_triangle_violation_reported_with_line(self):
        text = MINIMAL.replace("SIZE 2", "SIZE 3").replace(
            "MATRIX\n1\n", "MATRIX\n1\n1 5\n"
        ).replace("DEMANDS\n0 1\n", "DEMANDS\n0 1 1\n")
        with pytest.raises(InstanceFormatError) as exc:
            parse_instance(text)
        assert "triangle" in str(exc.value)
        assert exc.value.line is not None

    def test_unknown_section(self):
        with pytest.raises(InstanceFormatError) as exc:
            parse_instance("BOGUS 3\n" + MINIMAL)
        assert "BOGUS" in str(exc.value)
        assert exc.value.line == 1

    def test_stray_word_in_numeric_section(self):
        with pytest.raises(InstanceFormatError) as exc:
            parse_instance(MINIMAL.replace("0 1\n", "0 oops\n"))
        assert "oops" in str(exc.value)

    def test_dimension_mismatch(self):
        with pytest.raises(InstanceFormatError) as exc:
            parse_instance(MINIMAL.replace("0 1\n", "0 1 1\n"))
        assert "demand" in str(exc.value).lower()

    def test_coords_and_matrix_both_rejected(self):
        with pytest.raises(InstanceFormatError):
            parse_instance(MINIMAL + "COORDS\n0 0\n1 0\n")

    def test_fleet_multiplicity_parsed(self):
        inst = parse_instance(MINIMAL.replace("0 1 4 inf", "0 1 4 2"))
        assert inst.fleet.classes[0].multiplicity == 2

    def test_comments_ignored(self):
        inst = parse_instance("# a comment\n" + MINIMAL.replace("SIZE 2", "SIZE 2  # n"))
        assert inst.n == 2


class TestFormatInstance:
    def test_coords_round_trip_exact(self):
        inst = make_i1()
        back = parse_instance(format_instance(inst))
        assert np.array_equal(back.dist, inst.dist)
        assert np.array_equal(back.demand, inst.demand)
        assert back.name == inst.name

    def test_matrix_round_trip_exact(self):
        inst = parse_instance(MINIMAL)
        again = parse_instance(format_instance(inst))
        assert np.array_equal(again.dist, inst.dist)

    def test_format_is_deterministic(self):
        inst = make_i1()
        assert format_instance(inst) == format_instance(inst)


class TestSolutionDocuments:
    def test_write_contains_headline_fields(self):
        inst = make_i1(fleet((3, 6)))
        sol = solve_min_nt(inst)
        doc = json.loads(write_solution(sol, inst))
        assert doc["algorithm"] == "min-nt"
        assert doc["pi"] == 1
        assert doc["alpha"] == 1.0
        assert doc["tours"][0]["sequence"] == [0, 1, 3, 2, 0]

    def test_empty_solution(self):
        from cdvrp.solvers import RoutingSolution

        inst = make_i1(fleet((3, 6)))
        doc = json.loads(write_solution(RoutingSolution(tours=(), alpha=1.0), inst))
        assert doc["pi"] == 0
        assert doc["tours"] == []

    def test_write_parse_write_fixed_point(self):
        inst = make_i1(fleet((3, 6)))
        text = write_solution(solve_min_nt(inst), inst)
        again = dump_solution_doc(parse_solution(text))
        assert again == text

    def test_lengths_reproducible_from_instance(self):
        inst = make_i1(fleet((3, 6)))
        text = write_solution(solve_min_nt(inst), inst)
        sol = solution_from_doc(inst, parse_solution(text))
        assert verify_solution(inst, sol).ok
        doc = parse_solution(text)
        for entry, (tour, _) in zip(doc["tours"], sol.tours):
            assert entry["length"] == pytest.approx(tour.length, abs=1e-9)

    def test_twelve_significant_digits(self):
        inst = make_i1(fleet((3, 6)))
        text = write_solution(solve_min_nt(inst), inst)
        # sqrt2-based lengths must not carry full 17-digit reprs
        for token in text.split():
            token = token.rstrip(",")
            try:
                float(token)
            except ValueError:
                continue
            digits = token.replace(".", "").replace("-", "").lstrip("0")
            assert len(digits) <= 12

    def test_missing_field_rejected(self):
        with pytest.raises(InstanceFormatError):
            parse_solution('{"algorithm": "x"}')

# tests/test_systems.py

import copy
from fractions import Fraction
from itertools import product

import pytest

from subspace_lab.core.approximation.roth import SizeClass
from subspace_lab.core.subspace.enumeration import check_vector, enumerate_solutions, recheck_solution
from subspace_lab.core.subspace.systems import (
    classify_size,
    default_R,
    distinct_form_count,
    large_threshold_reached,
    load_system,
    system_from_mapping,
    validate_system,
)
from subspace_lab.errors import ConfigError, PreconditionError

from conftest import unit_sum_mapping


def test_load_cubic_config(cubic_file):
    assert cubic_file.n == 3
    assert cubic_file.delta == Fraction(1, 2)
    assert cubic_file.field.degree == 3
    assert validate_system(cubic_file) == []
    assert distinct_form_count(cubic_file) == 3


def test_shipped_configs_are_valid(configs_dir):
    for path in sorted(configs_dir.glob("*.toml")):
        assert validate_system(load_system(path)) == [], path.name


def test_mapping_round_trip(cubic_file):
    again = system_from_mapping(cubic_file.to_mapping())
    assert again.blocks == cubic_file.blocks
    assert again.delta == cubic_file.delta


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        load_system(tmp_path / "nope.toml")


def test_bad_toml(tmp_path):
    path = tmp_path / "bad.toml"
    path.write_text("n = [")
    with pytest.raises(ConfigError):
        load_system(path)


def test_wrong_form_count():
    data = unit_sum_mapping(3, "1/2")
    data["places"][0]["forms"] = data["places"][0]["forms"][:2]
    with pytest.raises(ConfigError):
        system_from_mapping(data)


def test_generator_needed_for_t():
    data = unit_sum_mapping(2, "1")
    data["places"][0]["forms"][0] = ["1", "t"]
    with pytest.raises(ConfigError):
        system_from_mapping(data)


def test_validation_reports_exponent_sum():
    data = unit_sum_mapping(3, "1/2")
    data["places"][0]["exponents"] = ["-1", "1", "1"]
    problems = validate_system(system_from_mapping(data))
    assert any("sum of exponents" in p for p in problems)


def test_validation_reports_dependent_forms():
    data = unit_sum_mapping(2, "1")
    data["places"][0]["forms"] = [["1", "1"], ["2", "2"]]
    problems = validate_system(system_from_mapping(data))
    assert any("linearly dependent" in p for p in problems)


def test_validation_reports_missing_infinite_place(two_places):
    data = copy.deepcopy(two_places.to_mapping())
    data["places"] = [p for p in data["places"] if p["place"] != "inf"]
    data["places"][0]["exponents"] = ["-1", "0"]
    problems = validate_system(system_from_mapping(data))
    assert any("infinite place" in p for p in problems)


def test_enumerate_rejects_invalid_system():
    data = unit_sum_mapping(3, "1/2")
    data["places"][0]["exponents"] = ["-1", "1", "1"]
    with pytest.raises(PreconditionError):
        enumerate_solutions(system_from_mapping(data), 3)


def test_default_R(two_places):
    assert default_R(two_places) == 4
    assert two_places.effective_R == 4


def test_large_threshold():
    # n^(2n/delta) = 2^8 = 256 for n = 2, delta = 1/2
    assert large_threshold_reached(256, 2, Fraction(1, 2), 1)
    assert not large_threshold_reached(255, 2, Fraction(1, 2), 1)
    assert not large_threshold_reached(300, 2, Fraction(1, 2), 400)


def test_unit_sum_enumeration(unit_sum_2_half):
    result = enumerate_solutions(unit_sum_2_half, 5)
    assert [r.x for r in result.solutions] == [
        (0, 1),
        (1, -1),
        (1, 0),
        (2, -2),
        (3, -3),
        (4, -4),
        (5, -5),
    ]
    assert result.boundary == []
    assert all(r.size_class == SizeClass.SMALL for r in result.solutions)
    assert all(recheck_solution(unit_sum_2_half, r.x) for r in result.solutions)


def test_enumeration_is_thread_independent(unit_sum_2):
    single = enumerate_solutions(unit_sum_2, 20, threads=1)
    pooled = enumerate_solutions(unit_sum_2, 20, threads=2)
    assert [r.x for r in single.solutions] == [r.x for r in pooled.solutions]
    assert pooled.threads == 2


def test_large_solutions_are_classified(unit_sum_2):
    result = enumerate_solutions(unit_sum_2, 20)
    for record in result.solutions:
        expected = SizeClass.LARGE if record.height >= 16 else SizeClass.SMALL
        assert record.size_class == expected
        assert classify_size(record, unit_sum_2) == expected


def test_check_vector(unit_sum_2, cubic):
    assert check_vector(unit_sum_2, (7, -7))
    assert not check_vector(unit_sum_2, (1, 1))
    assert not check_vector(unit_sum_2, (0, 0))
    assert check_vector(cubic, (1, 0, 0))
    assert not check_vector(cubic, (1, 1, 1))


def test_cubic_enumeration_is_consistent(cubic):
    result = enumerate_solutions(cubic, 8)
    assert result.boundary == []
    xs = [r.x for r in result.solutions]
    assert (1, 0, 0) in xs
    for x in xs:
        assert check_vector(cubic, x)


POSITIVE_AT_INFINITY = {
    "name": "positive_at_infinity",
    "n": 2,
    "delta": "1",
    "meta": {"H": "1", "D": 1},
    "places": [
        {"place": "inf", "constant": "1", "forms": [["1", "0"], ["0", "1"]], "exponents": ["1", "1"]},
        {"place": "2", "constant": "1", "forms": [["1", "0"], ["0", "1"]], "exponents": ["0", "-4"]},
    ],
}


def _box_solutions(system, B):
    box = product(range(-B, B + 1), repeat=system.n)
    return sorted(
        (x for x in box if any(x) and next(c for c in x if c) > 0 and check_vector(system, x)),
        key=lambda x: (max(abs(c) for c in x), x),
    )


def test_positive_exponents_keep_every_pivot_value():
    system = system_from_mapping(POSITIVE_AT_INFINITY)
    assert validate_system(system) == []
    xs = [r.x for r in enumerate_solutions(system, 5).solutions]
    assert xs == [(0, 1), (1, -1), (1, 0), (1, 1), (2, 0), (3, 0), (4, 0), (5, 0)]


@pytest.mark.parametrize("name", ["positive", "unit_sum_2", "unit_sum_3", "two_places"])
def test_enumeration_matches_box_search(name, unit_sum_2, unit_sum_3, two_places):
    system = {
        "positive": system_from_mapping(POSITIVE_AT_INFINITY),
        "unit_sum_2": unit_sum_2,
        "unit_sum_3": unit_sum_3,
        "two_places": two_places,
    }[name]
    B = 3 if system.n == 3 else 6
    assert [r.x for r in enumerate_solutions(system, B).solutions] == _box_solutions(system, B)


@pytest.mark.parametrize("B_small", [1, 4, 9])
def test_smaller_bound_is_a_restriction(unit_sum_2, cubic, B_small):
    for system, B in ((unit_sum_2, 12), (cubic, 9)):
        full = enumerate_solutions(system, B).solutions
        small = enumerate_solutions(system, B_small).solutions
        assert [r.x for r in small] == [r.x for r in full if r.height <= B_small]

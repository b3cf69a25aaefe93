# tests/conftest.py

from fractions import Fraction
from pathlib import Path

import pytest

from subspace_lab.core.arith.algebraic import AlgebraicReal
from subspace_lab.core.subspace.cubic import cubic_system
from subspace_lab.core.subspace.systems import load_system, system_from_mapping

CONFIGS = Path(__file__).resolve().parents[1] / "configs"


@pytest.fixture(scope="session")
def configs_dir() -> Path:
    return CONFIGS


@pytest.fixture(scope="session")
def sqrt2() -> AlgebraicReal:
    return AlgebraicReal.parse("poly=[-2,0,1];interval=[1,2]")


@pytest.fixture(scope="session")
def cbrt2() -> AlgebraicReal:
    return AlgebraicReal.parse("poly=[-2,0,0,1];interval=[1,2]")


@pytest.fixture(scope="session")
def golden() -> AlgebraicReal:
    return AlgebraicReal.parse("poly=[-1,-1,1];interval=[1,2]")


@pytest.fixture(scope="session")
def cubic(cbrt2):
    return cubic_system(cbrt2, Fraction(1, 2))


@pytest.fixture(scope="session")
def cubic_file():
    return load_system(CONFIGS / "cubic.toml")


def unit_sum_mapping(n: int, delta: str) -> dict:
    """|x_1 + ... + x_n| <= H^(-(n-1)-delta), |x_j| <= H for j >= 2."""
    forms = [["1"] * n] + [["1" if k == j else "0" for k in range(n)] for j in range(1, n)]
    first = -(n - 1) - Fraction(delta)
    return {
        "name": f"unit_sum_{n}",
        "n": n,
        "delta": delta,
        "meta": {"H": "1", "D": 1},
        "places": [
            {
                "place": "inf",
                "constant": "1",
                "forms": forms,
                "exponents": [str(first)] + ["1"] * (n - 1),
            }
        ],
    }


@pytest.fixture(scope="session")
def unit_sum_2():
    return system_from_mapping(unit_sum_mapping(2, "1"))


@pytest.fixture(scope="session")
def unit_sum_2_half():
    return system_from_mapping(unit_sum_mapping(2, "1/2"))


@pytest.fixture(scope="session")
def unit_sum_3():
    return system_from_mapping(unit_sum_mapping(3, "1/2"))


@pytest.fixture(scope="session")
def two_places(configs_dir):
    return load_system(configs_dir / "two_places.toml")

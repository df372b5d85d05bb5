"""
Pytest configuration and shared fixtures.
"""
import sys
from pathlib import Path

import pytest

# Add project root to Python path
sys.path.insert(0, str(Path(__file__).parent.parent))

from qlab.config import get_settings  # noqa: E402
from qlab.model import Universe, build_v_stage  # noqa: E402
from qlab.quantales import QuantaleFactory  # noqa: E402
from qlab.schemas import DefConfig  # noqa: E402

BUILTINS = [
    "boolean:1",
    "boolean:2",
    "godel:3",
    "godel:5",
    "heyting:chain:4",
    "lukasiewicz:3",
    "lukasiewicz:5",
]


@pytest.fixture(autouse=True)
def fresh_settings():
    """Every test sees settings re-read from the environment."""
    get_settings.cache_clear()
    yield
    get_settings.cache_clear()


@pytest.fixture
def luk3():
    return QuantaleFactory.create("lukasiewicz:3")


@pytest.fixture
def luk5():
    return QuantaleFactory.create("lukasiewicz:5")


@pytest.fixture
def bool1():
    return QuantaleFactory.create("boolean:1")


@pytest.fixture
def heyting4():
    return QuantaleFactory.create("heyting:chain:4")


@pytest.fixture(params=BUILTINS)
def builtin(request):
    """Each builtin quantale of the acceptance list in turn."""
    return QuantaleFactory.create(request.param)


@pytest.fixture
def universe(luk3):
    return Universe(luk3)


@pytest.fixture
def v2(luk3, universe):
    """V_0..V_2 over lukasiewicz:3 with the full carrier: ids 0..3 are {}, {0:0}, {0:1/2}, {0:1}."""
    return build_v_stage(luk3, 2, universe=universe)


@pytest.fixture
def small_cfg():
    return DefConfig(max_depth=1, max_params=1)


@pytest.fixture
def broken_quantale_file(tmp_path):
    """Two-element tables whose product is neither commutative nor unital."""
    path = tmp_path / "broken.yaml"
    path.write_text(
        "name: broken\n"
        "labels: ['0', '1']\n"
        "leq: [[1, 1], [0, 1]]\n"
        "product: [[0, 0], [1, 1]]\n"
        "bottom: 0\n"
        "top: 1\n",
        encoding="utf-8",
    )
    return path

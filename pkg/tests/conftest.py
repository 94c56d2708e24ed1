import math

import pytest

from circlebin.model import Instance, Item


@pytest.fixture
def three_unit_instance():
    """Three unit circles in a bin just above the analytic optimal radius."""
    R = 1 + 2 / math.sqrt(3) + 1e-6
    return Instance("three_units", R, tuple(Item(i + 1, 1.0) for i in range(3)))


def make_instance(radii, R, name="test"):
    return Instance(name, R, tuple(Item(i + 1, r) for i, r in enumerate(radii)))
